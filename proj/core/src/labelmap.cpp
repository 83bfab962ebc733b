#include "roadrand/labelmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "roadrand/error.hpp"

namespace roadrand::labelmap {

LabelMap::LabelMap(int width, int height, ClassId fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "label dimensions must be >= 1");
  }
  classes_.assign(static_cast<std::size_t>(width) * height, fill);
}

LabelMap::LabelMap(int width, int height, std::vector<ClassId> classes)
    : width_(width), height_(height), classes_(std::move(classes)) {
  if (width < 1 || height < 1 ||
      classes_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "label raster length does not match width*height");
  }
}

RgbImage::RgbImage(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "image dimensions must be >= 1");
  }
  bytes_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < bytes_.size(); i += 3) {
    bytes_[i] = fill[0];
    bytes_[i + 1] = fill[1];
    bytes_[i + 2] = fill[2];
  }
}

Rgb RgbImage::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {bytes_[i], bytes_[i + 1], bytes_[i + 2]};
}

void RgbImage::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  bytes_[i] = c[0];
  bytes_[i + 1] = c[1];
  bytes_[i + 2] = c[2];
}

SceneClassConfig SceneClassConfig::defaults() {
  SceneClassConfig cfg;
  cfg.road_id = markings::kBackgroundId;
  for (ClassId id = 1; id <= markings::kDefaultMarkingClassCount; ++id) {
    cfg.marking_ids.insert(id);
  }
  cfg.ignore_id = 255;
  cfg.scene_classes = {{21, "sidewalk"},   {22, "vehicle"},    {23, "pedestrian"},
                       {24, "building"},   {25, "vegetation"}, {26, "sky"},
                       {27, "other"}};
  return cfg;
}

bool SceneClassConfig::is_known(ClassId id) const {
  return id == road_id || id == ignore_id || marking_ids.contains(id) ||
         scene_classes.contains(id);
}

void validate(const SceneClassConfig& cfg) {
  if (cfg.marking_ids.contains(cfg.road_id)) {
    throw Error(ErrorCode::kInvalidConfig, "road_id must not be a marking id");
  }
  if (cfg.road_id == cfg.ignore_id || cfg.marking_ids.contains(cfg.ignore_id)) {
    throw Error(ErrorCode::kInvalidConfig, "ignore_id overlaps road/marking ids");
  }
  for (const auto& [id, name] : cfg.scene_classes) {
    if (id == cfg.road_id || id == cfg.ignore_id || cfg.marking_ids.contains(id)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "scene class '" + name + "' reuses a road/marking/ignore id");
    }
  }
}

std::set<ClassId> unknown_ids(const LabelMap& label, const SceneClassConfig& cfg) {
  std::array<bool, 256> seen{};
  for (ClassId id : label.data()) seen[id] = true;
  std::set<ClassId> out;
  for (int id = 0; id < 256; ++id) {
    if (seen[id] && !cfg.is_known(static_cast<ClassId>(id))) {
      out.insert(static_cast<ClassId>(id));
    }
  }
  return out;
}

std::size_t count_id(const LabelMap& label, ClassId id) {
  return static_cast<std::size_t>(
      std::count(label.data().begin(), label.data().end(), id));
}

LabelMap erase_markings(const LabelMap& label, const SceneClassConfig& cfg) {
  std::array<bool, 256> is_marking{};
  for (ClassId id : cfg.marking_ids) is_marking[id] = true;
  LabelMap out = label;
  for (ClassId& id : out.data()) {
    if (is_marking[id]) id = cfg.road_id;
  }
  return out;
}

void scan_polygon(const Polygon& poly, int width, int height,
                  std::vector<std::uint32_t>& out) {
  const std::size_t n = poly.size();
  if (n < 3) return;
  double min_v = poly[0].y;
  double max_v = poly[0].y;
  for (const auto& p : poly) {
    min_v = std::min(min_v, p.y);
    max_v = std::max(max_v, p.y);
  }
  const int y0 = static_cast<int>(std::max(0.0, std::floor(min_v - 0.5)));
  const int y1 = static_cast<int>(
      std::min(static_cast<double>(height - 1), std::ceil(max_v)));
  std::vector<double> xs;
  for (int y = y0; y <= y1; ++y) {
    const double yc = y + 0.5;
    xs.clear();
    // Same crossing arithmetic as the classic point-in-polygon test, so pixel
    // membership agrees with a per-pixel even-odd query.
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2 a = poly[i];
      const Point2 b = poly[j];
      if ((a.y > yc) != (b.y > yc)) {
        xs.push_back((b.x - a.x) * (yc - a.y) / (b.y - a.y) + a.x);
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const double xa = xs[k];
      const double xb = xs[k + 1];
      if (xb <= 0.0 || xa >= width) continue;
      int c = static_cast<int>(std::max(0.0, std::floor(xa - 0.5)));
      while (c < width && c + 0.5 < xa) ++c;
      for (; c < width && c + 0.5 < xb; ++c) {
        out.push_back(static_cast<std::uint32_t>(y) * width + c);
      }
    }
  }
}

std::vector<Polygon> project_instance(const markings::MarkingInstance& instance,
                                      const geometry::Homography& h) {
  std::vector<Polygon> out;
  for (const Polygon& ground : markings::transform_to_ground(instance)) {
    const Polygon front =
        clip_half_plane(ground, h(2, 0), h(2, 1), h(2, 2) - kNearClipDepth);
    if (front.empty()) continue;
    Polygon image;
    image.reserve(front.size());
    for (const Point2& g : front) {
      const auto q = geometry::ground_to_image({g.x, g.y}, h);
      image.push_back({q.u, q.v});
    }
    out.push_back(std::move(image));
  }
  return out;
}

RasterizeResult rasterize_instance(const LabelMap& label,
                                   const markings::MarkingInstance& instance,
                                   const geometry::CameraRig& rig,
                                   const SceneClassConfig& cfg) {
  const geometry::Homography h = geometry::ground_homography(rig);
  const std::vector<Polygon> projected = project_instance(instance, h);
  if (projected.empty()) {
    throw Error(ErrorCode::kNotVisible,
                "marking '" + instance.class_name + "' lies entirely behind the camera");
  }

  RasterizeResult result;
  std::vector<std::uint32_t> footprint;
  for (const Polygon& poly : projected) {
    if (area(poly) < 1.0) {
      ++result.dropped_polygons;
      continue;
    }
    scan_polygon(poly, label.width(), label.height(), footprint);
  }
  std::sort(footprint.begin(), footprint.end());
  footprint.erase(std::unique(footprint.begin(), footprint.end()), footprint.end());
  result.footprint_pixels = footprint.size();

  result.label = label;
  for (std::uint32_t idx : footprint) {
    if (label[idx] == cfg.road_id) {
      result.label[idx] = instance.class_id;
      result.placed.push_back(idx);
    }
  }
  return result;
}

RgbImage composite_road_surface(const RgbImage& original,
                                const RgbImage& synthesized,
                                const LabelMap& label,
                                const SceneClassConfig& cfg,
                                int feather_radius) {
  const int w = label.width();
  const int h = label.height();
  if (original.width() != w || original.height() != h ||
      synthesized.width() != w || synthesized.height() != h) {
    throw Error(ErrorCode::kDimensionMismatch,
                "composite inputs must share dimensions");
  }
  if (feather_radius < 0) {
    throw Error(ErrorCode::kParameterOutOfRange, "feather radius must be >= 0");
  }
  std::vector<std::uint8_t> mask(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) {
    mask[i] = (label[i] == cfg.road_id || cfg.is_marking(label[i])) ? 1 : 0;
  }

  RgbImage out = original;
  if (feather_radius == 0) {
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      for (int ch = 0; ch < 3; ++ch) out.bytes()[3 * i + ch] = synthesized.bytes()[3 * i + ch];
    }
    return out;
  }

  // Box-filtered mask via a summed-area table.
  std::vector<std::int64_t> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      sat[(y + 1) * (w + 1) + x + 1] = mask[label.index(x, y)] +
                                       sat[y * (w + 1) + x + 1] +
                                       sat[(y + 1) * (w + 1) + x] -
                                       sat[y * (w + 1) + x];
    }
  }
  const int r = feather_radius;
  for (int y = 0; y < h; ++y) {
    const int ya = std::max(0, y - r);
    const int yb = std::min(h, y + r + 1);
    for (int x = 0; x < w; ++x) {
      const int xa = std::max(0, x - r);
      const int xb = std::min(w, x + r + 1);
      const double inside = static_cast<double>(
          sat[yb * (w + 1) + xb] - sat[ya * (w + 1) + xb] -
          sat[yb * (w + 1) + xa] + sat[ya * (w + 1) + xa]);
      const double alpha = inside / ((yb - ya) * (xb - xa));
      const std::size_t i = 3 * label.index(x, y);
      for (int ch = 0; ch < 3; ++ch) {
        const double v = alpha * synthesized.bytes()[i + ch] +
                         (1.0 - alpha) * original.bytes()[i + ch];
        out.bytes()[i + ch] = static_cast<std::uint8_t>(std::lround(v));
      }
    }
  }
  return out;
}

std::vector<Rgb> color_table(const markings::Palette& palette,
                             const SceneClassConfig& cfg) {
  std::vector<Rgb> colors(256);
  for (int id = 0; id < 256; ++id) {
    // Muted, deterministic colours for anything not named below.
    colors[id] = {static_cast<std::uint8_t>(90 + (id * 53) % 80),
                  static_cast<std::uint8_t>(90 + (id * 97) % 80),
                  static_cast<std::uint8_t>(90 + (id * 31) % 80)};
  }
  for (const auto& c : palette) colors[c.id] = c.color;
  colors[cfg.road_id] = {64, 64, 64};
  colors[cfg.ignore_id] = {0, 0, 0};
  return colors;
}

RgbImage render_preview(const LabelMap& label, const markings::Palette& palette,
                        const SceneClassConfig& cfg) {
  const std::vector<Rgb> colors = color_table(palette, cfg);
  RgbImage img(label.width(), label.height());
  for (std::size_t i = 0; i < label.size(); ++i) {
    const Rgb c = colors[label[i]];
    for (int ch = 0; ch < 3; ++ch) img.bytes()[3 * i + ch] = c[ch];
  }
  return img;
}

}  // namespace roadrand::labelmap
