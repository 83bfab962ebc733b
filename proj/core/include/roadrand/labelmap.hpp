#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "roadrand/geometry.hpp"
#include "roadrand/markings.hpp"

namespace roadrand::labelmap {

// Row-major raster of class ids.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, ClassId fill = 0);
  LabelMap(int width, int height, std::vector<ClassId> classes);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return classes_.size(); }

  ClassId at(int x, int y) const { return classes_[index(x, y)]; }
  ClassId& at(int x, int y) { return classes_[index(x, y)]; }
  ClassId operator[](std::size_t i) const { return classes_[i]; }
  ClassId& operator[](std::size_t i) { return classes_[i]; }

  const std::vector<ClassId>& data() const noexcept { return classes_; }
  std::vector<ClassId>& data() noexcept { return classes_; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<ClassId> classes_;
};

class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {0, 0, 0});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);

  // Interleaved RGB bytes, row-major.
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t>& bytes() noexcept { return bytes_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bytes_;
};

// Which raster ids mean drivable road, road marking, unlabelled, and the other
// (non-road) scene classes a source label may contain.
struct SceneClassConfig {
  ClassId road_id = 0;
  std::set<ClassId> marking_ids;
  ClassId ignore_id = 255;
  std::map<ClassId, std::string> scene_classes;

  // Defaults matching the built-in palette: road = background id 0, markings
  // 1..20, ignore 255 and a handful of occluding scene classes.
  static SceneClassConfig defaults();

  bool is_marking(ClassId id) const { return marking_ids.contains(id); }
  bool is_known(ClassId id) const;
};

// Throws kInvalidConfig when road/marking/ignore/scene ids overlap.
void validate(const SceneClassConfig& cfg);

// Ids in the label that are not road, ignore, marking or scene classes.
std::set<ClassId> unknown_ids(const LabelMap& label, const SceneClassConfig& cfg);

std::size_t count_id(const LabelMap& label, ClassId id);

LabelMap erase_markings(const LabelMap& label, const SceneClassConfig& cfg);

struct RasterizeResult {
  LabelMap label;
  // Raster indices written with the instance class, ascending.
  std::vector<std::uint32_t> placed;
  // Pixels inside the projected footprint (any current class), in-image.
  std::size_t footprint_pixels = 0;
  // Projected polygons skipped because their image area is below one pixel.
  std::size_t dropped_polygons = 0;
};

// Nearest camera depth a ground polygon is kept at; closer parts are clipped.
inline constexpr double kNearClipDepth = 0.5;

// Pixels whose centers fall inside a pixel-space polygon under the even-odd
// rule, clipped to the raster; appended to `out` unsorted.
void scan_polygon(const Polygon& image_poly, int width, int height,
                  std::vector<std::uint32_t>& out);

// Projects the instance onto the image and fills it, writing only pixels that
// currently hold cfg.road_id. Throws kNotVisible when no part of the instance
// lies in front of the camera.
RasterizeResult rasterize_instance(const LabelMap& label,
                                   const markings::MarkingInstance& instance,
                                   const geometry::CameraRig& rig,
                                   const SceneClassConfig& cfg);

// Pixel-space polygons of the instance after near-plane clipping.
std::vector<Polygon> project_instance(const markings::MarkingInstance& instance,
                                      const geometry::Homography& h);

// Replaces the road surface (road and marking pixels) of `original` with
// `synthesized`. A positive feather radius blends across the mask edge with a
// box-filtered mask.
RgbImage composite_road_surface(const RgbImage& original,
                                const RgbImage& synthesized,
                                const LabelMap& label,
                                const SceneClassConfig& cfg,
                                int feather_radius = 0);

// 256-entry display colour table: palette colours for marking classes, grey
// road, black ignore, fixed muted colours for scene classes and unknown ids.
std::vector<Rgb> color_table(const markings::Palette& palette,
                             const SceneClassConfig& cfg);

RgbImage render_preview(const LabelMap& label, const markings::Palette& palette,
                        const SceneClassConfig& cfg);

}  // namespace roadrand::labelmap
