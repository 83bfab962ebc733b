#include "roadrand/labelmap.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roadrand/error.hpp"
#include "roadrand/rng.hpp"
#include "support/scenes.hpp"

namespace roadrand::labelmap {
namespace {

using roadrand::testing::default_rig;
using roadrand::testing::road_scene;

const SceneClassConfig kCfg = SceneClassConfig::defaults();

// W. R. Franklin's crossing test on the pixel center.
bool pnpoly(const Polygon& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

TEST(Erase, ReplacesMarkingsWithRoad) {
  const LabelMap in(4, 1, std::vector<ClassId>{0, 1, 22, 1});
  const LabelMap out = erase_markings(in, kCfg);
  EXPECT_EQ(out, LabelMap(4, 1, std::vector<ClassId>{0, 0, 22, 0}));
}

TEST(Erase, IdentityWithoutMarkingsAndIdempotent) {
  const LabelMap clean = road_scene(default_rig());
  EXPECT_EQ(erase_markings(clean, kCfg), clean);
  const LabelMap busy = roadrand::testing::cluttered_scene(default_rig(), 3);
  const LabelMap once = erase_markings(busy, kCfg);
  EXPECT_EQ(erase_markings(once, kCfg), once);
  std::size_t markings = 0;
  for (ClassId id : busy.data()) markings += kCfg.is_marking(id);
  EXPECT_EQ(count_id(once, 0), count_id(busy, 0) + markings);
}

TEST(Scan, MatchesPointInPolygonOnRandomPolygons) {
  CounterRng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    // Star-shaped polygons, sometimes reaching outside the raster.
    const double cx = rng.uniform(-10, 70);
    const double cy = rng.uniform(-10, 50);
    const int n = static_cast<int>(rng.between(3, 12));
    Polygon poly;
    for (int k = 0; k < n; ++k) {
      const double t = 2 * std::numbers::pi * (k + rng.uniform(0.0, 0.8)) / n;
      const double r = rng.uniform(2.0, 30.0);
      poly.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
    }
    std::vector<std::uint32_t> got;
    scan_polygon(poly, 64, 40, got);
    std::sort(got.begin(), got.end());
    std::vector<std::uint32_t> want;
    for (int y = 0; y < 40; ++y) {
      for (int x = 0; x < 64; ++x) {
        if (pnpoly(poly, x + 0.5, y + 0.5)) want.push_back(static_cast<std::uint32_t>(y * 64 + x));
      }
    }
    ASSERT_EQ(got, want) << "trial " << trial;
  }
}

TEST(Rasterize, FootprintOnOpenRoadMatchesOracle) {
  const auto rig = default_rig();
  const LabelMap road = road_scene(rig);
  const auto h = geometry::ground_homography(rig);
  for (const char* cls : {"zigzag", "bus_stop", "warning_triangle", "diagonal_stripes"}) {
    const auto inst = markings::instantiate(markings::builtin_palette(), cls, {}, {{0.5, 14.0}, 0.1});
    const RasterizeResult r = rasterize_instance(road, inst, rig, kCfg);
    ASSERT_EQ(r.dropped_polygons, 0u) << cls;
    std::vector<Polygon> image_polys;
    for (const auto& g : markings::transform_to_ground(inst)) {
      Polygon p;
      for (const auto& v : g) {
        const auto q = geometry::ground_to_image({v.x, v.y}, h);
        p.push_back({q.u, q.v});
      }
      image_polys.push_back(p);
    }
    std::vector<std::uint32_t> want;
    for (int y = 0; y < road.height(); ++y) {
      for (int x = 0; x < road.width(); ++x) {
        const bool inside = std::any_of(image_polys.begin(), image_polys.end(),
                                        [&](const Polygon& p) { return pnpoly(p, x + 0.5, y + 0.5); });
        if (inside && road.at(x, y) == 0) want.push_back(static_cast<std::uint32_t>(road.index(x, y)));
      }
    }
    EXPECT_EQ(r.placed, want) << cls;
    EXPECT_EQ(r.footprint_pixels, want.size()) << cls;
    for (std::size_t i = 0; i < road.size(); ++i) {
      const bool placed = std::binary_search(want.begin(), want.end(), static_cast<std::uint32_t>(i));
      EXPECT_EQ(r.label[i], placed ? inst.class_id : road[i]);
    }
  }
}

TEST(Rasterize, OccludedInstanceLeavesLabelUntouched) {
  const auto rig = default_rig();
  const LabelMap cars(rig.intrinsics.image_width, rig.intrinsics.image_height,
                      roadrand::testing::kVehicle);
  const auto inst = markings::instantiate(markings::builtin_palette(), "zigzag", {}, {{0.0, 12.0}, 0.0});
  const RasterizeResult r = rasterize_instance(cars, inst, rig, kCfg);
  EXPECT_EQ(r.label, cars);
  EXPECT_TRUE(r.placed.empty());
  EXPECT_GT(r.footprint_pixels, 0u);
}

TEST(Rasterize, FirstWriterWins) {
  const auto rig = default_rig();
  const LabelMap road = road_scene(rig);
  const auto& pal = markings::builtin_palette();
  const auto a = rasterize_instance(road, markings::instantiate(pal, "stop_line", {}, {{0.0, 10.0}, 0.0}), rig, kCfg);
  const auto b = rasterize_instance(a.label, markings::instantiate(pal, "lane_separator", {}, {{0.0, 12.0}, 0.0}), rig, kCfg);
  ASSERT_FALSE(a.placed.empty());
  ASSERT_FALSE(b.placed.empty());
  std::vector<std::uint32_t> both;
  std::set_intersection(a.placed.begin(), a.placed.end(), b.placed.begin(), b.placed.end(),
                        std::back_inserter(both));
  EXPECT_TRUE(both.empty());
  for (auto i : a.placed) EXPECT_EQ(b.label[i], 8);  // stop_line kept
  for (auto i : b.placed) EXPECT_EQ(a.label[i], 0);
}

TEST(Rasterize, BehindCameraIsNotVisible) {
  const auto rig = default_rig();
  const auto inst = markings::instantiate(markings::builtin_palette(), "stop_line", {}, {{0.0, -10.0}, 0.0});
  try {
    rasterize_instance(road_scene(rig), inst, rig, kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotVisible);
  }
}

TEST(Rasterize, NearPlaneClipKeepsVisiblePart) {
  const auto rig = default_rig();
  // A long bar straddling the camera: only the part in front is drawn.
  const auto inst = markings::instantiate(markings::builtin_palette(), "stop_line",
                                          {{"width", 0.3}, {"length", 20.0}}, {{0.0, 0.0}, 0.0});
  const auto r = rasterize_instance(road_scene(rig), inst, rig, kCfg);
  EXPECT_FALSE(r.placed.empty());
}

TEST(Rasterize, EraseRestoresMarkingFreeLabel) {
  const auto rig = default_rig();
  const LabelMap base = erase_markings(roadrand::testing::cluttered_scene(rig, 9), kCfg);
  LabelMap cur = base;
  const auto& pal = markings::builtin_palette();
  for (const char* cls : {"zigzag", "bus_stop", "chevron", "text_slow"}) {
    cur = rasterize_instance(cur, markings::instantiate(pal, cls, {}, {{-1.0, 15.0}, 0.05}), rig, kCfg).label;
  }
  EXPECT_NE(cur, base);
  EXPECT_EQ(erase_markings(cur, kCfg), base);
}

RgbImage solid(int w, int h, Rgb c) { return RgbImage(w, h, c); }

TEST(Composite, FullAndEmptyMasks) {
  const RgbImage orig = solid(8, 4, {10, 20, 30});
  RgbImage synth = solid(8, 4, {200, 100, 50});
  synth.set(3, 2, {1, 2, 3});
  EXPECT_EQ(composite_road_surface(orig, synth, LabelMap(8, 4, 0), kCfg), synth);
  EXPECT_EQ(composite_road_surface(orig, synth, LabelMap(8, 4, 26), kCfg), orig);
}

TEST(Composite, MixedMaskMatchesSelectOracle) {
  CounterRng rng(4);
  const int w = 33, h = 17;
  RgbImage orig(w, h), synth(w, h);
  LabelMap label(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      orig.set(x, y, {static_cast<std::uint8_t>(rng.below(256)), 7, 9});
      synth.set(x, y, {static_cast<std::uint8_t>(rng.below(256)), 1, 2});
      const std::uint64_t r = rng.below(4);
      label.at(x, y) = r == 0 ? 0 : r == 1 ? 5 : r == 2 ? 22 : 26;
    }
  }
  const RgbImage out = composite_road_surface(orig, synth, label, kCfg);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool road = label.at(x, y) == 0 || kCfg.is_marking(label.at(x, y));
      EXPECT_EQ(out.at(x, y), road ? synth.at(x, y) : orig.at(x, y));
    }
  }
  EXPECT_EQ(composite_road_surface(out, synth, label, kCfg), out);
  const RgbImage feathered = composite_road_surface(orig, synth, label, kCfg, 2);
  EXPECT_EQ(feathered.width(), w);
}

TEST(Composite, DimensionMismatch) {
  try {
    composite_road_surface(solid(4, 4, {}), solid(4, 5, {}), LabelMap(4, 4, 0), kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(SceneConfig, OverlapsRejected) {
  SceneClassConfig cfg = kCfg;
  cfg.marking_ids.insert(cfg.road_id);
  EXPECT_THROW(validate(cfg), Error);
  EXPECT_NO_THROW(validate(kCfg));
  const LabelMap odd(2, 1, std::vector<ClassId>{0, 99});
  EXPECT_EQ(unknown_ids(odd, kCfg), std::set<ClassId>{99});
}

}  // namespace
}  // namespace roadrand::labelmap
