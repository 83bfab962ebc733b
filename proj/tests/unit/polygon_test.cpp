#include "roadrand/polygon.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace roadrand {
namespace {

TEST(Polygon, ShoelaceAreaAndOrientation) {
  const Polygon sq = axis_rect(0.0, 0.0, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(signed_area(sq), 6.0);
  Polygon cw(sq.rbegin(), sq.rend());
  EXPECT_DOUBLE_EQ(signed_area(cw), -6.0);
  EXPECT_DOUBLE_EQ(area(cw), 6.0);
}

TEST(Polygon, CentroidIsAreaWeighted) {
  const std::vector<Polygon> set = {axis_rect(0.0, 0.0, 1.0, 1.0),
                                    axis_rect(3.0, 0.0, 1.0, 3.0)};
  const Point2 c = centroid(set);
  EXPECT_NEAR(c.x, (0.0 * 1.0 + 3.0 * 3.0) / 4.0, 1e-12);
  EXPECT_NEAR(c.y, 0.0, 1e-12);
}

TEST(Polygon, SimplicityDetectsBowtie) {
  EXPECT_TRUE(is_simple(axis_rect(0, 0, 1, 1)));
  const Polygon bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  EXPECT_FALSE(is_simple(bowtie));
  const Polygon foldback = {{0, 0}, {2, 0}, {1, 0}, {1, 1}};
  EXPECT_FALSE(is_simple(foldback));
}

TEST(Polygon, HalfPlaneClipKeepsPositiveSide) {
  const Polygon sq = axis_rect(0.0, 0.0, 2.0, 2.0);
  const Polygon upper = clip_half_plane(sq, 0.0, 1.0, 0.0);  // y >= 0
  EXPECT_NEAR(area(upper), 2.0, 1e-12);
  EXPECT_TRUE(clip_half_plane(sq, 0.0, 1.0, -5.0).empty());
  EXPECT_NEAR(area(clip_half_plane(sq, 0.0, 1.0, 5.0)), 4.0, 1e-12);
}

TEST(Polygon, ConvexClipOfOverlappingSquares) {
  const Polygon a = axis_rect(0.0, 0.0, 2.0, 2.0);
  const Polygon b = axis_rect(1.0, 1.0, 2.0, 2.0);
  EXPECT_NEAR(area(clip_convex(a, b)), 1.0, 1e-12);
}

TEST(Polygon, StrokeSegmentCoversWidthTimesLength) {
  const Polygon s = stroke_segment({0, 0}, {3, 4}, 0.5, false);
  EXPECT_NEAR(area(s), 5.0 * 0.5, 1e-12);
  EXPECT_GT(signed_area(s), 0.0);
  EXPECT_NEAR(area(stroke_segment({0, 0}, {3, 4}, 0.5, true)), 5.5 * 0.5, 1e-12);
}

}  // namespace
}  // namespace roadrand
