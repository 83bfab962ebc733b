#pragma once

#include <vector>

namespace roadrand {

// 2-D point used both for metric road-plane polygons (x lateral, y forward)
// and for projected polygons in pixel space (x = u, y = v).
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

using Polygon = std::vector<Point2>;

struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;
};

// Shoelace area; positive for counter-clockwise vertex order.
double signed_area(const Polygon& poly);
double area(const Polygon& poly);
double total_area(const std::vector<Polygon>& polys);

// Area-weighted centroid of a polygon set. Requires non-zero total area.
Point2 centroid(const std::vector<Polygon>& polys);

Bounds bounds(const std::vector<Polygon>& polys);

// True if no two non-adjacent edges touch and adjacent edges only share their
// common vertex.
bool is_simple(const Polygon& poly);

// Keeps the part of a polygon where a*x + b*y + c >= 0 (Sutherland-Hodgman).
// Exact for convex polygons; for concave input the result may contain
// zero-width bridges along the clip line, which fill rules ignore.
Polygon clip_half_plane(const Polygon& poly, double a, double b, double c);

// Clips against a convex counter-clockwise polygon.
Polygon clip_convex(const Polygon& poly, const Polygon& convex_ccw);

// Rectangle covering the segment p0-p1 with the given width. `cap` extends
// both ends by half the width (square caps).
Polygon stroke_segment(Point2 p0, Point2 p1, double width, bool cap);

// Axis-aligned rectangle given its center and full extents, CCW.
Polygon axis_rect(double cx, double cy, double width, double height);

}  // namespace roadrand
