#include "roadrand/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace roadrand {

double signed_area(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice += poly[j].x * poly[i].y - poly[i].x * poly[j].y;
  }
  return 0.5 * twice;
}

double area(const Polygon& poly) { return std::abs(signed_area(poly)); }

double total_area(const std::vector<Polygon>& polys) {
  double sum = 0.0;
  for (const auto& p : polys) sum += area(p);
  return sum;
}

Point2 centroid(const std::vector<Polygon>& polys) {
  double a_sum = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& poly : polys) {
    const std::size_t n = poly.size();
    if (n < 3) continue;
    double a = 0.0;
    double px = 0.0;
    double py = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const double cross = poly[j].x * poly[i].y - poly[i].x * poly[j].y;
      a += cross;
      px += (poly[j].x + poly[i].x) * cross;
      py += (poly[j].y + poly[i].y) * cross;
    }
    // Orientation-independent: weight by |area|.
    const double sign = a < 0.0 ? -1.0 : 1.0;
    a_sum += sign * a * 0.5;
    cx += sign * px / 6.0;
    cy += sign * py / 6.0;
  }
  return {cx / a_sum, cy / a_sum};
}

Bounds bounds(const std::vector<Polygon>& polys) {
  Bounds b{std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  for (const auto& poly : polys) {
    for (const auto& p : poly) {
      b.min_x = std::min(b.min_x, p.x);
      b.min_y = std::min(b.min_y, p.y);
      b.max_x = std::max(b.max_x, p.x);
      b.max_y = std::max(b.max_y, p.y);
    }
  }
  return b;
}

namespace {

double orient(Point2 a, Point2 b, Point2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

}  // namespace

bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 c = poly[j];
      const Point2 d = poly[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges must not fold back onto each other.
        const Point2 shared = (j == i + 1) ? b : a;
        const Point2 p = (j == i + 1) ? a : b;
        const Point2 q = (j == i + 1) ? d : c;
        if (orient(p, shared, q) == 0.0 &&
            (q.x - shared.x) * (p.x - shared.x) +
                    (q.y - shared.y) * (p.y - shared.y) > 0.0) {
          return false;
        }
        continue;
      }
      if (segments_touch(a, b, c, d)) return false;
    }
  }
  return true;
}

Polygon clip_half_plane(const Polygon& poly, double a, double b, double c) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 cur = poly[i];
    const Point2 nxt = poly[(i + 1) % n];
    const double sc = a * cur.x + b * cur.y + c;
    const double sn = a * nxt.x + b * nxt.y + c;
    if (sc >= 0.0) out.push_back(cur);
    if ((sc >= 0.0) != (sn >= 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  if (out.size() < 3) out.clear();
  return out;
}

Polygon clip_convex(const Polygon& poly, const Polygon& convex_ccw) {
  Polygon out = poly;
  const std::size_t n = convex_ccw.size();
  for (std::size_t i = 0; i < n && !out.empty(); ++i) {
    const Point2 p = convex_ccw[i];
    const Point2 q = convex_ccw[(i + 1) % n];
    // Left of p->q is inside for a CCW clip polygon.
    const double a = -(q.y - p.y);
    const double b = q.x - p.x;
    const double c = -(a * p.x + b * p.y);
    out = clip_half_plane(out, a, b, c);
  }
  return out;
}

Polygon stroke_segment(Point2 p0, Point2 p1, double width, bool cap) {
  double dx = p1.x - p0.x;
  double dy = p1.y - p0.y;
  const double len = std::hypot(dx, dy);
  dx /= len;
  dy /= len;
  const double h = 0.5 * width;
  if (cap) {
    p0 = {p0.x - dx * h, p0.y - dy * h};
    p1 = {p1.x + dx * h, p1.y + dy * h};
  }
  const double nx = -dy * h;
  const double ny = dx * h;
  return {{p0.x - nx, p0.y - ny},
          {p1.x - nx, p1.y - ny},
          {p1.x + nx, p1.y + ny},
          {p0.x + nx, p0.y + ny}};
}

Polygon axis_rect(double cx, double cy, double width, double height) {
  const double hw = 0.5 * width;
  const double hh = 0.5 * height;
  return {{cx - hw, cy - hh}, {cx + hw, cy - hh}, {cx + hw, cy + hh},
          {cx - hw, cy + hh}};
}

}  // namespace roadrand
