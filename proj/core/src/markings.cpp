#include "roadrand/markings.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include "roadrand/error.hpp"

namespace roadrand::markings {
namespace {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Parameter access

class Params {
 public:
  explicit Params(const ParamSet& p) : p_(p) {}

  double operator[](const std::string& name) const {
    auto it = p_.find(name);
    if (it == p_.end()) {
      throw Error(ErrorCode::kParameterOutOfRange,
                  "missing template parameter '" + name + "'");
    }
    return it->second;
  }
  int count(const std::string& name) const {
    return static_cast<int>(std::lround((*this)[name]));
  }

 private:
  const ParamSet& p_;
};

[[noreturn]] void bad_param(const std::string& what) {
  throw Error(ErrorCode::kParameterOutOfRange, what);
}

// ---------------------------------------------------------------------------
// Geometry helpers

// Number of chords needed so a circular arc of the given radius and sweep
// deviates from its polyline by at most `tolerance`.
int arc_segments(double radius, double sweep, double tolerance) {
  const double ratio = std::clamp(1.0 - tolerance / radius, -1.0, 1.0);
  const double max_step = 2.0 * std::acos(ratio);
  const int n = static_cast<int>(std::ceil(std::abs(sweep) / max_step));
  return std::max(n, 2);
}

// Band between two concentric arcs as one simple polygon.
Polygon arc_band(Point2 center, double r_inner, double r_outer, double a0,
                 double a1, double tolerance) {
  const int n = arc_segments(r_outer, a1 - a0, tolerance);
  Polygon poly;
  poly.reserve(2 * (n + 1));
  for (int i = 0; i <= n; ++i) {
    const double a = a0 + (a1 - a0) * i / n;
    poly.push_back({center.x + r_outer * std::cos(a),
                    center.y + r_outer * std::sin(a)});
  }
  for (int i = n; i >= 0; --i) {
    const double a = a0 + (a1 - a0) * i / n;
    poly.push_back({center.x + r_inner * std::cos(a),
                    center.y + r_inner * std::sin(a)});
  }
  return poly;
}

// Full ring split into quadrilateral segments (a ring is not simple).
std::vector<Polygon> ring(Point2 center, double radius, double stroke,
                          double tolerance) {
  const double r_out = radius + 0.5 * stroke;
  const double r_in = radius - 0.5 * stroke;
  const int n = std::max(arc_segments(r_out, 2.0 * pi, tolerance), 8);
  std::vector<Polygon> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a0 = 2.0 * pi * i / n;
    const double a1 = 2.0 * pi * (i + 1) / n;
    out.push_back({{center.x + r_out * std::cos(a0), center.y + r_out * std::sin(a0)},
                   {center.x + r_out * std::cos(a1), center.y + r_out * std::sin(a1)},
                   {center.x + r_in * std::cos(a1), center.y + r_in * std::sin(a1)},
                   {center.x + r_in * std::cos(a0), center.y + r_in * std::sin(a0)}});
  }
  return out;
}

// Thick polyline with mitred joins, returned as one polygon: left offsets in
// order followed by right offsets in reverse.
Polygon thick_polyline(const std::vector<Point2>& line, double width) {
  const std::size_t n = line.size();
  const double h = 0.5 * width;
  std::vector<Point2> normals(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dx = line[i + 1].x - line[i].x;
    const double dy = line[i + 1].y - line[i].y;
    const double len = std::hypot(dx, dy);
    normals[i] = {-dy / len, dx / len};
  }
  std::vector<Point2> offsets(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0) {
      offsets[k] = {normals[0].x * h, normals[0].y * h};
    } else if (k == n - 1) {
      offsets[k] = {normals[n - 2].x * h, normals[n - 2].y * h};
    } else {
      const Point2 a = normals[k - 1];
      const Point2 b = normals[k];
      Point2 m{a.x + b.x, a.y + b.y};
      const double ml = std::hypot(m.x, m.y);
      m = {m.x / ml, m.y / ml};
      const double scale = h / (m.x * a.x + m.y * a.y);
      offsets[k] = {m.x * scale, m.y * scale};
    }
  }
  Polygon poly;
  poly.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    poly.push_back({line[k].x + offsets[k].x, line[k].y + offsets[k].y});
  }
  for (std::size_t k = n; k-- > 0;) {
    poly.push_back({line[k].x - offsets[k].x, line[k].y - offsets[k].y});
  }
  return poly;
}

// Parallel bands of the given width and perpendicular spacing crossing a
// convex CCW region, clipped to it. Bands run along `angle` (from +x).
std::vector<Polygon> hatch(const Polygon& region, double angle, double width,
                           double spacing) {
  const Point2 dir{std::cos(angle), std::sin(angle)};
  const Point2 nrm{-dir.y, dir.x};
  const Bounds b = bounds({region});
  const Point2 c{0.5 * (b.min_x + b.max_x), 0.5 * (b.min_y + b.max_y)};
  const double reach = std::hypot(b.max_x - b.min_x, b.max_y - b.min_y);
  const int k_max = static_cast<int>(std::ceil(0.5 * reach / spacing)) + 1;
  const double min_area = 0.05 * width * width;
  std::vector<Polygon> out;
  for (int k = -k_max; k <= k_max; ++k) {
    const Point2 o{c.x + nrm.x * k * spacing, c.y + nrm.y * k * spacing};
    Polygon band = stroke_segment({o.x - dir.x * reach, o.y - dir.y * reach},
                                  {o.x + dir.x * reach, o.y + dir.y * reach},
                                  width, false);
    Polygon piece = clip_convex(band, region);
    if (piece.size() >= 3 && area(piece) > min_area) out.push_back(std::move(piece));
  }
  return out;
}

// Outline of an axis-aligned rectangle as four non-overlapping strips.
std::vector<Polygon> rect_outline(double cx, double cy, double width,
                                  double length, double line) {
  return {axis_rect(cx - 0.5 * width + 0.5 * line, cy, line, length),
          axis_rect(cx + 0.5 * width - 0.5 * line, cy, line, length),
          axis_rect(cx, cy - 0.5 * length + 0.5 * line, width - 2.0 * line, line),
          axis_rect(cx, cy + 0.5 * length - 0.5 * line, width - 2.0 * line, line)};
}

// Triangle outline as three mitred quadrilaterals between the outer triangle
// and its inward offset.
std::vector<Polygon> triangle_outline(const std::array<Point2, 3>& outer,
                                      double stroke) {
  const auto len = [](Point2 p, Point2 q) { return std::hypot(q.x - p.x, q.y - p.y); };
  const double a = len(outer[1], outer[2]);
  const double b = len(outer[2], outer[0]);
  const double c = len(outer[0], outer[1]);
  const double perim = a + b + c;
  const Point2 inc{(a * outer[0].x + b * outer[1].x + c * outer[2].x) / perim,
                   (a * outer[0].y + b * outer[1].y + c * outer[2].y) / perim};
  const double tri_area = std::abs(signed_area({outer[0], outer[1], outer[2]}));
  const double inradius = 2.0 * tri_area / perim;
  if (stroke >= 0.9 * inradius) {
    bad_param("triangle stroke_width must be below 0.9x the inradius (" +
              std::to_string(0.9 * inradius) + " m)");
  }
  const double k = (inradius - stroke) / inradius;
  std::array<Point2, 3> inner;
  for (int i = 0; i < 3; ++i) {
    inner[i] = {inc.x + k * (outer[i].x - inc.x), inc.y + k * (outer[i].y - inc.y)};
  }
  std::vector<Polygon> out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    out.push_back({outer[i], outer[j], inner[j], inner[i]});
  }
  return out;
}

// Minimal block stroke font on a 4x6 grid. Only the letters used by the
// built-in text markings are defined.
using Stroke = std::array<std::array<int, 2>, 2>;

const std::map<char, std::vector<Stroke>>& stroke_font() {
  static const std::map<char, std::vector<Stroke>> font = {
      {'B', {{{{0, 0}, {0, 6}}}, {{{0, 6}, {3, 6}}}, {{{3, 6}, {4, 5}}},
             {{{4, 5}, {4, 4}}}, {{{4, 4}, {3, 3}}}, {{{0, 3}, {3, 3}}},
             {{{3, 3}, {4, 2}}}, {{{4, 2}, {4, 1}}}, {{{4, 1}, {3, 0}}},
             {{{3, 0}, {0, 0}}}}},
      {'L', {{{{0, 6}, {0, 0}}}, {{{0, 0}, {4, 0}}}}},
      {'O', {{{{1, 0}, {3, 0}}}, {{{3, 0}, {4, 1}}}, {{{4, 1}, {4, 5}}},
             {{{4, 5}, {3, 6}}}, {{{3, 6}, {1, 6}}}, {{{1, 6}, {0, 5}}},
             {{{0, 5}, {0, 1}}}, {{{0, 1}, {1, 0}}}}},
      {'P', {{{{0, 0}, {0, 6}}}, {{{0, 6}, {3, 6}}}, {{{3, 6}, {4, 5}}},
             {{{4, 5}, {4, 4}}}, {{{4, 4}, {3, 3}}}, {{{3, 3}, {0, 3}}}}},
      {'S', {{{{4, 6}, {1, 6}}}, {{{1, 6}, {0, 5}}}, {{{0, 5}, {0, 4}}},
             {{{0, 4}, {1, 3}}}, {{{1, 3}, {3, 3}}}, {{{3, 3}, {4, 2}}},
             {{{4, 2}, {4, 1}}}, {{{4, 1}, {3, 0}}}, {{{3, 0}, {0, 0}}}}},
      {'T', {{{{0, 6}, {4, 6}}}, {{{2, 6}, {2, 0}}}}},
      {'U', {{{{0, 6}, {0, 1}}}, {{{0, 1}, {1, 0}}}, {{{1, 0}, {3, 0}}},
             {{{3, 0}, {4, 1}}}, {{{4, 1}, {4, 6}}}}},
      {'W', {{{{0, 6}, {1, 0}}}, {{{1, 0}, {2, 3}}}, {{{2, 3}, {3, 0}}},
             {{{3, 0}, {4, 6}}}}},
  };
  return font;
}

// One line of text laid out along +x with its baseline at y0 (text is read
// from the driver's viewpoint: glyph "up" is +forward).
void append_text(std::vector<Polygon>& out, std::string_view text, double cx,
                 double y0, double letter_width, double letter_height,
                 double stroke, double gap) {
  const double total =
      text.size() * letter_width + (text.size() - 1) * gap;
  double x0 = cx - 0.5 * total;
  for (char ch : text) {
    const auto& glyph = stroke_font().at(ch);
    const auto map = [&](std::array<int, 2> g) {
      return Point2{x0 + 0.5 * stroke + g[0] / 4.0 * (letter_width - stroke),
                    y0 + 0.5 * stroke + g[1] / 6.0 * (letter_height - stroke)};
    };
    for (const Stroke& s : glyph) {
      out.push_back(stroke_segment(map(s[0]), map(s[1]), stroke, true));
    }
    x0 += letter_width + gap;
  }
}

Polygon arrow_polygon(double length, double shaft_width, double head_length,
                      double head_width) {
  const double s = 0.5 * shaft_width;
  const double h = 0.5 * head_width;
  const double neck = length - head_length;
  return {{-s, 0.0}, {s, 0.0}, {s, neck}, {h, neck},
          {0.0, length}, {-h, neck}, {-s, neck}};
}

// Right-turning branch leaving a vertical shaft at (0, y0): a quarter arc of
// centerline radius r followed by a head pointing along +x. Mirrored for
// left turns by the caller.
std::vector<Polygon> turn_branch(double y0, double shaft_width, double radius,
                                 double head_length, double head_width,
                                 double tolerance) {
  std::vector<Polygon> out;
  const Point2 center{radius, y0};
  out.push_back(arc_band(center, radius - 0.5 * shaft_width,
                         radius + 0.5 * shaft_width, pi, 0.5 * pi, tolerance));
  const double yh = y0 + radius;
  out.push_back({{radius, yh - 0.5 * head_width},
                 {radius + head_length, yh},
                 {radius, yh + 0.5 * head_width}});
  return out;
}

void mirror_x(std::vector<Polygon>& polys) {
  for (auto& p : polys) {
    for (auto& v : p) v.x = -v.x;
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) bad_param(what);
}

int turn_direction(const Params& p) {
  const int dir = p.count("direction");
  require(dir == -1 || dir == 1, "direction must be -1 (left) or +1 (right)");
  return dir;
}

// ---------------------------------------------------------------------------
// Templates

using Generator = std::function<std::vector<Polygon>(const Params&)>;

struct TemplateEntry {
  TemplateInfo info;
  Generator generate;
};

ParamSpec real(std::string name, std::string unit, double def, double lo,
               double hi, std::string doc) {
  return {std::move(name), std::move(unit), def, lo, hi, false, std::move(doc)};
}
ParamSpec count(std::string name, double def, double lo, double hi,
                std::string doc) {
  return {std::move(name), "count", def, lo, hi, true, std::move(doc)};
}

ParamSpec tolerance_param() {
  return real("flatten_tolerance", "m", 0.01, 0.001, 0.1,
              "maximum chord deviation when flattening curves");
}

std::vector<TemplateEntry> make_templates() {
  std::vector<TemplateEntry> t;

  t.push_back({{"rectangle",
                "solid axis-aligned bar",
                {real("width", "m", 0.3, 0.01, 30.0, "lateral extent"),
                 real("length", "m", 3.0, 0.01, 60.0, "forward extent")}},
               [](const Params& p) -> std::vector<Polygon> {
                 return {axis_rect(0.0, 0.0, p["width"], p["length"])};
               }});

  t.push_back({{"dashed_line",
                "dashes along the driving direction",
                {real("line_width", "m", 0.1, 0.02, 1.0, "dash width"),
                 real("dash_length", "m", 3.0, 0.1, 20.0, "length of one dash"),
                 real("gap_length", "m", 6.0, 0.05, 30.0, "gap between dashes"),
                 count("dashes", 3, 1, 20, "number of dashes")}},
               [](const Params& p) {
                 std::vector<Polygon> out;
                 const double d = p["dash_length"];
                 const double g = p["gap_length"];
                 for (int i = 0; i < p.count("dashes"); ++i) {
                   out.push_back(axis_rect(0.0, i * (d + g) + 0.5 * d,
                                           p["line_width"], d));
                 }
                 return out;
               }});

  t.push_back({{"parallel_lines",
                "solid lines side by side",
                {real("line_width", "m", 0.1, 0.02, 1.0, "width of each line"),
                 real("line_gap", "m", 0.2, 0.05, 3.0, "clear gap between lines"),
                 real("length", "m", 10.0, 0.5, 60.0, "forward extent"),
                 count("lines", 2, 1, 4, "number of lines")}},
               [](const Params& p) {
                 std::vector<Polygon> out;
                 const double w = p["line_width"];
                 for (int i = 0; i < p.count("lines"); ++i) {
                   out.push_back(axis_rect(i * (w + p["line_gap"]), 0.0, w,
                                           p["length"]));
                 }
                 return out;
               }});

  t.push_back({{"parking_bay",
                "U-shaped bay outline closed at the far end",
                {real("bay_width", "m", 2.4, 1.5, 5.0, "lateral bay size"),
                 real("bay_length", "m", 5.0, 3.0, 10.0, "forward bay size"),
                 real("line_width", "m", 0.1, 0.02, 0.5, "outline width")}},
               [](const Params& p) -> std::vector<Polygon> {
                 const double W = p["bay_width"];
                 const double L = p["bay_length"];
                 const double w = p["line_width"];
                 require(2.0 * w < W && w < L, "parking_bay line_width too large");
                 return {axis_rect(-0.5 * W + 0.5 * w, 0.5 * L, w, L),
                         axis_rect(0.5 * W - 0.5 * w, 0.5 * L, w, L),
                         axis_rect(0.0, L - 0.5 * w, W - 2.0 * w, w)};
               }});

  t.push_back({{"transverse_dashes",
                "rows of short dashes across the carriageway",
                {real("span", "m", 3.6, 0.5, 15.0, "lateral extent of a row"),
                 real("dash_length", "m", 0.6, 0.1, 3.0, "lateral dash size"),
                 real("dash_gap", "m", 0.3, 0.05, 3.0, "gap between dashes"),
                 real("thickness", "m", 0.2, 0.05, 1.0, "forward dash size"),
                 count("rows", 2, 1, 3, "number of rows"),
                 real("row_gap", "m", 0.3, 0.05, 2.0, "clear gap between rows")}},
               [](const Params& p) {
                 const double d = p["dash_length"];
                 const double g = p["dash_gap"];
                 const int n = static_cast<int>(std::floor((p["span"] + g) / (d + g)));
                 require(n >= 1, "transverse_dashes span shorter than one dash");
                 const double total = n * d + (n - 1) * g;
                 const double t = p["thickness"];
                 std::vector<Polygon> out;
                 for (int r = 0; r < p.count("rows"); ++r) {
                   for (int j = 0; j < n; ++j) {
                     out.push_back(axis_rect(-0.5 * total + j * (d + g) + 0.5 * d,
                                             r * (t + p["row_gap"]) + 0.5 * t, d, t));
                   }
                 }
                 return out;
               }});

  t.push_back({{"triangle",
                "isosceles triangle, apex toward the approaching driver",
                {real("side", "m", 1.0, 0.1, 10.0, "base length"),
                 real("elongation", "ratio", 1.0, 0.5, 6.0,
                      "height divided by the equilateral height"),
                 count("filled", 0, 0, 1, "1 = solid, 0 = outline"),
                 real("stroke_width", "m", 0.12, 0.02, 1.0, "outline width")}},
               [](const Params& p) -> std::vector<Polygon> {
                 const double s = p["side"];
                 const double h = p["elongation"] * s * std::sqrt(3.0) / 2.0;
                 const std::array<Point2, 3> outer{
                     Point2{0.0, 0.0}, Point2{0.5 * s, h}, Point2{-0.5 * s, h}};
                 if (p.count("filled") == 1) return {{outer[0], outer[1], outer[2]}};
                 return triangle_outline(outer, p["stroke_width"]);
               }});

  t.push_back({{"zigzag",
                "parallel zigzag runs (dual or triple configuration)",
                {real("stroke_width", "m", 0.1, 0.02, 0.5, "line width"),
                 real("amplitude", "m", 0.45, 0.05, 2.0,
                      "peak-to-peak lateral excursion of the centerline"),
                 real("half_period", "m", 2.0, 0.2, 10.0,
                      "forward length of one zig segment"),
                 count("periods", 4, 1, 16, "full zig-zag periods per run"),
                 count("runs", 2, 2, 3, "2 = dual, 3 = triple configuration"),
                 real("run_spacing", "m", 3.0, 0.5, 10.0,
                      "lateral distance between run centerlines")}},
               [](const Params& p) {
                 const double a = p["amplitude"];
                 const double hp = p["half_period"];
                 const int segments = 2 * p.count("periods");
                 std::vector<Polygon> out;
                 for (int r = 0; r < p.count("runs"); ++r) {
                   std::vector<Point2> line;
                   const double x = r * p["run_spacing"];
                   for (int k = 0; k <= segments; ++k) {
                     line.push_back({x + (k % 2 == 0 ? -0.5 * a : 0.5 * a), k * hp});
                   }
                   out.push_back(thick_polyline(line, p["stroke_width"]));
                 }
                 return out;
               }});

  t.push_back({{"hatched_area",
                "diagonal stripes between two solid border lines",
                {real("width", "m", 3.0, 0.5, 10.0, "lateral extent"),
                 real("length", "m", 10.0, 1.0, 60.0, "forward extent"),
                 real("border_width", "m", 0.15, 0.02, 0.5, "side line width"),
                 real("stripe_width", "m", 0.3, 0.05, 1.0, "stripe width"),
                 real("stripe_spacing", "m", 1.5, 0.3, 10.0,
                      "perpendicular distance between stripes"),
                 real("stripe_angle", "rad", 0.785, 0.2, 1.4,
                      "stripe angle measured from the lateral axis")}},
               [](const Params& p) {
                 const double W = p["width"];
                 const double L = p["length"];
                 const double bw = p["border_width"];
                 require(2.0 * bw < W, "hatched_area border wider than the area");
                 std::vector<Polygon> out{axis_rect(-0.5 * W + 0.5 * bw, 0.0, bw, L),
                                          axis_rect(0.5 * W - 0.5 * bw, 0.0, bw, L)};
                 const Polygon inner = axis_rect(0.0, 0.0, W - 2.0 * bw, L);
                 for (auto& s : hatch(inner, p["stripe_angle"], p["stripe_width"],
                                      p["stripe_spacing"])) {
                   out.push_back(std::move(s));
                 }
                 return out;
               }});

  t.push_back({{"box_junction",
                "box outline with criss-cross hatching",
                {real("width", "m", 8.0, 2.0, 30.0, "lateral extent"),
                 real("length", "m", 8.0, 2.0, 30.0, "forward extent"),
                 real("border_width", "m", 0.15, 0.02, 0.5, "outline width"),
                 real("hatch_width", "m", 0.1, 0.02, 0.5, "hatch line width"),
                 real("hatch_spacing", "m", 2.0, 0.5, 10.0,
                      "perpendicular distance between hatch lines")}},
               [](const Params& p) {
                 const double W = p["width"];
                 const double L = p["length"];
                 const double bw = p["border_width"];
                 std::vector<Polygon> out = rect_outline(0.0, 0.0, W, L, bw);
                 const Polygon inner = axis_rect(0.0, 0.0, W - 2.0 * bw, L - 2.0 * bw);
                 for (double angle : {0.25 * pi, 0.75 * pi}) {
                   for (auto& s : hatch(inner, angle, p["hatch_width"],
                                        p["hatch_spacing"])) {
                     out.push_back(std::move(s));
                   }
                 }
                 return out;
               }});

  t.push_back({{"zebra",
                "crossing stripes parallel to the driving direction",
                {count("stripe_count", 6, 1, 20, "number of stripes"),
                 real("stripe_width", "m", 0.5, 0.2, 1.0, "lateral stripe size"),
                 real("stripe_gap", "m", 0.5, 0.2, 1.5, "gap between stripes"),
                 real("stripe_length", "m", 2.4, 1.0, 5.0, "forward stripe size")}},
               [](const Params& p) {
                 std::vector<Polygon> out;
                 const double w = p["stripe_width"];
                 for (int i = 0; i < p.count("stripe_count"); ++i) {
                   out.push_back(axis_rect(i * (w + p["stripe_gap"]), 0.0, w,
                                           p["stripe_length"]));
                 }
                 return out;
               }});

  t.push_back({{"dots",
                "rows of square dots across the carriageway",
                {real("dot_size", "m", 0.4, 0.1, 1.0, "side of each square dot"),
                 real("dot_gap", "m", 0.4, 0.05, 2.0, "gap between dots"),
                 count("count", 8, 1, 30, "dots per row"),
                 count("rows", 2, 1, 3, "number of rows"),
                 real("row_spacing", "m", 2.4, 0.5, 6.0,
                      "forward distance between row centers")}},
               [](const Params& p) {
                 std::vector<Polygon> out;
                 const double s = p["dot_size"];
                 for (int r = 0; r < p.count("rows"); ++r) {
                   for (int i = 0; i < p.count("count"); ++i) {
                     out.push_back(axis_rect(i * (s + p["dot_gap"]),
                                             r * p["row_spacing"], s, s));
                   }
                 }
                 return out;
               }});

  t.push_back({{"arrow_straight",
                "straight-ahead arrow",
                {real("length", "m", 6.0, 1.0, 12.0, "tail to tip"),
                 real("shaft_width", "m", 0.2, 0.05, 1.0, "shaft width"),
                 real("head_length", "m", 1.5, 0.2, 5.0, "head length"),
                 real("head_width", "m", 0.6, 0.1, 3.0, "head base width")}},
               [](const Params& p) -> std::vector<Polygon> {
                 require(p["head_width"] > p["shaft_width"],
                         "head_width must exceed shaft_width");
                 require(p["head_length"] < p["length"],
                         "head_length must be shorter than length");
                 return {arrow_polygon(p["length"], p["shaft_width"],
                                       p["head_length"], p["head_width"])};
               }});

  t.push_back({{"arrow_turn",
                "turn arrow: straight shaft, quarter arc, sideways head",
                {count("direction", -1, -1, 1, "-1 = left, +1 = right"),
                 real("shaft_length", "m", 3.0, 0.5, 10.0, "straight part"),
                 real("shaft_width", "m", 0.2, 0.05, 1.0, "shaft width"),
                 real("turn_radius", "m", 1.2, 0.3, 5.0, "arc centerline radius"),
                 real("head_length", "m", 1.0, 0.2, 5.0, "head length"),
                 real("head_width", "m", 0.6, 0.1, 3.0, "head base width"),
                 tolerance_param()}},
               [](const Params& p) {
                 const int dir = turn_direction(p);
                 const double sw = p["shaft_width"];
                 require(p["head_width"] > sw, "head_width must exceed shaft_width");
                 require(p["turn_radius"] > sw, "turn_radius must exceed shaft_width");
                 std::vector<Polygon> out{
                     axis_rect(0.0, 0.5 * p["shaft_length"], sw, p["shaft_length"])};
                 for (auto& b : turn_branch(p["shaft_length"], sw, p["turn_radius"],
                                            p["head_length"], p["head_width"],
                                            p["flatten_tolerance"])) {
                   out.push_back(std::move(b));
                 }
                 if (dir < 0) mirror_x(out);
                 return out;
               }});

  t.push_back({{"arrow_straight_turn",
                "straight arrow with a turning branch",
                {count("direction", -1, -1, 1, "-1 = left branch, +1 = right"),
                 real("length", "m", 6.0, 1.0, 12.0, "tail to tip"),
                 real("shaft_width", "m", 0.2, 0.05, 1.0, "shaft width"),
                 real("head_length", "m", 1.5, 0.2, 5.0, "main head length"),
                 real("head_width", "m", 0.6, 0.1, 3.0, "head base width"),
                 real("branch_start", "m", 2.0, 0.3, 8.0,
                      "distance from the tail where the branch leaves"),
                 real("turn_radius", "m", 1.2, 0.3, 5.0, "branch arc radius"),
                 real("branch_head_length", "m", 1.0, 0.2, 5.0, "branch head length"),
                 tolerance_param()}},
               [](const Params& p) {
                 const int dir = turn_direction(p);
                 const double sw = p["shaft_width"];
                 require(p["head_width"] > sw, "head_width must exceed shaft_width");
                 require(p["head_length"] < p["length"],
                         "head_length must be shorter than length");
                 require(p["branch_start"] < p["length"] - p["head_length"],
                         "branch must leave the shaft below the head");
                 std::vector<Polygon> out{arrow_polygon(p["length"], sw,
                                                        p["head_length"],
                                                        p["head_width"])};
                 for (auto& b : turn_branch(p["branch_start"], sw, p["turn_radius"],
                                            p["branch_head_length"], p["head_width"],
                                            p["flatten_tolerance"])) {
                   out.push_back(std::move(b));
                 }
                 if (dir < 0) mirror_x(out);
                 return out;
               }});

  t.push_back({{"chevron",
                "V-shaped chevrons pointing in the driving direction",
                {count("count", 3, 1, 10, "number of chevrons"),
                 real("spacing", "m", 3.0, 0.5, 20.0, "forward distance between apexes"),
                 real("arm_length", "m", 1.5, 0.3, 5.0, "outer arm length"),
                 real("stroke_width", "m", 0.3, 0.05, 1.0, "arm width"),
                 real("half_angle", "rad", 0.9, 0.2, 1.4,
                      "angle between each arm and the backward axis")}},
               [](const Params& p) {
                 const double L = p["arm_length"];
                 const double w = p["stroke_width"];
                 const double a = p["half_angle"];
                 const double s = std::sin(a);
                 const double c = std::cos(a);
                 const double notch = w / s;
                 require(notch < 0.8 * L * c, "chevron stroke too wide for its arms");
                 std::vector<Polygon> out;
                 for (int i = 0; i < p.count("count"); ++i) {
                   const double y = i * p["spacing"];
                   out.push_back({{0.0, y},
                                  {-L * s, y - L * c},
                                  {-L * s + w * c, y - L * c - w * s},
                                  {0.0, y - notch},
                                  {L * s - w * c, y - L * c - w * s},
                                  {L * s, y - L * c}});
                 }
                 return out;
               }});

  t.push_back({{"cycle",
                "bicycle pictogram, wheels aligned with the driving direction",
                {real("wheel_radius", "m", 0.35, 0.1, 1.5, "wheel centerline radius"),
                 real("wheel_stroke", "m", 0.06, 0.02, 0.3, "tyre width"),
                 real("wheelbase", "m", 1.1, 0.3, 4.0, "hub to hub"),
                 real("frame_stroke", "m", 0.06, 0.02, 0.3, "frame tube width"),
                 tolerance_param()}},
               [](const Params& p) {
                 const double r = p["wheel_radius"];
                 const double wb = p["wheelbase"];
                 require(p["wheel_stroke"] < r, "wheel_stroke must be below wheel_radius");
                 // Side-view coordinates (s along the bike, t up) mapped to
                 // (lateral = -t, forward = s).
                 const auto pt = [](double s, double t) { return Point2{-t, s}; };
                 std::vector<Polygon> out;
                 for (double hub : {-0.5 * wb, 0.5 * wb}) {
                   for (auto& seg : ring(pt(hub, 0.0), r, p["wheel_stroke"],
                                         p["flatten_tolerance"])) {
                     out.push_back(std::move(seg));
                   }
                 }
                 const Point2 rear = pt(-0.5 * wb, 0.0);
                 const Point2 front = pt(0.5 * wb, 0.0);
                 const Point2 crank = pt(-0.05 * wb, 0.0);
                 const Point2 seat = pt(-0.2 * wb, 1.4 * r);
                 const Point2 head = pt(0.3 * wb, 1.4 * r);
                 const Point2 bars = pt(0.25 * wb, 1.75 * r);
                 const double fs = p["frame_stroke"];
                 for (auto [a, b] : {std::pair{rear, crank}, std::pair{crank, seat},
                                     std::pair{seat, rear}, std::pair{seat, head},
                                     std::pair{crank, head}, std::pair{head, front},
                                     std::pair{head, bars}}) {
                   out.push_back(stroke_segment(a, b, fs, true));
                 }
                 return out;
               }});

  const std::vector<ParamSpec> letter_params{
      real("letter_height", "m", 1.6, 0.3, 5.0, "forward glyph size"),
      real("letter_width", "m", 0.6, 0.2, 2.0, "lateral glyph size"),
      real("letter_stroke", "m", 0.12, 0.03, 0.5, "glyph stroke width"),
      real("letter_gap", "m", 0.2, 0.02, 1.0, "gap between glyphs")};

  t.push_back({{"text_slow", "the word SLOW in block letters", letter_params},
               [](const Params& p) {
                 require(p["letter_stroke"] < 0.5 * p["letter_width"],
                         "letter_stroke too wide for letter_width");
                 std::vector<Polygon> out;
                 append_text(out, "SLOW", 0.0, 0.0, p["letter_width"],
                             p["letter_height"], p["letter_stroke"], p["letter_gap"]);
                 return out;
               }});

  std::vector<ParamSpec> bus_params{
      real("box_width", "m", 3.2, 2.0, 6.0, "lateral box size"),
      real("box_length", "m", 12.0, 5.0, 40.0, "forward box size"),
      real("line_width", "m", 0.2, 0.05, 0.5, "box outline width"),
      real("line_gap", "m", 0.5, 0.1, 3.0, "gap between the two text lines"),
      count("text", 1, 0, 1, "1 = draw BUS STOP lettering")};
  for (auto spec : letter_params) {
    if (spec.name == "letter_width") spec.default_value = 0.55;
    if (spec.name == "letter_stroke") spec.default_value = 0.1;
    if (spec.name == "letter_gap") spec.default_value = 0.15;
    bus_params.push_back(spec);
  }
  t.push_back({{"bus_stop", "box outline with BUS / STOP lettering", bus_params},
               [](const Params& p) {
                 const double W = p["box_width"];
                 const double L = p["box_length"];
                 std::vector<Polygon> out =
                     rect_outline(0.0, 0.0, W, L, p["line_width"]);
                 if (p.count("text") == 1) {
                   const double lw = p["letter_width"];
                   const double lh = p["letter_height"];
                   const double gap = p["letter_gap"];
                   require(p["letter_stroke"] < 0.5 * lw,
                           "letter_stroke too wide for letter_width");
                   require(4.0 * lw + 3.0 * gap <= W - 2.0 * p["line_width"],
                           "BUS STOP lettering wider than the box");
                   require(2.0 * lh + p["line_gap"] <= L - 2.0 * p["line_width"],
                           "BUS STOP lettering longer than the box");
                   const double y0 = -0.5 * (2.0 * lh + p["line_gap"]);
                   append_text(out, "BUS", 0.0, y0, lw, lh, p["letter_stroke"], gap);
                   append_text(out, "STOP", 0.0, y0 + lh + p["line_gap"], lw, lh,
                               p["letter_stroke"], gap);
                 }
                 return out;
               }});

  return t;
}

const std::vector<TemplateEntry>& registry() {
  // Envelope of each template's default geometry, rounded outward to 0.1 m.
  static const std::map<std::string, Bounds, std::less<>> kDefaultBounds = {
      {"rectangle", {-0.2, -1.6, 0.2, 1.6}},
      {"dashed_line", {-0.1, -10.6, 0.1, 10.6}},
      {"parallel_lines", {-0.3, -5.1, 0.3, 5.1}},
      {"parking_bay", {-1.3, -3.0, 1.3, 2.1}},
      {"transverse_dashes", {-1.7, -0.4, 1.7, 0.4}},
      {"triangle", {-0.6, -0.6, 0.6, 0.3}},
      {"zigzag", {-1.8, -8.1, 1.8, 8.1}},
      {"hatched_area", {-1.6, -5.1, 1.6, 5.1}},
      {"box_junction", {-4.1, -4.1, 4.1, 4.1}},
      {"zebra", {-2.8, -1.3, 2.8, 1.3}},
      {"dots", {-3.1, -1.5, 3.1, 1.5}},
      {"arrow_straight", {-0.4, -3.2, 0.4, 2.9}},
      {"arrow_turn", {-1.8, -2.9, 0.6, 1.8}},
      {"arrow_straight_turn", {-1.9, -3.1, 0.7, 3.0}},
      {"chevron", {-1.2, -3.6, 1.2, 3.7}},
      {"cycle", {-0.6, -1.0, 0.6, 1.0}},
      {"text_slow", {-1.7, -0.8, 1.4, 0.9}},
      {"bus_stop", {-1.6, -6.1, 1.7, 6.0}},
  };
  static const std::vector<TemplateEntry> entries = [] {
    auto e = make_templates();
    for (auto& entry : e) entry.info.default_bounds = kDefaultBounds.at(entry.info.name);
    return e;
  }();
  return entries;
}

const TemplateEntry& find_template(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.info.name == name) return e;
  }
  throw Error(ErrorCode::kUnknownClass,
              "unknown marking template '" + std::string(name) + "'");
}

MarkingClass mk(ClassId id, std::string name, std::string tmpl, Rgb color,
                ParamSet params = {}) {
  return {id, std::move(name), std::move(tmpl), std::move(params), color};
}

}  // namespace

const Palette& builtin_palette() {
  static const Palette palette = {
      mk(0, "background", "", {0, 0, 0}),
      mk(1, "zigzag", "zigzag", {255, 0, 255}),
      mk(2, "diagonal_stripes", "hatched_area", {255, 128, 0}),
      mk(3, "bus_stop", "bus_stop", {255, 255, 0}),
      mk(4, "warning_triangle", "triangle", {0, 255, 255}),
      mk(5, "lane_separator", "dashed_line", {255, 255, 255}),
      mk(6, "double_boundary", "parallel_lines", {200, 200, 200}),
      mk(7, "parking_separator", "parking_bay", {128, 128, 255}),
      mk(8, "stop_line", "rectangle", {255, 0, 0}, {{"width", 3.5}, {"length", 0.3}}),
      mk(9, "give_way_dashes", "transverse_dashes", {128, 0, 0}),
      mk(10, "give_way_triangle", "triangle", {0, 128, 128},
         {{"side", 1.25}, {"elongation", 3.46}, {"stroke_width", 0.15}}),
      mk(11, "zebra_stripe", "zebra", {240, 240, 160}),
      mk(12, "crossing_dots", "dots", {160, 240, 240}),
      mk(13, "arrow_straight", "arrow_straight", {0, 255, 0}),
      mk(14, "arrow_left", "arrow_turn", {0, 160, 0}, {{"direction", -1}}),
      mk(15, "arrow_right", "arrow_turn", {0, 96, 0}, {{"direction", 1}}),
      mk(16, "arrow_straight_left", "arrow_straight_turn", {96, 200, 96},
         {{"direction", -1}}),
      mk(17, "box_junction", "box_junction", {200, 200, 0}),
      mk(18, "chevron", "chevron", {0, 0, 255}),
      mk(19, "cycle_symbol", "cycle", {96, 96, 255}),
      mk(20, "text_slow", "text_slow", {255, 160, 200}),
  };
  return palette;
}

void validate_palette(const Palette& palette) {
  std::set<int> ids;
  std::set<std::string> names;
  for (const auto& c : palette) {
    if (c.id == 255) {
      throw Error(ErrorCode::kInvalidConfig, "palette id 255 is reserved");
    }
    if (!ids.insert(c.id).second) {
      throw Error(ErrorCode::kInvalidConfig,
                  "duplicate palette id " + std::to_string(c.id));
    }
    if (c.name.empty() || !names.insert(c.name).second) {
      throw Error(ErrorCode::kInvalidConfig,
                  "palette names must be unique and non-empty ('" + c.name + "')");
    }
    if (c.id == kBackgroundId) continue;
    try {
      resolve_params(c, {});
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig,
                  "palette class '" + c.name + "': " + e.what());
    }
  }
}

double zigzag_runs(std::string_view configuration) {
  if (configuration == "dual") return 2.0;
  if (configuration == "triple") return 3.0;
  throw Error(ErrorCode::kParameterOutOfRange,
              "zigzag configuration must be 'dual' or 'triple', got '" +
                  std::string(configuration) + "'");
}

const MarkingClass* try_find_class(const Palette& palette, ClassId id) {
  for (const auto& c : palette) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const MarkingClass& find_class(const Palette& palette, ClassId id) {
  if (const auto* c = try_find_class(palette, id)) return *c;
  throw Error(ErrorCode::kUnknownClass, "unknown class id " + std::to_string(id));
}

const MarkingClass* try_find_class(const Palette& palette, std::string_view name) {
  for (const auto& c : palette) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const MarkingClass& find_class(const Palette& palette, std::string_view name) {
  if (const auto* c = try_find_class(palette, name)) return *c;
  throw Error(ErrorCode::kUnknownClass, "unknown class '" + std::string(name) + "'");
}

const std::vector<TemplateInfo>& builtin_templates() {
  static const std::vector<TemplateInfo> infos = [] {
    std::vector<TemplateInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const TemplateInfo& template_info(std::string_view name) {
  for (const auto& info : builtin_templates()) {
    if (info.name == name) return info;
  }
  throw Error(ErrorCode::kUnknownClass,
              "unknown marking template '" + std::string(name) + "'");
}

ParamSet resolve_params(const MarkingClass& cls, const ParamSet& overrides) {
  if (cls.template_name.empty()) {
    throw Error(ErrorCode::kUnknownClass,
                "class '" + cls.name + "' has no marking template");
  }
  const TemplateInfo& info = template_info(cls.template_name);
  ParamSet out;
  for (const auto& spec : info.params) out[spec.name] = spec.default_value;
  for (const ParamSet* layer : {&cls.default_params, &overrides}) {
    for (const auto& [name, value] : *layer) {
      if (!out.contains(name)) {
        throw Error(ErrorCode::kParameterOutOfRange,
                    "template '" + info.name + "' has no parameter '" + name + "'");
      }
      out[name] = value;
    }
  }
  for (const auto& spec : info.params) {
    const double v = out[spec.name];
    if (!std::isfinite(v) || v < spec.min_value || v > spec.max_value ||
        (spec.integral && std::floor(v) != v)) {
      std::ostringstream msg;
      msg << "parameter '" << spec.name << "' = " << v << " outside ["
          << spec.min_value << ", " << spec.max_value << "]"
          << (spec.integral ? " (integer)" : "");
      throw Error(ErrorCode::kParameterOutOfRange, msg.str());
    }
  }
  return out;
}

std::vector<Polygon> generate_template(std::string_view template_name,
                                       const ParamSet& resolved_params) {
  const TemplateEntry& entry = find_template(template_name);
  std::vector<Polygon> polys = entry.generate(Params(resolved_params));
  for (auto& poly : polys) {
    if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
  }
  const Point2 c = centroid(polys);
  for (auto& poly : polys) {
    for (auto& v : poly) {
      v.x -= c.x;
      v.y -= c.y;
    }
  }
  return polys;
}

double wrap_angle(double radians) {
  double a = std::remainder(radians, 2.0 * pi);  // [-pi, pi]
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

MarkingInstance instantiate(const MarkingClass& cls, const ParamSet& overrides,
                            const MarkingPose& pose) {
  MarkingInstance inst;
  inst.class_id = cls.id;
  inst.class_name = cls.name;
  inst.params = resolve_params(cls, overrides);
  inst.polygons = generate_template(cls.template_name, inst.params);
  inst.pose = {pose.anchor, wrap_angle(pose.yaw)};
  for (const auto& poly : inst.polygons) {
    bool finite = poly.size() >= 3;
    for (const auto& v : poly) finite = finite && std::isfinite(v.x) && std::isfinite(v.y);
    if (!finite || !(signed_area(poly) > 0.0)) {
      throw Error(ErrorCode::kParameterOutOfRange,
                  "parameters for '" + cls.name + "' produce a degenerate polygon");
    }
  }
  return inst;
}

MarkingInstance instantiate(const Palette& palette, std::string_view class_name,
                            const ParamSet& overrides, const MarkingPose& pose) {
  return instantiate(find_class(palette, class_name), overrides, pose);
}

std::vector<Polygon> transform_to_ground(const MarkingInstance& instance) {
  const double c = std::cos(instance.pose.yaw);
  const double s = std::sin(instance.pose.yaw);
  const double ax = instance.pose.anchor.lateral;
  const double ay = instance.pose.anchor.forward;
  std::vector<Polygon> out = instance.polygons;
  for (auto& poly : out) {
    for (auto& v : poly) {
      const double x = v.x;
      const double y = v.y;
      v = {ax + c * x - s * y, ay + s * x + c * y};
    }
  }
  return out;
}

}  // namespace roadrand::markings
