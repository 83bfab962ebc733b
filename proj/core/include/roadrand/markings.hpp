#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "roadrand/geometry.hpp"
#include "roadrand/polygon.hpp"

namespace roadrand {

// Raster class identifier. Label files are 8-bit, so ids fit in a byte.
using ClassId = std::uint8_t;

using Rgb = std::array<std::uint8_t, 3>;

}  // namespace roadrand

namespace roadrand::markings {

inline constexpr ClassId kBackgroundId = 0;
inline constexpr std::size_t kDefaultMarkingClassCount = 20;

using ParamSet = std::map<std::string, double>;

struct MarkingClass {
  ClassId id = 0;
  std::string name;
  // Template the class is drawn with; empty for background.
  std::string template_name;
  ParamSet default_params;
  Rgb color{0, 0, 0};
};

using Palette = std::vector<MarkingClass>;

// Background plus the 20 built-in marking classes, ids 0..20.
const Palette& builtin_palette();

// Validates ids (unique, <= 254), names (unique, non-empty) and template
// names. Throws kInvalidConfig.
void validate_palette(const Palette& palette);

const MarkingClass& find_class(const Palette& palette, std::string_view name);
const MarkingClass& find_class(const Palette& palette, ClassId id);
const MarkingClass* try_find_class(const Palette& palette, ClassId id);
const MarkingClass* try_find_class(const Palette& palette, std::string_view name);

struct ParamSpec {
  std::string name;
  std::string unit;
  double default_value = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  bool integral = false;
  std::string doc;
};

struct TemplateInfo {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  // Documented envelope of the default-parameter geometry in the local frame
  // (after recentering on the area centroid).
  Bounds default_bounds{};
};

const std::vector<TemplateInfo>& builtin_templates();
const TemplateInfo& template_info(std::string_view template_name);

// Merges template defaults, class defaults and overrides (in that order) and
// validates every value against its documented range.
ParamSet resolve_params(const MarkingClass& cls, const ParamSet& overrides);

// Polygons in the template's local frame, recentered so the area centroid of
// the set sits at the origin. Every polygon is counter-clockwise.
std::vector<Polygon> generate_template(std::string_view template_name,
                                       const ParamSet& resolved_params);

struct MarkingPose {
  geometry::GroundPoint anchor;
  double yaw = 0.0;
};

struct MarkingInstance {
  ClassId class_id = 0;
  std::string class_name;
  ParamSet params;
  std::vector<Polygon> polygons;
  MarkingPose pose;
};

// Zigzag run count for a named configuration: "dual" -> 2, "triple" -> 3.
double zigzag_runs(std::string_view configuration);

// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);

MarkingInstance instantiate(const MarkingClass& cls, const ParamSet& overrides,
                            const MarkingPose& pose);
MarkingInstance instantiate(const Palette& palette, std::string_view class_name,
                            const ParamSet& overrides, const MarkingPose& pose);

// Rotates each local vertex by the instance yaw (local +forward turns toward
// -lateral for positive yaw) and translates by the anchor.
std::vector<Polygon> transform_to_ground(const MarkingInstance& instance);

}  // namespace roadrand::markings
