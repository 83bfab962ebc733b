#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roadrand/geometry.hpp"
#include "roadrand/labelmap.hpp"
#include "roadrand/markings.hpp"

namespace roadrand::randomizer {

struct Range {
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const Range&, const Range&) = default;
};

enum class YawMode { kAligned, kUniform };

struct RandomizationConfig {
  // Relative selection weights by class name; empty means every marking class
  // of the palette with weight 1.
  std::map<std::string, double> class_weights;
  int quantity_min = 1;
  int quantity_max = 3;
  Range forward_range{5.0, 40.0};
  Range lateral_range{-6.0, 6.0};
  // kAligned: yaw ~ U(-yaw_jitter, yaw_jitter); kUniform: yaw ~ U(-pi, pi).
  YawMode yaw_mode = YawMode::kAligned;
  double yaw_jitter = 0.1;
  // class name -> template parameter -> sampled range. Integer parameters are
  // drawn uniformly from the integers inside the range.
  std::map<std::string, std::map<std::string, Range>> param_jitter;
  double min_placed_fraction = 0.25;
  int retry_budget = 20;
  std::uint64_t master_seed = 0;

  static RandomizationConfig defaults();
};

// Throws kInvalidConfig on empty/unordered ranges, unknown classes or
// parameters, or jitter ranges outside the template's documented range.
void validate(const RandomizationConfig& cfg, const markings::Palette& palette);

struct PlacementAttempt {
  int instance = 0;
  int attempt = 0;
  ClassId class_id = 0;
  std::string class_name;
  markings::MarkingPose pose;
  markings::ParamSet params;
  std::size_t placed_pixels = 0;
  std::size_t footprint_pixels = 0;
  std::size_t dropped_polygons = 0;
  bool accepted = false;
  // "accepted", "below-min-fraction", "empty-footprint", "not-visible" or
  // "no-ground-intersection".
  std::string reason;
};

struct SceneRecord {
  std::uint64_t index = 0;
  std::string source_label;
  std::string output_label;
  std::string target_class;
  std::uint64_t image_seed = 0;
  int requested_instances = 0;
  int accepted_instances = 0;
  // Instances given up after the retry budget ran out.
  int exhausted_instances = 0;
  std::vector<PlacementAttempt> attempts;
  // "ok" or "error"; error holds the message for failed entries.
  std::string status = "ok";
  std::string error;
};

struct SceneResult {
  labelmap::LabelMap label;
  SceneRecord record;
};

// Erases existing markings, then places randomized marking instances on road
// pixels. Deterministic in (label, rig, cfg, image_seed). Throws
// kUnusableScene if the label has no road pixels.
SceneResult generate_scene(const labelmap::LabelMap& label,
                           const geometry::CameraRig& rig,
                           const RandomizationConfig& cfg,
                           std::uint64_t image_seed,
                           const markings::Palette& palette = markings::builtin_palette(),
                           const labelmap::SceneClassConfig& scene =
                               labelmap::SceneClassConfig::defaults());

struct SourceEntry {
  // As written in the source manifest (used in records).
  std::string label_ref;
  // Resolved path used for reading.
  std::filesystem::path label_path;
  std::optional<geometry::CameraRig> rig;
};

struct ClassRequest {
  std::string class_name;
  std::size_t count = 0;
};

struct DatasetRequest {
  std::vector<SourceEntry> sources;
  geometry::CameraRig rig;
  RandomizationConfig cfg;
  std::vector<ClassRequest> mix;
  markings::Palette palette = markings::builtin_palette();
  labelmap::SceneClassConfig scene = labelmap::SceneClassConfig::defaults();
  std::filesystem::path out_dir;
  bool preview = false;
  unsigned workers = 1;
};

struct DatasetResult {
  // In output-index order, one per requested label.
  std::vector<SceneRecord> records;
  std::size_t failures = 0;
};

// Generates every requested label (output k uses source k mod |sources| and
// stream image_seed(master_seed, k)), writes labels/<class>_<k>.png (and
// preview/<class>_<k>.png) under out_dir plus manifest.jsonl. Per-entry
// failures are recorded and do not stop the run. Output is identical for
// any worker count.
DatasetResult generate_dataset(const DatasetRequest& request);

// Worker count honouring ROADRAND_THREADS as an upper bound.
unsigned capped_workers(unsigned requested);

}  // namespace roadrand::randomizer
