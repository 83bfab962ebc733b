#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roadrand/balance.hpp"
#include "roadrand/error.hpp"
#include "roadrand/geometry.hpp"
#include "roadrand/labelmap.hpp"
#include "roadrand/markings.hpp"
#include "roadrand/metrics.hpp"
#include "roadrand/randomizer.hpp"
#include "roadrand/serialization.hpp"

namespace roadrand::pipeline {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitInvalidConfig = 2;

// Exit status for an error that aborted a whole command.
int exit_code_for(const Error& e);

struct ManifestEntry {
  std::size_t line = 0;
  std::string label_ref;
  fs::path label_path;
  std::optional<fs::path> rgb_path;
  std::optional<fs::path> calibration_path;
  std::string split;
  std::vector<std::string> tags;
};

// JSONL manifest. Relative paths resolve against the manifest's directory.
// Generated scene-record manifests are accepted too (output_label is used
// and failed records are skipped).
struct DatasetManifest {
  fs::path file;
  std::vector<ManifestEntry> entries;
};

DatasetManifest load_manifest(const fs::path& file);

// Optional files fall back to the built-in defaults. Every file is checked
// against its schema first.
markings::Palette load_palette(const std::optional<fs::path>& file);
// Without a file: the default scene classes with the palette's marking ids.
labelmap::SceneClassConfig load_scene(const std::optional<fs::path>& file,
                                      const markings::Palette& palette);
geometry::CameraRig load_calibration(const fs::path& file);
randomizer::RandomizationConfig load_randomization(const std::optional<fs::path>& file);

struct ErrorEntry {
  std::string where;
  std::string code;
  std::string message;
};

void write_error_log(const fs::path& file, const std::vector<ErrorEntry>& errors);

struct GenerateOptions {
  fs::path sources;
  fs::path calibration;
  std::optional<fs::path> config;
  std::optional<fs::path> palette;
  std::optional<fs::path> scene;
  std::vector<std::string> classes;
  std::size_t count = 0;
  fs::path out;
  std::optional<std::uint64_t> seed;
  bool preview = false;
  unsigned workers = 1;
  // Previous run_metadata.json; replaces every other input option.
  std::optional<fs::path> replay;
};

struct StatsOptions {
  fs::path manifest;
  fs::path out;
  std::optional<fs::path> palette;
  unsigned workers = 1;
};

struct WeightsOptions {
  fs::path stats;
  std::string scheme = "tb";
  fs::path out;
  std::optional<fs::path> palette;  // eq only needs the class list
  bool include_background = false;
};

struct EvalOptions {
  fs::path pred_manifest;
  fs::path gt_manifest;
  std::vector<std::string> classes;
  fs::path out;
  std::optional<fs::path> csv;  // default: out with .csv extension
  std::optional<fs::path> palette;
  std::optional<fs::path> scene;
  std::string averaging = "per-image";
};

struct CompositeOptions {
  fs::path original;
  fs::path synthesized;
  fs::path label;
  fs::path out;
  std::optional<fs::path> scene;
  std::optional<fs::path> palette;
  int feather = 0;
};

struct DescribeOptions {
  std::optional<fs::path> palette;
  std::optional<std::string> template_name;
  std::optional<std::string> class_name;
  bool json = false;
};

struct PreviewOptions {
  std::optional<fs::path> label;
  std::optional<fs::path> manifest;
  fs::path out;  // file for --label, directory for --manifest
  std::optional<fs::path> palette;
  std::optional<fs::path> scene;
};

struct SynthlossDemoOptions {
  std::uint64_t seed = 0;
  int scales = 3;
  int layers = 5;
  int l_d = 4;
  int l_p = 5;
  double lambda_fm = 10.0;
  double lambda_vgg = 10.0;
  std::optional<fs::path> out;
};

// Each command validates its inputs, writes its outputs and returns an exit
// status. Human-readable progress goes to `log`; whole-command failures throw
// Error.
int run_generate(const GenerateOptions& opts, std::ostream& log);
int run_stats(const StatsOptions& opts, std::ostream& log);
int run_weights(const WeightsOptions& opts, std::ostream& log);
int run_eval(const EvalOptions& opts, std::ostream& log);
int run_composite(const CompositeOptions& opts, std::ostream& log);
int run_describe(const DescribeOptions& opts, std::ostream& out);
int run_preview(const PreviewOptions& opts, std::ostream& log);
int run_synthloss_demo(const SynthlossDemoOptions& opts, std::ostream& out);

// Label statistics over a manifest; unreadable labels are reported in
// `errors` and skipped.
balance::ClassStats manifest_stats(const DatasetManifest& manifest,
                                   const markings::Palette& palette, unsigned workers,
                                   std::vector<ErrorEntry>& errors);

std::string_view version();

}  // namespace roadrand::pipeline
