#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadrand/balance.hpp"
#include "roadrand/geometry.hpp"
#include "roadrand/labelmap.hpp"
#include "roadrand/markings.hpp"
#include "roadrand/metrics.hpp"
#include "roadrand/randomizer.hpp"

namespace roadrand::serialization {

// Insertion-ordered so emitted files keep a fixed, readable field order.
using Json = nlohmann::ordered_json;

// Parses JSON text; errors carry "<origin>:<line>:<column>".
Json parse_json(std::string_view text, const std::string& origin);
Json read_json_file(const std::filesystem::path& path);

struct JsonLine {
  std::size_t line = 0;  // 1-based
  Json value;
};

// Blank lines are skipped; each other line must hold one JSON value.
std::vector<JsonLine> read_jsonl_file(const std::filesystem::path& path);

// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// 64-bit FNV-1a over bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);
// Hash of the compact serialization of `j`.
std::string content_hash(const Json& j);

Json to_json(const geometry::CameraRig& rig);
geometry::CameraRig rig_from_json(const Json& j);

Json to_json(const markings::Palette& palette);
markings::Palette palette_from_json(const Json& j);

Json to_json(const labelmap::SceneClassConfig& cfg);
labelmap::SceneClassConfig scene_from_json(const Json& j);

Json to_json(const randomizer::RandomizationConfig& cfg);
randomizer::RandomizationConfig randomization_from_json(const Json& j);

Json to_json(const randomizer::PlacementAttempt& a);
Json to_json(const randomizer::SceneRecord& rec);
randomizer::SceneRecord scene_record_from_json(const Json& j);

Json to_json(const balance::ClassStats& stats);
balance::ClassStats stats_from_json(const Json& j);

Json to_json(const balance::WeightVector& w);
balance::WeightVector weights_from_json(const Json& j);

Json to_json(const metrics::MetricsReport& r);

Json to_json(const markings::TemplateInfo& info);

}  // namespace roadrand::serialization
