#include "roadrand/randomizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <thread>

#include "roadrand/error.hpp"
#include "roadrand/image_io.hpp"
#include "roadrand/rng.hpp"
#include "roadrand/serialization.hpp"

namespace roadrand::randomizer {
namespace {

void check_range(const Range& r, const std::string& what) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max) {
    throw Error(ErrorCode::kInvalidConfig, what + " range must be finite and ordered");
  }
}

struct WeightedClass {
  const markings::MarkingClass* cls;
  double cumulative;
};

std::vector<WeightedClass> class_table(const RandomizationConfig& cfg,
                                       const markings::Palette& palette) {
  std::vector<WeightedClass> table;
  double total = 0.0;
  for (const auto& c : palette) {
    if (c.id == markings::kBackgroundId || c.template_name.empty()) continue;
    double w = 1.0;
    if (!cfg.class_weights.empty()) {
      auto it = cfg.class_weights.find(c.name);
      w = it == cfg.class_weights.end() ? 0.0 : it->second;
    }
    if (w <= 0.0) continue;
    total += w;
    table.push_back({&c, total});
  }
  if (table.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no marking class has positive weight");
  }
  return table;
}

const markings::MarkingClass& pick_class(const std::vector<WeightedClass>& table,
                                         CounterRng& rng) {
  const double u = rng.uniform() * table.back().cumulative;
  for (const auto& e : table) {
    if (u < e.cumulative) return *e.cls;
  }
  return *table.back().cls;
}

markings::ParamSet sample_params(const markings::MarkingClass& cls,
                                 const RandomizationConfig& cfg, CounterRng& rng) {
  markings::ParamSet out;
  auto it = cfg.param_jitter.find(cls.name);
  if (it == cfg.param_jitter.end()) return out;
  const auto& info = markings::template_info(cls.template_name);
  for (const auto& [name, range] : it->second) {
    const auto spec = std::find_if(info.params.begin(), info.params.end(),
                                   [&](const auto& p) { return p.name == name; });
    if (spec != info.params.end() && spec->integral) {
      out[name] = static_cast<double>(rng.between(
          static_cast<std::int64_t>(std::ceil(range.min)),
          static_cast<std::int64_t>(std::floor(range.max))));
    } else {
      out[name] = rng.uniform(range.min, range.max);
    }
  }
  return out;
}

}  // namespace

RandomizationConfig RandomizationConfig::defaults() {
  RandomizationConfig cfg;
  cfg.param_jitter["zigzag"] = {{"periods", {4, 8}}, {"runs", {2, 3}}};
  return cfg;
}

void validate(const RandomizationConfig& cfg, const markings::Palette& palette) {
  if (cfg.quantity_min < 0 || cfg.quantity_max < cfg.quantity_min) {
    throw Error(ErrorCode::kInvalidConfig,
                "quantity range must satisfy 0 <= min <= max");
  }
  check_range(cfg.forward_range, "forward");
  check_range(cfg.lateral_range, "lateral");
  if (!(cfg.forward_range.min > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "forward range must start above 0 m");
  }
  if (!(cfg.min_placed_fraction >= 0.0 && cfg.min_placed_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "min_placed_fraction must lie in [0, 1]");
  }
  if (cfg.retry_budget < 1) {
    throw Error(ErrorCode::kInvalidConfig, "retry_budget must be >= 1");
  }
  if (!(cfg.yaw_jitter >= 0.0) || !std::isfinite(cfg.yaw_jitter)) {
    throw Error(ErrorCode::kInvalidConfig, "yaw_jitter must be finite and >= 0");
  }
  for (const auto& [name, w] : cfg.class_weights) {
    markings::find_class(palette, name);
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidConfig, "class weight for '" + name + "' must be >= 0");
    }
  }
  for (const auto& [cls_name, params] : cfg.param_jitter) {
    const auto& cls = markings::find_class(palette, cls_name);
    const auto& info = markings::template_info(cls.template_name);
    for (const auto& [pname, range] : params) {
      check_range(range, cls_name + "." + pname);
      const auto spec = std::find_if(info.params.begin(), info.params.end(),
                                     [&](const auto& p) { return p.name == pname; });
      if (spec == info.params.end()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "template '" + info.name + "' has no parameter '" + pname + "'");
      }
      if (range.min < spec->min_value || range.max > spec->max_value) {
        throw Error(ErrorCode::kInvalidConfig,
                    "jitter range for " + cls_name + "." + pname +
                        " exceeds the documented parameter range");
      }
      if (spec->integral && std::ceil(range.min) > std::floor(range.max)) {
        throw Error(ErrorCode::kInvalidConfig,
                    "jitter range for " + cls_name + "." + pname + " contains no integer");
      }
    }
  }
  class_table(cfg, palette);
}

SceneResult generate_scene(const labelmap::LabelMap& label,
                           const geometry::CameraRig& rig,
                           const RandomizationConfig& cfg,
                           std::uint64_t image_seed,
                           const markings::Palette& palette,
                           const labelmap::SceneClassConfig& scene) {
  SceneResult result;
  result.record.image_seed = image_seed;
  result.label = labelmap::erase_markings(label, scene);

  std::vector<std::uint32_t> road;
  for (std::size_t i = 0; i < result.label.size(); ++i) {
    if (result.label[i] == scene.road_id) road.push_back(static_cast<std::uint32_t>(i));
  }
  if (road.empty()) {
    throw Error(ErrorCode::kUnusableScene, "label contains no road pixels");
  }

  const auto table = class_table(cfg, palette);
  const geometry::Homography h = geometry::ground_homography(rig);
  CounterRng rng(image_seed);

  const int quantity =
      static_cast<int>(rng.between(cfg.quantity_min, cfg.quantity_max));
  result.record.requested_instances = quantity;

  for (int instance = 0; instance < quantity; ++instance) {
    bool placed = false;
    for (int attempt = 0; attempt < cfg.retry_budget && !placed; ++attempt) {
      PlacementAttempt rec;
      rec.instance = instance;
      rec.attempt = attempt;
      const auto& cls = pick_class(table, rng);
      rec.class_id = cls.id;
      rec.class_name = cls.name;

      const std::uint32_t pix = road[rng.below(road.size())];
      const double u = pix % result.label.width() + rng.uniform();
      const double v = pix / result.label.width() + rng.uniform();
      const double yaw = cfg.yaw_mode == YawMode::kAligned
                             ? rng.uniform(-cfg.yaw_jitter, cfg.yaw_jitter)
                             : rng.uniform(-std::numbers::pi, std::numbers::pi);
      const markings::ParamSet overrides = sample_params(cls, cfg, rng);

      geometry::GroundPoint anchor;
      try {
        anchor = geometry::image_to_ground({u, v}, h);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoGroundIntersection) throw;
        rec.reason = "no-ground-intersection";
        result.record.attempts.push_back(std::move(rec));
        continue;
      }
      anchor.lateral =
          std::clamp(anchor.lateral, cfg.lateral_range.min, cfg.lateral_range.max);
      anchor.forward =
          std::clamp(anchor.forward, cfg.forward_range.min, cfg.forward_range.max);

      const auto inst = markings::instantiate(cls, overrides, {anchor, yaw});
      rec.pose = inst.pose;
      rec.params = inst.params;

      labelmap::RasterizeResult raster;
      try {
        raster = labelmap::rasterize_instance(result.label, inst, rig, scene);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNotVisible) throw;
        rec.reason = "not-visible";
        result.record.attempts.push_back(std::move(rec));
        continue;
      }
      rec.placed_pixels = raster.placed.size();
      rec.footprint_pixels = raster.footprint_pixels;
      rec.dropped_polygons = raster.dropped_polygons;
      if (raster.footprint_pixels == 0 || raster.placed.empty()) {
        rec.reason = "empty-footprint";
      } else if (static_cast<double>(raster.placed.size()) <
                 cfg.min_placed_fraction * static_cast<double>(raster.footprint_pixels)) {
        rec.reason = "below-min-fraction";
      } else {
        rec.accepted = true;
        rec.reason = "accepted";
        result.label = std::move(raster.label);
        placed = true;
        ++result.record.accepted_instances;
      }
      result.record.attempts.push_back(std::move(rec));
    }
    if (!placed) ++result.record.exhausted_instances;
  }
  return result;
}

unsigned capped_workers(unsigned requested) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (const char* env = std::getenv("ROADRAND_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

DatasetResult generate_dataset(const DatasetRequest& req) {
  validate(req.cfg, req.palette);
  for (const auto& c : req.mix) markings::find_class(req.palette, c.class_name);

  struct Job {
    std::uint64_t index;
    const ClassRequest* request;
  };
  std::vector<Job> jobs;
  for (const auto& c : req.mix) {
    for (std::size_t i = 0; i < c.count; ++i) jobs.push_back({jobs.size(), &c});
  }
  if (!jobs.empty() && req.sources.empty()) {
    throw Error(ErrorCode::kEmptyInput, "source manifest is empty");
  }

  std::filesystem::create_directories(req.out_dir / "labels");
  if (req.preview) std::filesystem::create_directories(req.out_dir / "preview");
  const auto colors = labelmap::color_table(req.palette, req.scene);

  DatasetResult result;
  result.records.resize(jobs.size());

  const auto run_job = [&](const Job& job) {
    SceneRecord& rec = result.records[job.index];
    const SourceEntry& src = req.sources[job.index % req.sources.size()];
    char stem[64];
    std::snprintf(stem, sizeof(stem), "_%06llu.png",
                  static_cast<unsigned long long>(job.index));
    const std::string file = job.request->class_name + stem;
    const std::uint64_t seed = image_seed(req.cfg.master_seed, job.index);

    RandomizationConfig cfg = req.cfg;
    cfg.class_weights = {{job.request->class_name, 1.0}};
    try {
      const labelmap::LabelMap label = image_io::read_label_png(src.label_path);
      SceneResult scene = generate_scene(label, src.rig.value_or(req.rig), cfg, seed,
                                         req.palette, req.scene);
      rec = std::move(scene.record);
      image_io::write_label_png(req.out_dir / "labels" / file, scene.label, colors);
      if (req.preview) {
        image_io::write_rgb_png(req.out_dir / "preview" / file,
                                labelmap::render_preview(scene.label, req.palette, req.scene));
      }
    } catch (const Error& e) {
      rec = SceneRecord{};
      rec.image_seed = seed;
      rec.status = "error";
      rec.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    rec.index = job.index;
    rec.source_label = src.label_ref;
    rec.output_label = rec.status == "ok" ? "labels/" + file : "";
    rec.target_class = job.request->class_name;
  };

  const unsigned workers =
      std::min<unsigned>(capped_workers(req.workers),
                         static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  if (workers <= 1) {
    for (const auto& job : jobs) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i]);
      });
    }
  }

  std::ofstream manifest(req.out_dir / "manifest.jsonl", std::ios::binary);
  if (!manifest) {
    throw Error(ErrorCode::kIo, "cannot write " + (req.out_dir / "manifest.jsonl").string());
  }
  for (const auto& rec : result.records) {
    if (rec.status != "ok") ++result.failures;
    manifest << serialization::to_json(rec).dump() << '\n';
  }
  return result;
}

}  // namespace roadrand::randomizer
