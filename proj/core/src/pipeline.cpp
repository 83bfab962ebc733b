#include "roadrand/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "roadrand/error.hpp"
#include "roadrand/image_io.hpp"
#include "roadrand/json_schema.hpp"
#include "roadrand/rng.hpp"
#include "roadrand/synthloss.hpp"

#ifndef ROADRAND_VERSION
#define ROADRAND_VERSION "0.0.0"
#endif

namespace roadrand::pipeline {

using serialization::Json;

std::string_view version() { return ROADRAND_VERSION; }

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kParse:
    case ErrorCode::kUnknownClass:
    case ErrorCode::kParameterOutOfRange:
    case ErrorCode::kInvalidPose:
      return kExitInvalidConfig;
    default:
      return kExitPartial;
  }
}

namespace {

Json read_checked(const fs::path& file, std::string_view schema_name) {
  Json j = serialization::read_json_file(file);
  json_schema::require_valid(schema_name, j, file.string());
  return j;
}

// Emitted documents are checked against their own schema before writing.
void emit(const fs::path& file, std::string_view schema_name, const Json& j) {
  json_schema::require_valid(schema_name, j, "emitted " + file.string(),
                             ErrorCode::kInvalidTarget);
  serialization::write_json_file(file, j);
}

fs::path resolve(const fs::path& base_dir, const std::string& ref) {
  const fs::path p(ref);
  return p.is_absolute() ? p : base_dir / p;
}

ErrorEntry entry_error(std::string where, const Error& e) {
  return {std::move(where), std::string(to_string(e.code())), e.what()};
}

std::string sources_hash(const DatasetManifest& manifest) {
  std::string refs;
  for (const auto& e : manifest.entries) refs += e.label_ref + '\n';
  return serialization::fnv1a_hex(refs);
}

fs::path sibling_error_log(const fs::path& out) {
  fs::path log = out;
  log.replace_extension(".errors.jsonl");
  return log;
}

}  // namespace

DatasetManifest load_manifest(const fs::path& file) {
  DatasetManifest m;
  m.file = file;
  const fs::path dir = file.parent_path();
  std::set<fs::path> seen;
  for (const auto& row : serialization::read_jsonl_file(file)) {
    const std::string where = file.string() + ":" + std::to_string(row.line);
    json_schema::require_valid("dataset_entry", row.value, where, ErrorCode::kParse);
    const Json& j = row.value;
    if (j.contains("status") && j["status"] != "ok") continue;
    ManifestEntry e;
    e.line = row.line;
    e.label_ref = j.contains("label") ? j["label"].get<std::string>()
                                      : j["output_label"].get<std::string>();
    if (e.label_ref.empty()) throw Error(ErrorCode::kParse, where + ": empty label path");
    e.label_path = resolve(dir, e.label_ref);
    if (j.contains("rgb") && j["rgb"].is_string()) {
      e.rgb_path = resolve(dir, j["rgb"].get<std::string>());
    }
    if (j.contains("calibration") && j["calibration"].is_string()) {
      e.calibration_path = resolve(dir, j["calibration"].get<std::string>());
    }
    if (j.contains("split")) e.split = j["split"].get<std::string>();
    if (j.contains("tags")) e.tags = j["tags"].get<std::vector<std::string>>();
    if (!seen.insert(e.label_path.lexically_normal()).second) {
      throw Error(ErrorCode::kInvalidConfig, where + ": duplicate label path " + e.label_ref);
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

markings::Palette load_palette(const std::optional<fs::path>& file) {
  if (!file) return markings::builtin_palette();
  return serialization::palette_from_json(read_checked(*file, "palette"));
}

labelmap::SceneClassConfig load_scene(const std::optional<fs::path>& file,
                                      const markings::Palette& palette) {
  if (file) return serialization::scene_from_json(read_checked(*file, "scene_config"));
  labelmap::SceneClassConfig cfg = labelmap::SceneClassConfig::defaults();
  cfg.marking_ids.clear();
  for (const auto& c : palette) {
    if (c.id != cfg.road_id) cfg.marking_ids.insert(c.id);
  }
  std::erase_if(cfg.scene_classes,
                [&](const auto& kv) { return cfg.marking_ids.contains(kv.first); });
  labelmap::validate(cfg);
  return cfg;
}

geometry::CameraRig load_calibration(const fs::path& file) {
  return serialization::rig_from_json(read_checked(file, "calibration"));
}

randomizer::RandomizationConfig load_randomization(const std::optional<fs::path>& file) {
  if (!file) return randomizer::RandomizationConfig::defaults();
  return serialization::randomization_from_json(read_checked(*file, "randomization_config"));
}

void write_error_log(const fs::path& file, const std::vector<ErrorEntry>& errors) {
  std::string text;
  for (const auto& e : errors) {
    text += Json{{"where", e.where}, {"code", e.code}, {"message", e.message}}.dump();
    text += '\n';
  }
  serialization::write_text_file(file, text);
}

int run_generate(const GenerateOptions& opts, std::ostream& log) {
  randomizer::DatasetRequest req;
  fs::path sources = opts.sources;
  std::vector<randomizer::ClassRequest> mix;
  bool preview = opts.preview;
  std::optional<std::string> replay_sources_hash;

  if (opts.replay) {
    const Json meta = read_checked(*opts.replay, "run_metadata");
    const auto check = [&](const char* hash_key, const char* body_key) {
      if (serialization::content_hash(meta[body_key]) != meta[hash_key].get<std::string>()) {
        throw Error(ErrorCode::kInvalidConfig, opts.replay->string() + ": " + body_key +
                                                   " does not match " + hash_key);
      }
    };
    check("config_hash", "config");
    check("palette_hash", "palette");
    check("calibration_hash", "calibration");
    check("scene_hash", "scene_config");
    json_schema::require_valid("randomization_config", meta["config"], "replayed config");
    json_schema::require_valid("palette", meta["palette"], "replayed palette");
    json_schema::require_valid("calibration", meta["calibration"], "replayed calibration");
    json_schema::require_valid("scene_config", meta["scene_config"], "replayed scene config");
    req.cfg = serialization::randomization_from_json(meta["config"]);
    req.cfg.master_seed = meta["seed"].get<std::uint64_t>();
    req.palette = serialization::palette_from_json(meta["palette"]);
    req.rig = serialization::rig_from_json(meta["calibration"]);
    req.scene = serialization::scene_from_json(meta["scene_config"]);
    sources = meta["inputs"]["sources"].get<std::string>();
    preview = meta["inputs"]["preview"].get<bool>();
    for (const Json& c : meta["inputs"]["classes"]) {
      mix.push_back({c["class"].get<std::string>(), c["count"].get<std::size_t>()});
    }
    replay_sources_hash = meta["inputs"]["sources_hash"].get<std::string>();
  } else {
    req.palette = load_palette(opts.palette);
    req.scene = load_scene(opts.scene, req.palette);
    req.rig = load_calibration(opts.calibration);
    req.cfg = load_randomization(opts.config);
    if (opts.seed) req.cfg.master_seed = *opts.seed;
    if (opts.count > 0 && opts.classes.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "--class is required when --count > 0");
    }
    for (const auto& c : opts.classes) mix.push_back({c, opts.count});
  }
  randomizer::validate(req.cfg, req.palette);
  labelmap::validate(req.scene);
  for (const auto& c : mix) {
    const auto& cls = markings::find_class(req.palette, c.class_name);
    if (cls.id == markings::kBackgroundId || cls.template_name.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "'" + c.class_name + "' is not a marking class");
    }
  }

  const DatasetManifest manifest = load_manifest(sources);
  const std::string manifest_hash = sources_hash(manifest);
  if (replay_sources_hash && *replay_sources_hash != manifest_hash) {
    log << "warning: " << sources.string() << " lists different labels than the recorded run\n";
  }
  std::map<fs::path, geometry::CameraRig> rigs;
  for (const auto& e : manifest.entries) {
    randomizer::SourceEntry src{e.label_ref, e.label_path, std::nullopt};
    if (e.calibration_path) {
      auto it = rigs.find(*e.calibration_path);
      if (it == rigs.end()) {
        it = rigs.emplace(*e.calibration_path, load_calibration(*e.calibration_path)).first;
      }
      src.rig = it->second;
    }
    req.sources.push_back(std::move(src));
  }
  req.mix = mix;
  req.out_dir = opts.out;
  req.preview = preview;
  req.workers = opts.workers;

  const randomizer::DatasetResult result = randomizer::generate_dataset(req);

  std::vector<ErrorEntry> errors;
  for (const auto& rec : result.records) {
    if (rec.status == "ok") continue;
    const auto colon = rec.error.find(':');
    errors.push_back({"index " + std::to_string(rec.index) + " (" + rec.source_label + ")",
                      rec.error.substr(0, colon),
                      colon == std::string::npos ? rec.error : rec.error.substr(colon + 2)});
  }
  write_error_log(opts.out / "errors.jsonl", errors);

  Json classes = Json::array();
  for (const auto& c : mix) classes.push_back(Json{{"class", c.class_name}, {"count", c.count}});
  Json config = serialization::to_json(req.cfg);
  Json palette = serialization::to_json(req.palette);
  Json calibration = serialization::to_json(req.rig);
  Json scene = serialization::to_json(req.scene);
  Json meta{{"tool", "roadrand"},
            {"version", std::string(version())},
            {"command", "generate"},
            {"seed", req.cfg.master_seed},
            {"workers", randomizer::capped_workers(opts.workers)},
            {"config_hash", serialization::content_hash(config)},
            {"palette_hash", serialization::content_hash(palette)},
            {"calibration_hash", serialization::content_hash(calibration)},
            {"scene_hash", serialization::content_hash(scene)},
            {"config", config},
            {"calibration", calibration},
            {"palette", palette},
            {"scene_config", scene},
            {"inputs", {{"sources", fs::absolute(sources).lexically_normal().string()},
                        {"sources_hash", manifest_hash},
                        {"classes", classes},
                        {"preview", preview}}},
            {"outputs", {{"manifest", "manifest.jsonl"},
                         {"labels", result.records.size() - result.failures},
                         {"failures", result.failures}}}};
  emit(opts.out / "run_metadata.json", "run_metadata", meta);

  log << "generated " << result.records.size() - result.failures << " labels ("
      << result.failures << " failed) in " << opts.out.string() << "\n";
  return result.failures > 0 ? kExitPartial : kExitOk;
}

balance::ClassStats manifest_stats(const DatasetManifest& manifest,
                                   const markings::Palette& palette, unsigned workers,
                                   std::vector<ErrorEntry>& errors) {
  const std::size_t n = manifest.entries.size();
  const std::size_t shards =
      std::max<std::size_t>(1, std::min<std::size_t>(randomizer::capped_workers(workers), n));
  std::vector<balance::ClassStats> partial(shards, balance::empty_stats(palette));
  std::vector<std::vector<ErrorEntry>> shard_errors(shards);
  const auto run_shard = [&](std::size_t s) {
    for (std::size_t i = s * n / shards; i < (s + 1) * n / shards; ++i) {
      const ManifestEntry& e = manifest.entries[i];
      try {
        balance::accumulate(partial[s], image_io::read_label_png(e.label_path));
      } catch (const Error& err) {
        shard_errors[s].push_back(
            entry_error(manifest.file.string() + ":" + std::to_string(e.line), err));
      }
    }
  };
  if (shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t s = 0; s < shards; ++s) pool.emplace_back(run_shard, s);
  }
  balance::ClassStats total = balance::empty_stats(palette);
  for (std::size_t s = 0; s < shards; ++s) {
    total.merge(partial[s]);
    errors.insert(errors.end(), shard_errors[s].begin(), shard_errors[s].end());
  }
  return total;
}

int run_stats(const StatsOptions& opts, std::ostream& log) {
  const markings::Palette palette = load_palette(opts.palette);
  const DatasetManifest manifest = load_manifest(opts.manifest);
  if (manifest.entries.empty()) {
    throw Error(ErrorCode::kEmptyInput, opts.manifest.string() + " lists no labels");
  }
  std::vector<ErrorEntry> errors;
  const balance::ClassStats stats = manifest_stats(manifest, palette, opts.workers, errors);
  if (stats.total_images == 0) {
    write_error_log(sibling_error_log(opts.out), errors);
    throw Error(ErrorCode::kEmptyInput, "no label in " + opts.manifest.string() + " was readable");
  }
  emit(opts.out, "stats", serialization::to_json(stats));
  write_error_log(sibling_error_log(opts.out), errors);
  log << "counted " << stats.total_images << " labels";
  if (!errors.empty()) log << ", " << errors.size() << " unreadable";
  log << "\n";
  return errors.empty() ? kExitOk : kExitPartial;
}

int run_weights(const WeightsOptions& opts, std::ostream& log) {
  const balance::ClassStats stats =
      serialization::stats_from_json(read_checked(opts.stats, "stats"));
  balance::Scheme scheme;
  try {
    scheme = balance::parse_scheme(opts.scheme);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  const balance::BalanceOptions bopts{opts.include_background};
  balance::WeightVector w;
  switch (scheme) {
    case balance::Scheme::kEq: {
      markings::Palette classes;
      for (const auto& c : stats.classes) classes.push_back({c.id, c.name, "", {}, {}});
      w = balance::weights_eq(opts.palette ? load_palette(opts.palette) : classes);
      break;
    }
    case balance::Scheme::kFb:
      w = balance::weights_fb(stats, bopts);
      break;
    case balance::Scheme::kTb:
      w = balance::weights_tb(stats, bopts);
      break;
  }
  emit(opts.out, "weights", serialization::to_json(w));
  std::size_t absent = 0;
  for (const auto& c : w.classes) {
    absent += std::count(c.flags.begin(), c.flags.end(), "absent");
  }
  log << "wrote " << balance::to_string(scheme) << " weights for " << w.classes.size()
      << " classes";
  if (absent > 0) log << " (" << absent << " absent from the stats, weight 0)";
  log << "\n";
  return kExitOk;
}

int run_eval(const EvalOptions& opts, std::ostream& log) {
  const markings::Palette palette = load_palette(opts.palette);
  const labelmap::SceneClassConfig scene = load_scene(opts.scene, palette);
  metrics::Averaging averaging;
  try {
    averaging = metrics::parse_averaging(opts.averaging);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  std::vector<metrics::EvalClass> classes;
  if (opts.classes.empty()) {
    for (const auto& c : palette) {
      if (c.id != markings::kBackgroundId) classes.push_back({c.id, c.name});
    }
  } else {
    classes = metrics::resolve_classes(opts.classes, palette);
  }
  const DatasetManifest pred = load_manifest(opts.pred_manifest);
  const DatasetManifest gt = load_manifest(opts.gt_manifest);
  if (pred.entries.size() != gt.entries.size()) {
    throw Error(ErrorCode::kInvalidConfig,
                "prediction manifest has " + std::to_string(pred.entries.size()) +
                    " entries, ground truth " + std::to_string(gt.entries.size()));
  }
  if (gt.entries.empty()) throw Error(ErrorCode::kEmptyInput, "manifests list no labels");

  metrics::SetEvaluator evaluator(classes, scene.ignore_id, averaging);
  std::vector<ErrorEntry> errors;
  std::size_t evaluated = 0;
  for (std::size_t i = 0; i < gt.entries.size(); ++i) {
    try {
      evaluator.add(image_io::read_label_png(pred.entries[i].label_path),
                    image_io::read_label_png(gt.entries[i].label_path));
      ++evaluated;
    } catch (const Error& e) {
      errors.push_back(entry_error(
          opts.gt_manifest.string() + ":" + std::to_string(gt.entries[i].line), e));
    }
  }
  write_error_log(sibling_error_log(opts.out), errors);
  if (evaluated == 0) throw Error(ErrorCode::kEmptyInput, "no image pair could be evaluated");

  const metrics::MetricsReport report = evaluator.report();
  emit(opts.out, "report", serialization::to_json(report));
  fs::path csv = opts.csv.value_or(fs::path(opts.out).replace_extension(".csv"));
  serialization::write_text_file(csv, metrics::to_csv(report));
  log << "evaluated " << evaluated << " pairs, mIoU " << std::fixed << std::setprecision(4)
      << report.miou << " over " << report.mean.class_count << " classes\n";
  for (const auto& c : report.classes) {
    if (!c.evaluable) log << "  " << c.name << ": not evaluable (no defined image)\n";
  }
  return errors.empty() ? kExitOk : kExitPartial;
}

int run_composite(const CompositeOptions& opts, std::ostream& log) {
  const markings::Palette palette = load_palette(opts.palette);
  const labelmap::SceneClassConfig scene = load_scene(opts.scene, palette);
  if (opts.feather < 0) throw Error(ErrorCode::kInvalidConfig, "--feather must be >= 0");
  const labelmap::RgbImage out = labelmap::composite_road_surface(
      image_io::read_rgb_png(opts.original), image_io::read_rgb_png(opts.synthesized),
      image_io::read_label_png(opts.label), scene, opts.feather);
  image_io::write_rgb_png(opts.out, out);
  log << "wrote " << opts.out.string() << "\n";
  return kExitOk;
}

namespace {

void describe_template_text(const markings::TemplateInfo& t, std::ostream& out) {
  out << t.name << ": " << t.description << "\n";
  for (const auto& p : t.params) {
    out << "  " << std::left << std::setw(20) << p.name << std::right << std::setw(10)
        << p.default_value << " " << std::left << std::setw(6) << p.unit << std::right
        << " [" << p.min_value << ", " << p.max_value << "]"
        << (p.integral ? " integer" : "") << "  " << p.doc << "\n";
  }
}

}  // namespace

int run_describe(const DescribeOptions& opts, std::ostream& out) {
  const markings::Palette palette = load_palette(opts.palette);
  if (opts.class_name) {
    const auto& cls = markings::find_class(palette, *opts.class_name);
    if (cls.template_name.empty()) {
      out << cls.name << " (id " << int(cls.id) << ") has no template\n";
      return kExitOk;
    }
    const auto params = markings::resolve_params(cls, {});
    if (opts.json) {
      Json j{{"id", cls.id},
             {"name", cls.name},
             {"template", cls.template_name}};
      Json p = Json::object();
      for (const auto& [k, v] : params) p[k] = v;
      j["params"] = p;
      out << j.dump(2) << "\n";
    } else {
      out << cls.name << " (id " << int(cls.id) << ", template " << cls.template_name << ")\n";
      for (const auto& [k, v] : params) out << "  " << k << " = " << v << "\n";
    }
    return kExitOk;
  }
  std::vector<markings::TemplateInfo> templates;
  if (opts.template_name) {
    templates.push_back(markings::template_info(*opts.template_name));
  } else {
    templates = markings::builtin_templates();
  }
  if (opts.json) {
    Json t = Json::array();
    for (const auto& info : templates) t.push_back(serialization::to_json(info));
    Json j{{"templates", t}};
    if (!opts.template_name) j["palette"] = serialization::to_json(palette);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  if (!opts.template_name) {
    out << "classes:\n";
    for (const auto& c : palette) {
      out << "  " << std::setw(3) << int(c.id) << "  " << std::left << std::setw(22)
          << c.name << std::right << (c.template_name.empty() ? "-" : c.template_name)
          << "\n";
    }
    out << "\ntemplates:\n";
  }
  for (const auto& info : templates) describe_template_text(info, out);
  return kExitOk;
}

int run_preview(const PreviewOptions& opts, std::ostream& log) {
  const markings::Palette palette = load_palette(opts.palette);
  const labelmap::SceneClassConfig scene = load_scene(opts.scene, palette);
  if (opts.label.has_value() == opts.manifest.has_value()) {
    throw Error(ErrorCode::kInvalidConfig, "preview needs exactly one of --label or --manifest");
  }
  if (opts.label) {
    image_io::write_rgb_png(
        opts.out, labelmap::render_preview(image_io::read_label_png(*opts.label), palette, scene));
    log << "wrote " << opts.out.string() << "\n";
    return kExitOk;
  }
  const DatasetManifest manifest = load_manifest(*opts.manifest);
  fs::create_directories(opts.out);
  std::vector<ErrorEntry> errors;
  std::set<std::string> names;
  for (const auto& e : manifest.entries) {
    std::string name = e.label_path.stem().string();
    for (int k = 1; !names.insert(name).second; ++k) {
      name = e.label_path.stem().string() + "_" + std::to_string(k);
    }
    try {
      image_io::write_rgb_png(
          opts.out / (name + ".png"),
          labelmap::render_preview(image_io::read_label_png(e.label_path), palette, scene));
    } catch (const Error& err) {
      errors.push_back(entry_error(manifest.file.string() + ":" + std::to_string(e.line), err));
    }
  }
  write_error_log(opts.out / "errors.jsonl", errors);
  log << "rendered " << manifest.entries.size() - errors.size() << " previews into "
      << opts.out.string() << "\n";
  return errors.empty() ? kExitOk : kExitPartial;
}

int run_synthloss_demo(const SynthlossDemoOptions& opts, std::ostream& out) {
  synthloss::LossWeights lw{opts.lambda_fm, opts.lambda_vgg, opts.l_d, opts.l_p};
  try {
    synthloss::validate(lw);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  if (opts.scales < 1 || opts.layers < std::max(opts.l_d, opts.l_p)) {
    throw Error(ErrorCode::kInvalidConfig,
                "need at least one scale and layers >= max(l_d, l_p)");
  }
  CounterRng rng(opts.seed);
  const auto random_tensor = [&](std::vector<std::size_t> shape) {
    synthloss::Tensor t = synthloss::Tensor::zeros(std::move(shape));
    for (double& v : t.values) v = rng.uniform(-1.0, 1.0);
    return t;
  };
  synthloss::FeaturePyramid real, fake;
  synthloss::ScoreMap real_scores, fake_scores;
  for (int k = 0; k < opts.scales; ++k) {
    synthloss::FeatureLayers r, f;
    std::size_t side = std::size_t{32} >> k;
    if (side < 2) side = 2;
    for (int i = 0; i < opts.layers; ++i) {
      const std::vector<std::size_t> shape{std::size_t(8) << std::min(i, 3), side, side};
      r.push_back(random_tensor(shape));
      synthloss::Tensor noisy = r.back();
      for (double& v : noisy.values) v += rng.uniform(-0.1, 0.1);
      f.push_back(std::move(noisy));
      side = std::max<std::size_t>(2, side / 2);
    }
    real.scales.push_back(std::move(r));
    fake.scales.push_back(std::move(f));
    synthloss::Tensor rs = synthloss::Tensor::zeros({side, side});
    synthloss::Tensor fs_ = synthloss::Tensor::zeros({side, side});
    for (double& v : rs.values) v = rng.uniform(0.55, 0.95);
    for (double& v : fs_.values) v = rng.uniform(0.05, 0.45);
    real_scores.scales.push_back(std::move(rs));
    fake_scores.scales.push_back(std::move(fs_));
  }
  const double fm = synthloss::feature_matching_loss(real, fake, opts.l_d);
  const double vgg = synthloss::perceptual_loss(real.scales[0], fake.scales[0], opts.l_p);
  const synthloss::GanTerms gan = synthloss::gan_loss(real_scores, fake_scores);
  const double total = synthloss::total_objective(gan.generator, fm, vgg, lw);

  Json weights = Json::array();
  for (int i = 1; i <= opts.l_d; ++i) weights.push_back(synthloss::layer_weight(i, opts.l_d));
  Json j{{"seed", opts.seed},
         {"scales", opts.scales},
         {"layers", opts.layers},
         {"l_d", opts.l_d},
         {"l_p", opts.l_p},
         {"lambda_fm", opts.lambda_fm},
         {"lambda_vgg", opts.lambda_vgg},
         {"layer_weights", weights},
         {"feature_matching", fm},
         {"perceptual", vgg},
         {"gan", {{"discriminator", gan.discriminator},
                  {"generator", gan.generator},
                  {"discriminator_total", gan.discriminator_total},
                  {"generator_total", gan.generator_total}}},
         {"total", total}};
  if (opts.out) {
    serialization::write_json_file(*opts.out, j);
  } else {
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace roadrand::pipeline
