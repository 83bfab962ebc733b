#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "roadrand/error.hpp"
#include "roadrand/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using namespace roadrand;

// CLI11 cannot bind std::optional<fs::path> directly.
struct OptPath {
  std::string value;
  std::optional<fs::path> get() const {
    return value.empty() ? std::nullopt : std::optional<fs::path>(value);
  }
};

void add_palette_scene(CLI::App* cmd, OptPath& palette, OptPath* scene) {
  cmd->add_option("--palette", palette.value, "palette JSON (default: built-in)");
  if (scene) cmd->add_option("--scene", scene->value, "scene-class JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized road-marking labels, class weights and metrics"};
  app.set_version_flag("--version", std::string(pipeline::version()));
  app.require_subcommand(1);

  pipeline::GenerateOptions gen;
  OptPath gen_config, gen_palette, gen_scene, gen_replay;
  std::string gen_sources, gen_calib, gen_out;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "generate randomized marking labels");
  generate->add_option("--sources", gen_sources, "source label manifest (JSONL)");
  generate->add_option("--calib", gen_calib, "camera calibration JSON");
  generate->add_option("--config", gen_config.value, "randomization config JSON");
  generate->add_option("--class", gen.classes, "target marking class(es)")->delimiter(',');
  generate->add_option("--count", gen.count, "labels per target class");
  generate->add_option("--out", gen_out, "output directory")->required();
  auto* seed_opt = generate->add_option("--seed", gen_seed, "master seed");
  generate->add_flag("--preview", gen.preview, "also write colour previews");
  generate->add_option("--workers", gen.workers, "worker threads (0 = all cores)");
  generate->add_option("--replay", gen_replay.value, "run_metadata.json of an earlier run");
  add_palette_scene(generate, gen_palette, &gen_scene);

  pipeline::StatsOptions stats;
  OptPath stats_palette;
  std::string stats_manifest, stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "per-class pixel and occurrence statistics");
  stats_cmd->add_option("--manifest", stats_manifest, "label manifest (JSONL)")->required();
  stats_cmd->add_option("--out", stats_out, "stats JSON")->required();
  stats_cmd->add_option("--workers", stats.workers, "counting shards");
  add_palette_scene(stats_cmd, stats_palette, nullptr);

  pipeline::WeightsOptions weights;
  OptPath weights_palette;
  std::string weights_stats, weights_out;
  auto* weights_cmd = app.add_subcommand("weights", "class loss weights from stats");
  weights_cmd->add_option("--stats", weights_stats, "stats JSON")->required();
  weights_cmd->add_option("--scheme", weights.scheme, "eq, fb or tb")
      ->check(CLI::IsMember({"eq", "fb", "tb"}));
  weights_cmd->add_option("--out", weights_out, "weights JSON")->required();
  weights_cmd->add_flag("--include-background", weights.include_background,
                        "let the background class enter the median");
  add_palette_scene(weights_cmd, weights_palette, nullptr);

  pipeline::EvalOptions eval;
  OptPath eval_palette, eval_scene, eval_csv;
  std::string eval_pred, eval_gt, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "PRE/REC/F1/IoU over prediction/label pairs");
  eval_cmd->add_option("--pred-manifest", eval_pred, "predicted labels (JSONL)")->required();
  eval_cmd->add_option("--gt-manifest", eval_gt, "ground-truth labels (JSONL)")->required();
  eval_cmd->add_option("--classes", eval.classes, "classes to evaluate")->delimiter(',');
  eval_cmd->add_option("--out", eval_out, "report JSON")->required();
  eval_cmd->add_option("--csv", eval_csv.value, "table CSV (default: <out>.csv)");
  eval_cmd->add_option("--averaging", eval.averaging, "per-image or pooled")
      ->check(CLI::IsMember({"per-image", "pooled"}));
  add_palette_scene(eval_cmd, eval_palette, &eval_scene);

  pipeline::CompositeOptions comp;
  OptPath comp_palette, comp_scene;
  std::string comp_original, comp_synth, comp_label, comp_out;
  auto* comp_cmd = app.add_subcommand("composite", "replace the road surface of an image");
  comp_cmd->add_option("--original", comp_original, "original RGB PNG")->required();
  comp_cmd->add_option("--synthesized", comp_synth, "synthesized RGB PNG")->required();
  comp_cmd->add_option("--label", comp_label, "label PNG of the synthesized scene")->required();
  comp_cmd->add_option("--out", comp_out, "output RGB PNG")->required();
  comp_cmd->add_option("--feather", comp.feather, "blend radius in pixels");
  add_palette_scene(comp_cmd, comp_palette, &comp_scene);

  pipeline::DescribeOptions desc;
  OptPath desc_palette;
  std::string desc_template, desc_class;
  auto* desc_cmd = app.add_subcommand("describe", "list classes and template parameters");
  desc_cmd->add_option("--template", desc_template, "one template");
  desc_cmd->add_option("--class", desc_class, "resolved parameters of one class");
  desc_cmd->add_flag("--json", desc.json, "JSON output");
  add_palette_scene(desc_cmd, desc_palette, nullptr);

  pipeline::PreviewOptions prev;
  OptPath prev_palette, prev_scene, prev_label, prev_manifest;
  std::string prev_out;
  auto* prev_cmd = app.add_subcommand("preview", "colour renderings of label PNGs");
  prev_cmd->add_option("--label", prev_label.value, "one label PNG");
  prev_cmd->add_option("--manifest", prev_manifest.value, "label manifest (JSONL)");
  prev_cmd->add_option("--out", prev_out, "output PNG, or directory with --manifest")
      ->required();
  add_palette_scene(prev_cmd, prev_palette, &prev_scene);

  pipeline::SynthlossDemoOptions demo;
  OptPath demo_out;
  auto* demo_cmd = app.add_subcommand("synthloss-demo", "synthesis losses on random pyramids");
  demo_cmd->add_option("--seed", demo.seed);
  demo_cmd->add_option("--scales", demo.scales);
  demo_cmd->add_option("--layers", demo.layers);
  demo_cmd->add_option("--l-d", demo.l_d);
  demo_cmd->add_option("--l-p", demo.l_p);
  demo_cmd->add_option("--lambda-fm", demo.lambda_fm);
  demo_cmd->add_option("--lambda-vgg", demo.lambda_vgg);
  demo_cmd->add_option("--out", demo_out.value, "JSON output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : pipeline::kExitInvalidConfig;
  }

  try {
    if (*generate) {
      if (gen_replay.value.empty() && (gen_sources.empty() || gen_calib.empty())) {
        std::cerr << "generate: --sources and --calib are required without --replay\n";
        return pipeline::kExitInvalidConfig;
      }
      gen.sources = gen_sources;
      gen.calibration = gen_calib;
      gen.config = gen_config.get();
      gen.palette = gen_palette.get();
      gen.scene = gen_scene.get();
      gen.out = gen_out;
      if (seed_opt->count() > 0) gen.seed = gen_seed;
      gen.replay = gen_replay.get();
      return pipeline::run_generate(gen, std::cerr);
    }
    if (*stats_cmd) {
      stats.manifest = stats_manifest;
      stats.out = stats_out;
      stats.palette = stats_palette.get();
      return pipeline::run_stats(stats, std::cerr);
    }
    if (*weights_cmd) {
      weights.stats = weights_stats;
      weights.out = weights_out;
      weights.palette = weights_palette.get();
      return pipeline::run_weights(weights, std::cerr);
    }
    if (*eval_cmd) {
      eval.pred_manifest = eval_pred;
      eval.gt_manifest = eval_gt;
      eval.out = eval_out;
      eval.csv = eval_csv.get();
      eval.palette = eval_palette.get();
      eval.scene = eval_scene.get();
      return pipeline::run_eval(eval, std::cerr);
    }
    if (*comp_cmd) {
      comp.original = comp_original;
      comp.synthesized = comp_synth;
      comp.label = comp_label;
      comp.out = comp_out;
      comp.palette = comp_palette.get();
      comp.scene = comp_scene.get();
      return pipeline::run_composite(comp, std::cerr);
    }
    if (*desc_cmd) {
      desc.palette = desc_palette.get();
      if (!desc_template.empty()) desc.template_name = desc_template;
      if (!desc_class.empty()) desc.class_name = desc_class;
      return pipeline::run_describe(desc, std::cout);
    }
    if (*prev_cmd) {
      prev.label = prev_label.get();
      prev.manifest = prev_manifest.get();
      prev.out = prev_out;
      prev.palette = prev_palette.get();
      prev.scene = prev_scene.get();
      return pipeline::run_preview(prev, std::cerr);
    }
    if (*demo_cmd) {
      demo.out = demo_out.get();
      return pipeline::run_synthloss_demo(demo, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return pipeline::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pipeline::kExitPartial;
  }
  return pipeline::kExitOk;
}
