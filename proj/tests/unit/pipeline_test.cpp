#include "roadrand/pipeline.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "roadrand/error.hpp"
#include "roadrand/image_io.hpp"
#include "roadrand/json_schema.hpp"
#include "support/cli.hpp"
#include "support/scenes.hpp"

namespace roadrand::pipeline {
namespace {

using serialization::Json;
using testing::run_cli;
using testing::slurp;

// Small source set: road scenes with clutter, a calibration and a manifest.
struct MiniSet {
  fs::path dir;
  fs::path manifest;
  fs::path calib;
};

MiniSet make_set(const std::string& name, int n) {
  MiniSet s{testing::scratch_dir(name), {}, {}};
  const auto rig = testing::default_rig();
  s.calib = s.dir / "calib.json";
  fs::create_directories(s.dir / "labels");
  serialization::write_json_file(s.calib, serialization::to_json(rig));
  const auto colors = labelmap::color_table(markings::builtin_palette(),
                                            labelmap::SceneClassConfig::defaults());
  std::string lines;
  for (int i = 0; i < n; ++i) {
    const std::string ref = "labels/l" + std::to_string(i) + ".png";
    image_io::write_label_png(s.dir / ref, testing::cluttered_scene(rig, 50 + i), colors);
    lines += Json{{"label", ref}, {"calibration", "calib.json"}, {"split", "train"}}.dump() + "\n";
  }
  s.manifest = s.dir / "manifest.jsonl";
  serialization::write_text_file(s.manifest, lines);
  return s;
}

GenerateOptions gen_opts(const MiniSet& s, fs::path out, std::size_t count) {
  GenerateOptions g;
  g.sources = s.manifest;
  g.calibration = s.calib;
  g.classes = {"zigzag"};
  g.count = count;
  g.out = std::move(out);
  g.seed = 99;
  return g;
}

TEST(PipelineManifest, LoadsAndResolvesPaths) {
  const auto s = make_set("manifest_load", 3);
  const auto m = load_manifest(s.manifest);
  ASSERT_EQ(m.entries.size(), 3u);
  EXPECT_EQ(m.entries[1].label_ref, "labels/l1.png");
  EXPECT_EQ(m.entries[1].label_path, s.dir / "labels/l1.png");
  EXPECT_EQ(*m.entries[1].calibration_path, s.dir / "calib.json");
  EXPECT_EQ(m.entries[1].split, "train");
}

TEST(PipelineManifest, MalformedLinesReportLocation) {
  const auto dir = testing::scratch_dir("manifest_bad");
  serialization::write_text_file(dir / "m.jsonl", "{\"label\":\"a.png\"}\n{\"rgb\":\"x\"}\n");
  try {
    load_manifest(dir / "m.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("m.jsonl:2"), std::string::npos) << e.what();
  }
  serialization::write_text_file(dir / "d.jsonl", "{\"label\":\"a.png\"}\n{\"label\":\"./a.png\"}\n");
  EXPECT_THROW(load_manifest(dir / "d.jsonl"), Error);
}

TEST(PipelineManifest, GeneratedManifestIsReadable) {
  const auto dir = testing::scratch_dir("manifest_generated");
  serialization::write_text_file(
      dir / "m.jsonl",
      "{\"output_label\":\"a.png\",\"status\":\"ok\"}\n{\"output_label\":\"\",\"status\":\"error\"}\n");
  const auto m = load_manifest(dir / "m.jsonl");
  ASSERT_EQ(m.entries.size(), 1u);
  EXPECT_EQ(m.entries[0].label_ref, "a.png");
}

TEST(PipelineGenerate, ZeroCountWritesEmptyManifest) {
  const auto s = make_set("gen_zero", 2);
  std::ostringstream log;
  EXPECT_EQ(run_generate(gen_opts(s, s.dir / "out", 0), log), kExitOk);
  EXPECT_EQ(slurp(s.dir / "out/manifest.jsonl"), "");
  const Json meta = serialization::read_json_file(s.dir / "out/run_metadata.json");
  EXPECT_TRUE(json_schema::validate(json_schema::schema("run_metadata"), meta).empty());
  EXPECT_EQ(meta["outputs"]["labels"], 0);
}

TEST(PipelineGenerate, RerunAndReplayAreByteIdentical) {
  const auto s = make_set("gen_replay", 3);
  std::ostringstream log;
  ASSERT_EQ(run_generate(gen_opts(s, s.dir / "a", 6), log), kExitOk);
  ASSERT_EQ(run_generate(gen_opts(s, s.dir / "b", 6), log), kExitOk);
  GenerateOptions replay;
  replay.replay = s.dir / "a/run_metadata.json";
  replay.out = s.dir / "c";
  ASSERT_EQ(run_generate(replay, log), kExitOk);
  const std::string manifest = slurp(s.dir / "a/manifest.jsonl");
  EXPECT_FALSE(manifest.empty());
  for (const char* other : {"b", "c"}) {
    EXPECT_EQ(slurp(s.dir / other / "manifest.jsonl"), manifest);
    for (const auto& e : fs::directory_iterator(s.dir / "a/labels")) {
      EXPECT_EQ(slurp(e.path()), slurp(s.dir / other / "labels" / e.path().filename()));
    }
  }
  EXPECT_EQ(slurp(s.dir / "a/run_metadata.json"), slurp(s.dir / "b/run_metadata.json"));
  for (const auto& line : serialization::read_jsonl_file(s.dir / "a/manifest.jsonl")) {
    EXPECT_TRUE(json_schema::validate(json_schema::schema("scene_record"), line.value).empty());
  }
}

TEST(PipelineGenerate, TamperedReplayIsRejected) {
  const auto s = make_set("gen_tamper", 1);
  std::ostringstream log;
  ASSERT_EQ(run_generate(gen_opts(s, s.dir / "a", 1), log), kExitOk);
  Json meta = serialization::read_json_file(s.dir / "a/run_metadata.json");
  meta["config"]["quantity_max"] = 9;
  serialization::write_json_file(s.dir / "tampered.json", meta);
  GenerateOptions replay;
  replay.replay = s.dir / "tampered.json";
  replay.out = s.dir / "c";
  try {
    run_generate(replay, log);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e), kExitInvalidConfig);
  }
}

TEST(PipelineGenerate, InvalidInputs) {
  const auto s = make_set("gen_invalid", 1);
  std::ostringstream log;
  auto g = gen_opts(s, s.dir / "out", 2);
  g.classes = {"background"};
  EXPECT_THROW(run_generate(g, log), Error);
  g.classes = {};
  EXPECT_THROW(run_generate(g, log), Error);
  g = gen_opts(s, s.dir / "out", 2);
  serialization::write_text_file(s.dir / "cfg.json", "{\"quantity_min\": \"one\"}");
  g.config = s.dir / "cfg.json";
  try {
    run_generate(g, log);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e), kExitInvalidConfig);
  }
}

TEST(PipelineGenerate, MissingSourceGivesPartialExit) {
  auto s = make_set("gen_partial", 2);
  fs::remove(s.dir / "labels/l1.png");
  std::ostringstream log;
  EXPECT_EQ(run_generate(gen_opts(s, s.dir / "out", 4), log), kExitPartial);
  const auto errors = serialization::read_jsonl_file(s.dir / "out/errors.jsonl");
  EXPECT_EQ(errors.size(), 2u);
  EXPECT_EQ(errors[0].value["code"], "io");
}

TEST(PipelineStats, CliMatchesLibrary) {
  const auto s = make_set("stats_cli", 4);
  const auto stats_file = s.dir / "stats.json";
  ASSERT_EQ(run_cli("stats --manifest " + s.manifest.string() + " --out " + stats_file.string()),
            0);
  std::vector<labelmap::LabelMap> labels;
  for (const auto& e : load_manifest(s.manifest).entries) {
    labels.push_back(image_io::read_label_png(e.label_path));
  }
  const auto lib = balance::compute_stats(labels, markings::builtin_palette());
  EXPECT_EQ(serialization::read_json_file(stats_file).dump(),
            serialization::to_json(lib).dump());
  for (const char* scheme : {"eq", "fb", "tb"}) {
    const auto w_file = s.dir / (std::string(scheme) + ".json");
    ASSERT_EQ(run_cli("weights --stats " + stats_file.string() + " --scheme " + scheme +
                      " --out " + w_file.string()),
              0);
    const auto scheme_enum = balance::parse_scheme(scheme);
    const auto expected = scheme_enum == balance::Scheme::kEq
                              ? balance::weights_eq(markings::builtin_palette())
                          : scheme_enum == balance::Scheme::kFb ? balance::weights_fb(lib)
                                                                : balance::weights_tb(lib);
    EXPECT_EQ(serialization::read_json_file(w_file).dump(),
              serialization::to_json(expected).dump());
  }
}

TEST(PipelineStats, WorkerCountDoesNotMatter) {
  const auto s = make_set("stats_workers", 5);
  std::vector<ErrorEntry> errors;
  const auto m = load_manifest(s.manifest);
  const auto one = manifest_stats(m, markings::builtin_palette(), 1, errors);
  const auto three = manifest_stats(m, markings::builtin_palette(), 3, errors);
  EXPECT_EQ(serialization::to_json(one).dump(), serialization::to_json(three).dump());
  EXPECT_TRUE(errors.empty());
}

TEST(PipelineEval, IdenticalManifestsScorePerfect) {
  const auto s = make_set("eval_same", 1);
  std::ostringstream log;
  ASSERT_EQ(run_generate(gen_opts(s, s.dir / "gen", 4), log), kExitOk);
  const auto m = (s.dir / "gen/manifest.jsonl").string();
  const auto report = s.dir / "report.json";
  ASSERT_EQ(run_cli("eval --pred-manifest " + m + " --gt-manifest " + m +
                    " --classes zigzag,bus_stop --out " + report.string()),
            0);
  const Json r = serialization::read_json_file(report);
  EXPECT_TRUE(json_schema::validate(json_schema::schema("report"), r).empty());
  EXPECT_EQ(r["classes"][0]["iou"], 1.0);
  EXPECT_EQ(r["classes"][1]["evaluable"], false);
  EXPECT_EQ(r["miou"], 1.0);
  EXPECT_NE(slurp(s.dir / "report.csv").find("zigzag,100.0,100.0,100.0,100.0,4"),
            std::string::npos);
}

TEST(PipelineComposite, AllRoadLabelReproducesSynthesized) {
  const auto dir = testing::scratch_dir("composite_cli");
  labelmap::RgbImage original(16, 8, {10, 20, 30});
  labelmap::RgbImage synth(16, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 16; ++x) {
      synth.set(x, y, {static_cast<std::uint8_t>(x * 9), static_cast<std::uint8_t>(y * 20), 7});
    }
  }
  image_io::write_rgb_png(dir / "orig.png", original);
  image_io::write_rgb_png(dir / "synth.png", synth);
  image_io::write_label_png(dir / "label.png", labelmap::LabelMap(16, 8, 0), {});
  ASSERT_EQ(run_cli("composite --original " + (dir / "orig.png").string() + " --synthesized " +
                    (dir / "synth.png").string() + " --label " + (dir / "label.png").string() +
                    " --out " + (dir / "out.png").string()),
            0);
  EXPECT_EQ(slurp(dir / "out.png"), slurp(dir / "synth.png"));
}

TEST(PipelineCli, ExitCodes) {
  const auto dir = testing::scratch_dir("cli_codes");
  EXPECT_EQ(run_cli("--version"), 0);
  EXPECT_EQ(run_cli("nonsense"), 2);
  EXPECT_EQ(run_cli("weights --stats x.json"), 2);
  serialization::write_text_file(dir / "bad.json", "{\"total_images\": ");
  EXPECT_EQ(run_cli("weights --stats " + (dir / "bad.json").string() + " --scheme tb --out " +
                    (dir / "w.json").string()),
            2);
  EXPECT_EQ(run_cli("describe --class zigzag"), 0);
  EXPECT_EQ(run_cli("describe --class unicorn"), 2);
  EXPECT_EQ(run_cli("synthloss-demo --seed 3"), 0);
}

TEST(PipelineDescribe, ListsTemplates) {
  std::ostringstream out;
  DescribeOptions d;
  d.json = true;
  d.class_name = "zigzag";
  ASSERT_EQ(run_describe(d, out), kExitOk);
  const Json j = Json::parse(out.str());
  EXPECT_NE(j.dump().find("half_period"), std::string::npos);
}

TEST(PipelineSynthlossDemo, IsDeterministic) {
  SynthlossDemoOptions o;
  o.seed = 4;
  std::ostringstream a, b;
  run_synthloss_demo(o, a);
  run_synthloss_demo(o, b);
  EXPECT_EQ(a.str(), b.str());
  const Json j = Json::parse(a.str());
  EXPECT_EQ(j["layer_weights"].size(), 4u);
}

}  // namespace
}  // namespace roadrand::pipeline
