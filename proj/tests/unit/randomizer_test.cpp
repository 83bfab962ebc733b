#include "roadrand/randomizer.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <set>

#include "roadrand/balance.hpp"
#include "roadrand/error.hpp"
#include "roadrand/image_io.hpp"
#include "roadrand/serialization.hpp"
#include "support/scenes.hpp"

namespace roadrand::randomizer {
namespace {

using roadrand::testing::cluttered_scene;
using roadrand::testing::default_rig;
using roadrand::testing::road_scene;

const labelmap::SceneClassConfig kScene = labelmap::SceneClassConfig::defaults();

RandomizationConfig only(const std::string& cls, int quantity, double min_fraction) {
  RandomizationConfig cfg = RandomizationConfig::defaults();
  cfg.class_weights = {{cls, 1.0}};
  cfg.quantity_min = cfg.quantity_max = quantity;
  cfg.min_placed_fraction = min_fraction;
  return cfg;
}

TEST(Scene, ZeroQuantityOnlyErases) {
  const auto rig = default_rig();
  const auto label = cluttered_scene(rig, 1);
  const auto r = generate_scene(label, rig, only("zigzag", 0, 0.25), 77);
  EXPECT_EQ(r.label, labelmap::erase_markings(label, kScene));
  EXPECT_TRUE(r.record.attempts.empty());
  EXPECT_EQ(r.record.requested_instances, 0);
}

TEST(Scene, DeterministicForSameSeed) {
  const auto rig = default_rig();
  const auto label = cluttered_scene(rig, 2);
  const auto cfg = RandomizationConfig::defaults();
  const auto a = generate_scene(label, rig, cfg, 1234);
  const auto b = generate_scene(label, rig, cfg, 1234);
  EXPECT_EQ(a.label, b.label);
  EXPECT_EQ(serialization::to_json(a.record).dump(), serialization::to_json(b.record).dump());
  const auto c = generate_scene(label, rig, cfg, 1235);
  EXPECT_NE(serialization::to_json(a.record).dump(), serialization::to_json(c.record).dump());
}

TEST(Scene, PlacedPixelsAreZigzagOnFormerRoad) {
  const auto rig = default_rig();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto label = cluttered_scene(rig, 100 + s);
    const auto cleared = labelmap::erase_markings(label, kScene);
    const auto r = generate_scene(label, rig, only("zigzag", 1, 0.0), s);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < cleared.size(); ++i) {
      if (r.label[i] == cleared[i]) continue;
      ++changed;
      EXPECT_EQ(r.label[i], 1);
      EXPECT_EQ(cleared[i], kScene.road_id);
    }
    std::size_t reported = 0;
    for (const auto& a : r.record.attempts) {
      if (a.accepted) reported += a.placed_pixels;
    }
    EXPECT_EQ(changed, reported);
  }
}

TEST(Scene, AcceptedInstancesMeetMinFraction) {
  const auto rig = default_rig();
  auto cfg = RandomizationConfig::defaults();
  cfg.quantity_max = 5;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto r = generate_scene(cluttered_scene(rig, s), rig, cfg, s);
    int accepted = 0;
    for (const auto& a : r.record.attempts) {
      if (!a.accepted) continue;
      ++accepted;
      EXPECT_GE(static_cast<double>(a.placed_pixels),
                cfg.min_placed_fraction * static_cast<double>(a.footprint_pixels));
    }
    EXPECT_EQ(accepted, r.record.accepted_instances);
    EXPECT_EQ(r.record.accepted_instances + r.record.exhausted_instances,
              r.record.requested_instances);
  }
}

TEST(Scene, NoRoadIsUnusable) {
  const auto rig = default_rig();
  const labelmap::LabelMap sky(rig.intrinsics.image_width, rig.intrinsics.image_height,
                               roadrand::testing::kSky);
  try {
    generate_scene(sky, rig, RandomizationConfig::defaults(), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnusableScene);
  }
}

TEST(Scene, RetryBudgetExhaustionIsRecorded) {
  const auto rig = default_rig();
  auto cfg = only("zigzag", 2, 1.0);
  cfg.retry_budget = 3;
  // A single road pixel: no zigzag can be fully placed.
  labelmap::LabelMap m(rig.intrinsics.image_width, rig.intrinsics.image_height, 22);
  m.at(320, 200) = 0;
  const auto r = generate_scene(m, rig, cfg, 9);
  EXPECT_EQ(r.record.accepted_instances, 0);
  EXPECT_EQ(r.record.exhausted_instances, 2);
  EXPECT_EQ(r.record.attempts.size(), 6u);
}

TEST(Scene, FartherPlacementsAreSmaller) {
  const auto rig = default_rig();
  const auto road = road_scene(rig);
  auto near = only("warning_triangle", 1, 0.0);
  near.forward_range = {5.0, 10.0};
  auto far = near;
  far.forward_range = {20.0, 40.0};
  double near_sum = 0.0, far_sum = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    near_sum += generate_scene(road, rig, near, s).record.attempts.back().footprint_pixels;
    far_sum += generate_scene(road, rig, far, s).record.attempts.back().footprint_pixels;
  }
  EXPECT_GT(near_sum, 2.0 * far_sum);
}

TEST(Config, ValidationRejectsBadRanges) {
  const auto& pal = markings::builtin_palette();
  EXPECT_NO_THROW(validate(RandomizationConfig::defaults(), pal));
  auto c = RandomizationConfig::defaults();
  c.quantity_min = 4;
  c.quantity_max = 2;
  EXPECT_THROW(validate(c, pal), Error);
  c = RandomizationConfig::defaults();
  c.min_placed_fraction = 1.5;
  EXPECT_THROW(validate(c, pal), Error);
  c = RandomizationConfig::defaults();
  c.param_jitter["zigzag"]["periods"] = {4, 40};
  EXPECT_THROW(validate(c, pal), Error);
  c = RandomizationConfig::defaults();
  c.class_weights = {{"nope", 1.0}};
  EXPECT_THROW(validate(c, pal), Error);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

DatasetRequest small_request(const std::filesystem::path& dir, std::size_t sources) {
  const auto rig = default_rig();
  DatasetRequest req;
  req.rig = rig;
  req.cfg = RandomizationConfig::defaults();
  req.cfg.master_seed = 31;
  const auto colors = labelmap::color_table(req.palette, req.scene);
  std::filesystem::create_directories(dir / "src");
  for (std::size_t i = 0; i < sources; ++i) {
    const std::string name = "src/s" + std::to_string(i) + ".png";
    image_io::write_label_png(dir / name, road_scene(rig), colors);
    req.sources.push_back({name, dir / name, std::nullopt});
  }
  return req;
}

TEST(Dataset, CountsSourcesAndRecount) {
  const auto dir = roadrand::testing::scratch_dir("dataset_counts");
  DatasetRequest req = small_request(dir, 10);
  req.mix = {{"zigzag", 6}, {"bus_stop", 4}};
  req.out_dir = dir / "out";
  const auto result = generate_dataset(req);
  ASSERT_EQ(result.records.size(), 10u);
  EXPECT_EQ(result.failures, 0u);
  std::set<std::string> backgrounds;
  std::vector<labelmap::LabelMap> outputs;
  for (const auto& rec : result.records) {
    backgrounds.insert(rec.source_label);
    outputs.push_back(image_io::read_label_png(req.out_dir / rec.output_label));
  }
  EXPECT_EQ(backgrounds.size(), 10u);
  const auto stats = balance::compute_stats(outputs, req.palette);
  EXPECT_EQ(stats.classes[1].image_count, 6u);
  EXPECT_EQ(stats.classes[3].image_count, 4u);
  EXPECT_DOUBLE_EQ(stats.occurrence(1), 0.6);
  EXPECT_DOUBLE_EQ(stats.occurrence(3), 0.4);
}

TEST(Dataset, EmptyRequestWritesEmptyManifest) {
  const auto dir = roadrand::testing::scratch_dir("dataset_empty");
  DatasetRequest req = small_request(dir, 1);
  req.out_dir = dir / "out";
  const auto result = generate_dataset(req);
  EXPECT_TRUE(result.records.empty());
  EXPECT_EQ(slurp(req.out_dir / "manifest.jsonl"), "");
}

TEST(Dataset, WorkerCountDoesNotChangeOutput) {
  const auto dir = roadrand::testing::scratch_dir("dataset_workers");
  DatasetRequest req = small_request(dir, 3);
  req.mix = {{"zigzag", 7}, {"warning_triangle", 5}};
  req.out_dir = dir / "one";
  req.workers = 1;
  generate_dataset(req);
  req.out_dir = dir / "four";
  req.workers = 4;
  generate_dataset(req);
  EXPECT_EQ(slurp(dir / "one/manifest.jsonl"), slurp(dir / "four/manifest.jsonl"));
  for (const auto& e : std::filesystem::directory_iterator(dir / "one/labels")) {
    EXPECT_EQ(slurp(e.path()), slurp(dir / "four/labels" / e.path().filename()));
  }
}

TEST(Dataset, UnreadableSourceIsAPerEntryFailure) {
  const auto dir = roadrand::testing::scratch_dir("dataset_failure");
  DatasetRequest req = small_request(dir, 2);
  req.sources.push_back({"src/missing.png", dir / "src/missing.png", std::nullopt});
  req.mix = {{"zigzag", 6}};
  req.out_dir = dir / "out";
  const auto result = generate_dataset(req);
  EXPECT_EQ(result.failures, 2u);
  EXPECT_EQ(result.records[2].status, "error");
  EXPECT_EQ(result.records[2].output_label, "");
  EXPECT_EQ(result.records[3].status, "ok");
}

}  // namespace
}  // namespace roadrand::randomizer
