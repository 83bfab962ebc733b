#include "roadrand/balance.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "roadrand/error.hpp"
#include "support/oracles.hpp"

namespace roadrand::balance {
namespace {

const markings::Palette& pal() { return markings::builtin_palette(); }

labelmap::LabelMap from(std::vector<ClassId> v) { return {2, 2, std::move(v)}; }

// Labels of `size` pixels where `cls` covers `frac` of each label it appears in.
std::vector<labelmap::LabelMap> occurrence_set(int images, int with_cls, ClassId cls,
                                               int cls_pixels) {
  std::vector<labelmap::LabelMap> out;
  for (int i = 0; i < images; ++i) {
    labelmap::LabelMap m(10, 10, 0);
    m[0] = 5;  // lane separator everywhere
    if (i < with_cls) {
      for (int p = 0; p < cls_pixels; ++p) m[1 + p] = cls;
    }
    out.push_back(m);
  }
  return out;
}

TEST(Stats, TwoSmallLabels) {
  const std::vector<labelmap::LabelMap> labels = {from({0, 0, 1, 1}), from({0, 0, 0, 0})};
  const auto s = compute_stats(labels, pal());
  EXPECT_EQ(s.total_images, 2u);
  EXPECT_EQ(s.classes[1].image_count, 1u);
  EXPECT_EQ(s.classes[1].pixel_count, 2u);
  EXPECT_EQ(s.classes[1].pixels_in_present_labels, 4u);
  EXPECT_DOUBLE_EQ(s.occurrence(1), 0.5);
  EXPECT_DOUBLE_EQ(s.frequency(1), 0.5);
  EXPECT_DOUBLE_EQ(s.frequency(0), 6.0 / 8.0);
  EXPECT_FALSE(s.present(2));
  EXPECT_THROW(s.frequency(2), Error);
}

TEST(Stats, SevenPercentOccurrence) {
  const auto s = compute_stats(occurrence_set(100, 7, 1, 3), pal());
  EXPECT_DOUBLE_EQ(s.occurrence(1), 0.07);
  EXPECT_DOUBLE_EQ(s.occurrence(5), 1.0);
}

TEST(Stats, EmptyInputThrows) {
  try {
    compute_stats({}, pal());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

TEST(Stats, MergeMatchesSinglePass) {
  CounterRng r(4);
  std::vector<labelmap::LabelMap> labels;
  for (int i = 0; i < 12; ++i) labels.push_back(testing::random_label(6, 5, 8, r));
  const auto whole = compute_stats(labels, pal());
  auto a = empty_stats(pal());
  auto b = empty_stats(pal());
  auto c = empty_stats(pal());
  for (int i = 0; i < 12; ++i) accumulate(i < 3 ? a : i < 7 ? b : c, labels[i]);
  auto left = a;
  left.merge(b);
  left.merge(c);
  auto bc = b;
  bc.merge(c);
  auto right = a;
  right.merge(bc);
  for (const auto* m : {&left, &right}) {
    EXPECT_EQ(m->total_images, whole.total_images);
    for (std::size_t i = 0; i < whole.classes.size(); ++i) {
      EXPECT_EQ(m->classes[i].pixel_count, whole.classes[i].pixel_count);
      EXPECT_EQ(m->classes[i].pixels_in_present_labels,
                whole.classes[i].pixels_in_present_labels);
      EXPECT_EQ(m->classes[i].image_count, whole.classes[i].image_count);
    }
  }
}

TEST(Median, OddAndEven) {
  EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_THROW(median({}), Error);
}

TEST(Formula, FrequencyBalancingExample) {
  const std::vector<double> f = {0.5, 0.1, 0.05};
  const auto w = median_frequency_weights(f);
  EXPECT_NEAR(w[0], 0.2, 1e-15);
  EXPECT_NEAR(w[1], 1.0, 1e-15);
  EXPECT_NEAR(w[2], 2.0, 1e-15);
}

TEST(Formula, TotalBalancingExample) {
  const std::vector<double> f = {0.5, 0.1, 0.05};
  const std::vector<double> n = {0.7, 0.3, 0.07};
  const auto w = median_total_weights(f, n);
  EXPECT_NEAR(w[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 1.0, 1e-15);
  EXPECT_NEAR(w[2], 10.0 / 3.0, 1e-14);
}

TEST(Formula, ZeroOccurrenceReducesToFrequency) {
  const std::vector<double> f = {0.3, 0.02, 0.11, 0.7};
  const std::vector<double> n(4, 0.0);
  EXPECT_EQ(median_total_weights(f, n), median_frequency_weights(f));
}

TEST(Formula, EqualInputsGiveOnes) {
  const std::vector<double> f(5, 0.2);
  for (double w : median_frequency_weights(f)) EXPECT_EQ(w, 1.0);
  for (double w : median_total_weights(f, f)) EXPECT_EQ(w, 1.0);
}

TEST(Formula, ScaleInvariance) {
  const std::vector<double> f = {0.31, 0.07, 0.002, 0.4, 0.15};
  const auto base = median_frequency_weights(f);
  for (double k : {0.25, 3.0, 1e-3}) {
    std::vector<double> g;
    for (double v : f) g.push_back(k * v);
    const auto w = median_frequency_weights(g);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(w[i], base[i], 1e-12 * base[i]);
  }
}

TEST(Formula, DegenerateInputsThrow) {
  const std::vector<double> f = {0.1, 0.0};
  EXPECT_THROW(median_frequency_weights(f), Error);
  const std::vector<double> n = {0.1};
  EXPECT_THROW(median_total_weights(f, n), Error);
}

TEST(Weights, EqIsAllOnes) {
  const auto w = weights_eq(pal());
  ASSERT_EQ(w.classes.size(), 21u);
  for (const auto& c : w.classes) EXPECT_EQ(c.weight, 1.0);
  EXPECT_EQ(w.dense(21).size(), 21u);
}

TEST(Weights, AbsentAndBackgroundFlags) {
  const std::vector<labelmap::LabelMap> labels = {from({0, 0, 1, 5}), from({0, 5, 5, 0})};
  const auto s = compute_stats(labels, pal());
  for (const auto& w : {weights_fb(s), weights_tb(s)}) {
    EXPECT_EQ(w.classes[0].flags, std::vector<std::string>{"not_in_median"});
    EXPECT_GT(w.classes[0].weight, 0.0);
    EXPECT_EQ(w.classes[2].flags, std::vector<std::string>{"absent"});
    EXPECT_EQ(w.classes[2].weight, 0.0);
    EXPECT_TRUE(w.classes[1].flags.empty());
  }
  // f_1 = 1/4, f_5 = 3/8; median over {1, 5} = 5/16.
  const auto fb = weights_fb(s);
  EXPECT_NEAR(fb.classes[1].weight, (5.0 / 16.0) / 0.25, 1e-15);
  EXPECT_NEAR(fb.classes[5].weight, (5.0 / 16.0) / 0.375, 1e-15);
  EXPECT_NEAR(fb.classes[0].weight, (5.0 / 16.0) / 0.5, 1e-15);
  const auto with_bg = weights_fb(s, {.include_background = true});
  EXPECT_TRUE(with_bg.classes[0].flags.empty());
  EXPECT_NEAR(with_bg.classes[1].weight, 0.375 / 0.25, 1e-15);
}

TEST(Weights, MatchBruteForce) {
  CounterRng r(11);
  std::vector<int> ids;
  for (int i = 0; i < 21; ++i) ids.push_back(i);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<labelmap::LabelMap> labels;
    const int n = 1 + static_cast<int>(r.below(8));
    for (int i = 0; i < n; ++i) labels.push_back(testing::random_label(7, 4, 9, r));
    const auto s = compute_stats(labels, pal());
    const auto fb = weights_fb(s);
    const auto tb = weights_tb(s);
    const auto ofb = testing::brute_force_weights(labels, ids, false);
    const auto otb = testing::brute_force_weights(labels, ids, true);
    for (int id : ids) {
      EXPECT_NEAR(fb.classes[id].weight, ofb.at(id), 1e-12);
      EXPECT_NEAR(tb.classes[id].weight, otb.at(id), 1e-12);
    }
  }
}

TEST(Weights, OccurrenceSeparatesTbFromFb) {
  // Same per-label zigzag frequency, occurrence 7% vs 70%.
  const auto rare = compute_stats(occurrence_set(100, 7, 1, 3), pal());
  const auto common = compute_stats(occurrence_set(100, 70, 1, 3), pal());
  EXPECT_EQ(rare.frequency(1), common.frequency(1));
  const auto fb_r = weights_fb(rare), fb_c = weights_fb(common);
  const auto tb_r = weights_tb(rare), tb_c = weights_tb(common);
  // Background frequency differs between the two sets; marking classes match.
  for (std::size_t i = 1; i < fb_r.classes.size(); ++i) {
    EXPECT_EQ(fb_r.classes[i].weight, fb_c.classes[i].weight);
  }
  EXPECT_NE(tb_r.classes[1].weight, tb_c.classes[1].weight);
  EXPECT_GT(tb_r.classes[1].weight, tb_c.classes[1].weight);
}

TEST(Weights, AddingOccurrencesNeverRaisesTbWeight) {
  CounterRng r(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<labelmap::LabelMap> labels;
    for (int i = 0; i < 6; ++i) labels.push_back(testing::random_label(5, 5, 21, r));
    const ClassId c = static_cast<ClassId>(1 + r.below(20));
    const auto before = compute_stats(labels, pal());
    if (!before.present(c) || before.occurrence(c) == 1.0) continue;
    // Background plus at least as large a share of c as it already has.
    const auto min_pixels = static_cast<std::uint64_t>(std::ceil(before.frequency(c) * 25.0));
    const auto k = min_pixels + r.below(26 - min_pixels);
    labelmap::LabelMap extra(5, 5, 0);
    for (std::size_t p = 0; p < k; ++p) extra[p] = c;
    labels.push_back(extra);
    const auto after = compute_stats(labels, pal());
    EXPECT_GT(after.occurrence(c), before.occurrence(c));
    EXPECT_LE(weights_tb(after).classes[c].weight, weights_tb(before).classes[c].weight + 1e-15);
  }
}

TEST(Weights, TbNonIncreasingInOwnDenominator) {
  CounterRng r(22);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> f(7), n(7);
    for (std::size_t i = 0; i < 7; ++i) {
      f[i] = r.uniform(0.001, 0.5);
      n[i] = r.uniform(0.0, 1.0);
    }
    const std::size_t c = r.below(7);
    const double w0 = median_total_weights(f, n)[c];
    n[c] = std::min(1.0, n[c] + r.uniform(0.0, 0.5));
    EXPECT_LE(median_total_weights(f, n)[c], w0 + 1e-15);
  }
}

TEST(Weights, SchemeNames) {
  EXPECT_EQ(parse_scheme("tb"), Scheme::kTb);
  EXPECT_EQ(to_string(Scheme::kFb), "fb");
  EXPECT_THROW(parse_scheme("xx"), Error);
}

}  // namespace
}  // namespace roadrand::balance
