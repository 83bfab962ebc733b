#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roadrand/labelmap.hpp"
#include "roadrand/markings.hpp"

namespace roadrand::balance {

struct ClassCount {
  ClassId id = 0;
  std::string name;
  std::uint64_t pixel_count = 0;
  // Sum of the full pixel counts of every label in which the class appears.
  std::uint64_t pixels_in_present_labels = 0;
  std::uint64_t image_count = 0;
};

// Exact per-class counts over a label set. Ratios are derived on demand.
struct ClassStats {
  std::uint64_t total_images = 0;
  std::vector<ClassCount> classes;  // palette order

  // Pixel frequency f_c within the labels containing c. Requires presence.
  double frequency(std::size_t i) const;
  // Occurrence rate n_c = image_count / total_images.
  double occurrence(std::size_t i) const;
  bool present(std::size_t i) const { return classes[i].image_count > 0; }

  // Adds the counts of `other`, which must cover the same classes.
  void merge(const ClassStats& other);
};

ClassStats empty_stats(const markings::Palette& palette);
void accumulate(ClassStats& stats, const labelmap::LabelMap& label);
ClassStats compute_stats(std::span<const labelmap::LabelMap> labels,
                         const markings::Palette& palette);

enum class Scheme { kEq, kFb, kTb };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

struct ClassWeight {
  ClassId id = 0;
  std::string name;
  double weight = 0.0;
  // "absent": never observed, weight 0. "not_in_median": excluded from the
  // median set (background by default) but still weighted by the formula.
  std::vector<std::string> flags;
};

struct WeightVector {
  Scheme scheme = Scheme::kEq;
  std::vector<ClassWeight> classes;

  // Dense per-channel vector indexed by class id; throws if an id in
  // [0, channels) is missing.
  std::vector<double> dense(std::size_t channels) const;
};

struct BalanceOptions {
  bool include_background = false;
};

// Median of a non-empty set; even sizes average the two middle values.
double median(std::vector<double> values);

// w_c = median(F) / f_c.
std::vector<double> median_frequency_weights(std::span<const double> f);
// w_c = median(G) / (f_c + n_c), G = {f_c + n_c}.
std::vector<double> median_total_weights(std::span<const double> f,
                                         std::span<const double> n);

WeightVector weights_eq(const markings::Palette& palette);
WeightVector weights_fb(const ClassStats& stats, const BalanceOptions& opts = {});
WeightVector weights_tb(const ClassStats& stats, const BalanceOptions& opts = {});

}  // namespace roadrand::balance
