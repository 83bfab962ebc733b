#include "roadrand/balance.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "roadrand/error.hpp"

namespace roadrand::balance {

double ClassStats::frequency(std::size_t i) const {
  const auto& c = classes.at(i);
  if (c.pixels_in_present_labels == 0) {
    throw Error(ErrorCode::kDegenerateClass, "class '" + c.name + "' is absent");
  }
  return static_cast<double>(c.pixel_count) /
         static_cast<double>(c.pixels_in_present_labels);
}

double ClassStats::occurrence(std::size_t i) const {
  if (total_images == 0) throw Error(ErrorCode::kEmptyInput, "no labels counted");
  return static_cast<double>(classes.at(i).image_count) /
         static_cast<double>(total_images);
}

void ClassStats::merge(const ClassStats& other) {
  if (other.classes.size() != classes.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot merge stats over different palettes");
  }
  total_images += other.total_images;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].id != other.classes[i].id) {
      throw Error(ErrorCode::kDimensionMismatch, "cannot merge stats over different palettes");
    }
    classes[i].pixel_count += other.classes[i].pixel_count;
    classes[i].pixels_in_present_labels += other.classes[i].pixels_in_present_labels;
    classes[i].image_count += other.classes[i].image_count;
  }
}

ClassStats empty_stats(const markings::Palette& palette) {
  ClassStats s;
  for (const auto& c : palette) s.classes.push_back({c.id, c.name, 0, 0, 0});
  return s;
}

void accumulate(ClassStats& stats, const labelmap::LabelMap& label) {
  std::array<std::uint64_t, 256> hist{};
  for (ClassId id : label.data()) ++hist[id];
  const std::uint64_t total = label.size();
  ++stats.total_images;
  for (auto& c : stats.classes) {
    if (hist[c.id] == 0) continue;
    c.pixel_count += hist[c.id];
    c.pixels_in_present_labels += total;
    ++c.image_count;
  }
}

ClassStats compute_stats(std::span<const labelmap::LabelMap> labels,
                         const markings::Palette& palette) {
  if (labels.empty()) throw Error(ErrorCode::kEmptyInput, "no labels to count");
  ClassStats s = empty_stats(palette);
  for (const auto& l : labels) accumulate(s, l);
  return s;
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kEq: return "eq";
    case Scheme::kFb: return "fb";
    case Scheme::kTb: return "tb";
  }
  return "eq";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "eq" || s == "EQ") return Scheme::kEq;
  if (s == "fb" || s == "FB") return Scheme::kFb;
  if (s == "tb" || s == "TB") return Scheme::kTb;
  throw Error(ErrorCode::kInvalidConfig, "unknown weighting scheme '" + std::string(s) + "'");
}

std::vector<double> WeightVector::dense(std::size_t channels) const {
  std::vector<double> out(channels, 0.0);
  std::vector<bool> seen(channels, false);
  for (const auto& c : classes) {
    if (c.id < channels) {
      out[c.id] = c.weight;
      seen[c.id] = true;
    }
  }
  for (std::size_t i = 0; i < channels; ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "weight vector has no entry for class id " + std::to_string(i));
    }
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

std::vector<double> median_frequency_weights(std::span<const double> f) {
  for (double v : f) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kDegenerateClass, "pixel frequency must be positive");
    }
  }
  const double m = median({f.begin(), f.end()});
  std::vector<double> w;
  w.reserve(f.size());
  for (double v : f) w.push_back(m / v);
  return w;
}

std::vector<double> median_total_weights(std::span<const double> f,
                                         std::span<const double> n) {
  if (f.size() != n.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "f and n must have equal length");
  }
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    g[i] = f[i] + n[i];
    if (!(g[i] > 0.0) || !std::isfinite(g[i])) {
      throw Error(ErrorCode::kDegenerateClass, "f_c + n_c must be positive");
    }
  }
  const double m = median(g);
  std::vector<double> w;
  w.reserve(g.size());
  for (double v : g) w.push_back(m / v);
  return w;
}

WeightVector weights_eq(const markings::Palette& palette) {
  WeightVector out{Scheme::kEq, {}};
  for (const auto& c : palette) out.classes.push_back({c.id, c.name, 1.0, {}});
  return out;
}

namespace {

WeightVector balanced(const ClassStats& stats, const BalanceOptions& opts, Scheme scheme) {
  if (stats.total_images == 0) throw Error(ErrorCode::kEmptyInput, "stats cover no labels");
  // Per-class denominator: f_c for FB, f_c + n_c for TB.
  const auto denom = [&](std::size_t i) {
    const auto& c = stats.classes[i];
    if (c.pixel_count > 0 && c.pixels_in_present_labels == 0) {
      throw Error(ErrorCode::kDegenerateClass, "inconsistent counts for '" + c.name + "'");
    }
    const double f = c.pixels_in_present_labels == 0 ? 0.0 : stats.frequency(i);
    return scheme == Scheme::kFb ? f : f + stats.occurrence(i);
  };

  WeightVector out{scheme, {}};
  std::vector<double> median_set;
  for (std::size_t i = 0; i < stats.classes.size(); ++i) {
    const auto& c = stats.classes[i];
    out.classes.push_back({c.id, c.name, 0.0, {}});
    if (!stats.present(i)) {
      out.classes.back().flags.push_back("absent");
      continue;
    }
    const double d = denom(i);
    if (!(d > 0.0)) {
      throw Error(ErrorCode::kDegenerateClass,
                  "class '" + c.name + "' has a zero balancing denominator");
    }
    if (c.id == markings::kBackgroundId && !opts.include_background) {
      out.classes.back().flags.push_back("not_in_median");
      continue;
    }
    median_set.push_back(d);
  }
  if (median_set.empty()) {
    throw Error(ErrorCode::kDegenerateClass, "no present class to balance");
  }
  const double m = median(median_set);
  for (std::size_t i = 0; i < stats.classes.size(); ++i) {
    if (stats.present(i)) out.classes[i].weight = m / denom(i);
  }
  return out;
}

}  // namespace

WeightVector weights_fb(const ClassStats& stats, const BalanceOptions& opts) {
  return balanced(stats, opts, Scheme::kFb);
}

WeightVector weights_tb(const ClassStats& stats, const BalanceOptions& opts) {
  return balanced(stats, opts, Scheme::kTb);
}

}  // namespace roadrand::balance
