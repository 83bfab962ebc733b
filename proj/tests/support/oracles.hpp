#pragma once

// Straightforward reference implementations used to cross-check the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "roadrand/labelmap.hpp"
#include "roadrand/rng.hpp"

namespace roadrand::testing {

// Recounts f_c and n_c with nested loops and recomputes the weights with a
// full sort for the median. Absent classes get weight 0; `skip` is counted
// but left out of the median.
inline std::map<int, double> brute_force_weights(const std::vector<labelmap::LabelMap>& labels,
                                                 const std::vector<int>& ids, bool total,
                                                 int skip = 0) {
  std::map<int, double> denom;
  std::map<int, bool> present;
  for (int id : ids) {
    long double pix = 0, pix_present = 0, imgs = 0;
    for (const auto& l : labels) {
      long long here = 0;
      for (int y = 0; y < l.height(); ++y) {
        for (int x = 0; x < l.width(); ++x) here += l.at(x, y) == id;
      }
      if (here > 0) {
        pix += here;
        pix_present += static_cast<long double>(l.width()) * l.height();
        imgs += 1;
      }
    }
    present[id] = imgs > 0;
    if (imgs == 0) continue;
    double d = static_cast<double>(pix) / static_cast<double>(pix_present);
    if (total) d += static_cast<double>(imgs) / static_cast<double>(labels.size());
    denom[id] = d;
  }
  std::vector<double> set;
  for (int id : ids) {
    if (present[id] && id != skip) set.push_back(denom[id]);
  }
  std::sort(set.begin(), set.end());
  const std::size_t n = set.size();
  const double med = n % 2 ? set[n / 2] : 0.5 * (set[n / 2 - 1] + set[n / 2]);
  std::map<int, double> w;
  for (int id : ids) w[id] = present[id] ? med / denom[id] : 0.0;
  return w;
}

struct Confusion {
  long tp = 0, fp = 0, fn = 0;
};

inline Confusion brute_force_confusion(const labelmap::LabelMap& pred,
                                       const labelmap::LabelMap& gt, int c, int ignore) {
  Confusion k;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const int g = gt.at(x, y);
      const int p = pred.at(x, y);
      if (g == ignore) continue;
      if (p == c && g == c) ++k.tp;
      else if (p == c) ++k.fp;
      else if (g == c) ++k.fn;
    }
  }
  return k;
}

inline labelmap::LabelMap random_label(int w, int h, int classes, CounterRng& s) {
  labelmap::LabelMap m(w, h);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = static_cast<ClassId>(s.below(static_cast<std::uint64_t>(classes)));
  }
  return m;
}

// Pixel-mean weighted cross-entropy in extended precision, written directly
// from the formula. `logits` is channel-major (C, H, W).
inline long double reference_cross_entropy(const std::vector<long double>& logits, int channels,
                                           const labelmap::LabelMap& target,
                                           const std::vector<double>& weights, int ignore) {
  const std::size_t plane = target.size();
  long double sum = 0.0L;
  std::size_t counted = 0;
  for (std::size_t p = 0; p < plane; ++p) {
    const int t = target[p];
    if (t == ignore) continue;
    ++counted;
    long double m = logits[p];
    for (int c = 1; c < channels; ++c) m = std::max(m, logits[c * plane + p]);
    long double z = 0.0L;
    for (int c = 0; c < channels; ++c) z += std::exp(logits[c * plane + p] - m);
    sum += weights[t] * (m + std::log(z) - logits[t * plane + p]);
  }
  return counted == 0 ? 0.0L : sum / static_cast<long double>(counted);
}

// Central difference of the extended-precision loss along logit i.
inline double reference_cross_entropy_slope(std::vector<long double> logits, int channels,
                                            const labelmap::LabelMap& target,
                                            const std::vector<double>& weights, int ignore,
                                            std::size_t i, double h) {
  const long double x0 = logits[i];
  logits[i] = x0 + h;
  const long double up = reference_cross_entropy(logits, channels, target, weights, ignore);
  logits[i] = x0 - h;
  const long double down = reference_cross_entropy(logits, channels, target, weights, ignore);
  return static_cast<double>((up - down) / (2.0L * h));
}

// Central difference of f along coordinate i of x.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t i, double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = f(x);
  x[i] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

}  // namespace roadrand::testing
