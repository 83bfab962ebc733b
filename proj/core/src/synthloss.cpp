#include "roadrand/synthloss.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "roadrand/error.hpp"
#include "roadrand/losskernel.hpp"

namespace roadrand::synthloss {

using losskernel::pairwise_sum;

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                        std::multiplies<>());
  return {std::move(shape), std::vector<double>(n, 0.0)};
}

void validate(const LossWeights& lw) {
  if (!(lw.lambda_fm >= 0.0) || !(lw.lambda_vgg >= 0.0) ||
      !std::isfinite(lw.lambda_fm) || !std::isfinite(lw.lambda_vgg)) {
    throw Error(ErrorCode::kInvalidConfig, "loss lambdas must be finite and >= 0");
  }
  if (lw.l_d < 1 || lw.l_p < 1) {
    throw Error(ErrorCode::kInvalidConfig, "layer counts must be >= 1");
  }
}

double layer_weight(int i, int l) {
  if (l < 1 || i < 1 || i > l) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "layer index " + std::to_string(i) + " outside 1.." + std::to_string(l));
  }
  return std::ldexp(1.0, l - i);
}

namespace {

void check_pair(const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape || a.values.size() != b.values.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature tensor shapes differ");
  }
}

void check_layers(const FeatureLayers& real, const FeatureLayers& fake, int layers) {
  if (real.size() != fake.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature layer counts differ");
  }
  if (layers < 1 || static_cast<std::size_t>(layers) > real.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "weighted layer count " + std::to_string(layers) + " exceeds the " +
                    std::to_string(real.size()) + " available layers");
  }
  for (std::size_t i = 0; i < real.size(); ++i) check_pair(real[i], fake[i]);
}

void check_pyramids(const FeaturePyramid& real, const FeaturePyramid& fake) {
  if (real.scales.size() != fake.scales.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "pyramid scale counts differ");
  }
}

}  // namespace

double layered_l1(const FeatureLayers& real, const FeatureLayers& fake, int layers,
                  L1Norm norm) {
  check_layers(real, fake, layers);
  std::vector<double> terms;
  std::vector<double> diff;
  for (int i = 1; i <= layers; ++i) {
    const Tensor& a = real[i - 1];
    const Tensor& b = fake[i - 1];
    diff.resize(a.values.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = std::abs(a.values[k] - b.values[k]);
    double l1 = pairwise_sum(diff);
    if (norm == L1Norm::kMean && !diff.empty()) l1 /= static_cast<double>(diff.size());
    terms.push_back(l1 / layer_weight(i, layers));
  }
  return pairwise_sum(terms);
}

double feature_matching_loss(const FeaturePyramid& real, const FeaturePyramid& fake,
                             int l_d, L1Norm norm) {
  check_pyramids(real, fake);
  std::vector<double> per_scale;
  for (std::size_t k = 0; k < real.scales.size(); ++k) {
    per_scale.push_back(layered_l1(real.scales[k], fake.scales[k], l_d, norm));
  }
  return pairwise_sum(per_scale);
}

double perceptual_loss(const FeatureLayers& real, const FeatureLayers& fake, int l_p,
                       L1Norm norm) {
  return layered_l1(real, fake, l_p, norm);
}

FeatureLayers perceptual_gradient(const FeatureLayers& real, const FeatureLayers& fake,
                                  int l_p, L1Norm norm) {
  check_layers(real, fake, l_p);
  FeatureLayers grad;
  for (std::size_t i = 0; i < fake.size(); ++i) {
    Tensor g = Tensor::zeros(fake[i].shape);
    if (static_cast<int>(i) < l_p) {
      double scale = 1.0 / layer_weight(static_cast<int>(i) + 1, l_p);
      if (norm == L1Norm::kMean && !g.values.empty()) scale /= static_cast<double>(g.values.size());
      for (std::size_t k = 0; k < g.values.size(); ++k) {
        const double d = fake[i].values[k] - real[i].values[k];
        g.values[k] = d > 0.0 ? scale : (d < 0.0 ? -scale : 0.0);
      }
    }
    grad.push_back(std::move(g));
  }
  return grad;
}

FeaturePyramid feature_matching_gradient(const FeaturePyramid& real,
                                         const FeaturePyramid& fake, int l_d,
                                         L1Norm norm) {
  check_pyramids(real, fake);
  FeaturePyramid grad;
  for (std::size_t k = 0; k < real.scales.size(); ++k) {
    grad.scales.push_back(perceptual_gradient(real.scales[k], fake.scales[k], l_d, norm));
  }
  return grad;
}

namespace {

void check_scores(const Tensor& t, const char* which) {
  if (t.values.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(which) + " score map is empty");
  }
  for (double s : t.values) {
    if (!(s > 0.0 && s < 1.0)) {
      throw Error(ErrorCode::kDomain,
                  std::string(which) + " score " + std::to_string(s) + " outside (0, 1)");
    }
  }
}

double mean_log(const Tensor& t, bool complement) {
  std::vector<double> logs(t.values.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    logs[i] = complement ? std::log1p(-t.values[i]) : std::log(t.values[i]);
  }
  return pairwise_sum(logs) / static_cast<double>(logs.size());
}

}  // namespace

GanTerms gan_loss(const ScoreMap& real_scores, const ScoreMap& fake_scores) {
  if (real_scores.scales.size() != fake_scores.scales.size() ||
      real_scores.scales.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "score maps need the same non-zero scale count");
  }
  GanTerms out;
  for (std::size_t k = 0; k < real_scores.scales.size(); ++k) {
    check_scores(real_scores.scales[k], "real");
    check_scores(fake_scores.scales[k], "fake");
    out.discriminator.push_back(-mean_log(real_scores.scales[k], false) -
                                mean_log(fake_scores.scales[k], true));
    out.generator.push_back(-mean_log(fake_scores.scales[k], false));
  }
  out.discriminator_total = pairwise_sum(out.discriminator);
  out.generator_total = pairwise_sum(out.generator);
  return out;
}

ScoreMap gan_generator_gradient(const ScoreMap& fake_scores) {
  ScoreMap grad;
  for (const Tensor& t : fake_scores.scales) {
    check_scores(t, "fake");
    Tensor g = Tensor::zeros(t.shape);
    g.values.resize(t.values.size());
    const double n = static_cast<double>(t.values.size());
    for (std::size_t i = 0; i < t.values.size(); ++i) g.values[i] = -1.0 / (n * t.values[i]);
    grad.scales.push_back(std::move(g));
  }
  return grad;
}

double total_objective(std::span<const double> gan_generator_terms, double fm,
                       double vgg, const LossWeights& lw) {
  validate(lw);
  for (double v : gan_generator_terms) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "GAN term is not finite");
  }
  if (!std::isfinite(fm) || !std::isfinite(vgg)) {
    throw Error(ErrorCode::kNonFinite, "FM/VGG loss is not finite");
  }
  return pairwise_sum(gan_generator_terms) + lw.lambda_fm * fm + lw.lambda_vgg * vgg;
}

}  // namespace roadrand::synthloss
