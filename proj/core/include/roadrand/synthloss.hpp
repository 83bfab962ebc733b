#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace roadrand::synthloss {

// Dense real tensor of arbitrary shape; only the element count and shape
// equality matter to the loss combinators.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  static Tensor zeros(std::vector<std::size_t> shape);
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

// Ordered intermediate feature tensors of one network at one scale.
using FeatureLayers = std::vector<Tensor>;

// Per-scale feature layers (one entry per discriminator scale).
struct FeaturePyramid {
  std::vector<FeatureLayers> scales;
};

// Per-scale discriminator outputs with values in the open interval (0, 1).
struct ScoreMap {
  std::vector<Tensor> scales;
};

enum class L1Norm {
  kSum,   // elementwise |.| summed over the tensor
  kMean,  // ... divided by the element count
};

inline constexpr int kDefaultScales = 3;
inline constexpr int kDefaultDiscriminatorLayers = 4;
inline constexpr int kDefaultPerceptualLayers = 5;

struct LossWeights {
  double lambda_fm = 10.0;
  double lambda_vgg = 10.0;
  int l_d = kDefaultDiscriminatorLayers;
  int l_p = kDefaultPerceptualLayers;
};

void validate(const LossWeights& lw);

// 2^(l - i) for 1 <= i <= l.
double layer_weight(int i, int l);

// sum_i (1 / w_i) * ||real_i - fake_i||_1 over the first `layers` layers.
double layered_l1(const FeatureLayers& real, const FeatureLayers& fake,
                  int layers, L1Norm norm = L1Norm::kSum);

// Discriminator feature-matching loss summed over every scale.
double feature_matching_loss(const FeaturePyramid& real, const FeaturePyramid& fake,
                             int l_d, L1Norm norm = L1Norm::kSum);

// Perceptual loss over a single scale of perception-network features.
double perceptual_loss(const FeatureLayers& real, const FeatureLayers& fake,
                       int l_p, L1Norm norm = L1Norm::kSum);

// d(loss)/d(fake); zero where real == fake and beyond the weighted layers.
FeaturePyramid feature_matching_gradient(const FeaturePyramid& real,
                                         const FeaturePyramid& fake, int l_d,
                                         L1Norm norm = L1Norm::kSum);
FeatureLayers perceptual_gradient(const FeatureLayers& real, const FeatureLayers& fake,
                                  int l_p, L1Norm norm = L1Norm::kSum);

struct GanTerms {
  // Per scale: -mean(log D(real)) - mean(log(1 - D(fake))).
  std::vector<double> discriminator;
  // Per scale: -mean(log D(fake)).
  std::vector<double> generator;
  double discriminator_total = 0.0;
  double generator_total = 0.0;
};

// Saturating GAN loss per scale. Scores outside (0, 1) are a domain error.
GanTerms gan_loss(const ScoreMap& real_scores, const ScoreMap& fake_scores);

// d(generator term of scale k)/d(fake score) = -1 / (N_k * s).
ScoreMap gan_generator_gradient(const ScoreMap& fake_scores);

// sum_k gan_k + lambda_fm * fm + lambda_vgg * vgg.
double total_objective(std::span<const double> gan_generator_terms, double fm,
                       double vgg, const LossWeights& lw);

}  // namespace roadrand::synthloss
