#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roadrand/balance.hpp"
#include "roadrand/labelmap.hpp"

namespace roadrand::losskernel {

// Channel-major (C, H, W) real tensor.
class ChannelMap {
 public:
  ChannelMap() = default;
  ChannelMap(int channels, int height, int width, double fill = 0.0);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t plane() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }

  double at(int c, int y, int x) const { return values_[offset(c, y, x)]; }
  double& at(int c, int y, int x) { return values_[offset(c, y, x)]; }
  // Channel c of flat pixel index p.
  double at(int c, std::size_t p) const { return values_[c * plane() + p]; }
  double& at(int c, std::size_t p) { return values_[c * plane() + p]; }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t offset(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

// Raw network scores.
struct LogitMap : ChannelMap {
  using ChannelMap::ChannelMap;
};

// Per-pixel class probabilities (channels sum to 1).
struct ProbMap : ChannelMap {
  using ChannelMap::ChannelMap;
};

// Deterministic pairwise (tree) summation; result is independent of how the
// caller schedules the per-element work.
double pairwise_sum(std::span<const double> values);

ProbMap softmax_channelwise(const LogitMap& logits);

enum class Reduction {
  // Sum of weighted pixel losses divided by the non-ignored pixel count.
  kPixelMean,
  // Divided by the sum of the weights of non-ignored pixels instead.
  kWeightedMean,
};

struct CrossEntropyResult {
  double loss = 0.0;
  ChannelMap grad;
  std::size_t counted_pixels = 0;
  // Set when every pixel carried ignore_id; loss and grad are then zero.
  bool all_ignored = false;
};

// Class-weighted cross-entropy with its exact gradient with respect to the
// logits. weights[c] applies to pixels whose target is c.
CrossEntropyResult weighted_cross_entropy(const LogitMap& logits,
                                          const labelmap::LabelMap& target,
                                          std::span<const double> weights,
                                          ClassId ignore_id,
                                          Reduction reduction = Reduction::kPixelMean);
CrossEntropyResult weighted_cross_entropy(const LogitMap& logits,
                                          const labelmap::LabelMap& target,
                                          const balance::WeightVector& weights,
                                          ClassId ignore_id,
                                          Reduction reduction = Reduction::kPixelMean);

// Channel with the largest value per pixel; ties go to the lowest id.
labelmap::LabelMap argmax_decode(const ChannelMap& scores);

}  // namespace roadrand::losskernel
