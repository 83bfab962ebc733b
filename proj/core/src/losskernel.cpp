#include "roadrand/losskernel.hpp"

#include <cmath>
#include <string>

#include "roadrand/error.hpp"

namespace roadrand::losskernel {

ChannelMap::ChannelMap(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 1 || height < 1 || width < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "channel map dimensions must be >= 1");
  }
  values_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

void check_finite(const ChannelMap& m) {
  for (double v : m.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "logits must be finite");
  }
}

}  // namespace

ProbMap softmax_channelwise(const LogitMap& logits) {
  if (logits.channels() < 2) {
    throw Error(ErrorCode::kDimensionMismatch, "softmax needs at least two channels");
  }
  check_finite(logits);
  ProbMap out(logits.channels(), logits.height(), logits.width());
  const int C = logits.channels();
  for (std::size_t p = 0; p < logits.plane(); ++p) {
    double m = logits.at(0, p);
    for (int c = 1; c < C; ++c) m = std::max(m, logits.at(c, p));
    double z = 0.0;
    for (int c = 0; c < C; ++c) {
      const double e = std::exp(logits.at(c, p) - m);
      out.at(c, p) = e;
      z += e;
    }
    for (int c = 0; c < C; ++c) out.at(c, p) /= z;
  }
  return out;
}

CrossEntropyResult weighted_cross_entropy(const LogitMap& logits,
                                          const labelmap::LabelMap& target,
                                          std::span<const double> weights,
                                          ClassId ignore_id, Reduction reduction) {
  const int C = logits.channels();
  if (target.width() != logits.width() || target.height() != logits.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "target and logits shapes differ");
  }
  if (weights.size() != static_cast<std::size_t>(C)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(C) + " class weights, got " +
                    std::to_string(weights.size()));
  }
  for (std::size_t p = 0; p < target.size(); ++p) {
    const ClassId t = target[p];
    if (t != ignore_id && t >= C) {
      throw Error(ErrorCode::kInvalidTarget,
                  "target id " + std::to_string(t) + " has no logit channel");
    }
  }
  const ProbMap prob = softmax_channelwise(logits);

  CrossEntropyResult out;
  out.grad = ChannelMap(C, logits.height(), logits.width());
  std::vector<double> pixel_loss(target.size(), 0.0);
  std::vector<double> pixel_weight(target.size(), 0.0);
  for (std::size_t p = 0; p < target.size(); ++p) {
    const ClassId t = target[p];
    if (t == ignore_id) continue;
    ++out.counted_pixels;
    // -log softmax_t = logsumexp(x) - x_t, evaluated stably.
    double m = logits.at(0, p);
    for (int c = 1; c < C; ++c) m = std::max(m, logits.at(c, p));
    double z = 0.0;
    for (int c = 0; c < C; ++c) z += std::exp(logits.at(c, p) - m);
    pixel_loss[p] = weights[t] * (m + std::log(z) - logits.at(t, p));
    pixel_weight[p] = weights[t];
  }
  if (out.counted_pixels == 0) {
    out.all_ignored = true;
    return out;
  }

  const double norm = reduction == Reduction::kPixelMean
                          ? static_cast<double>(out.counted_pixels)
                          : pairwise_sum(pixel_weight);
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::kDegenerateClass, "weighted-mean normaliser is zero");
  }
  out.loss = pairwise_sum(pixel_loss) / norm;
  for (std::size_t p = 0; p < target.size(); ++p) {
    const ClassId t = target[p];
    if (t == ignore_id) continue;
    const double scale = weights[t] / norm;
    for (int c = 0; c < C; ++c) {
      out.grad.at(c, p) = scale * (prob.at(c, p) - (c == t ? 1.0 : 0.0));
    }
  }
  return out;
}

CrossEntropyResult weighted_cross_entropy(const LogitMap& logits,
                                          const labelmap::LabelMap& target,
                                          const balance::WeightVector& weights,
                                          ClassId ignore_id, Reduction reduction) {
  const std::vector<double> dense = weights.dense(logits.channels());
  return weighted_cross_entropy(logits, target, dense, ignore_id, reduction);
}

labelmap::LabelMap argmax_decode(const ChannelMap& scores) {
  if (scores.channels() > 256) {
    throw Error(ErrorCode::kDimensionMismatch, "at most 256 channels can be decoded");
  }
  labelmap::LabelMap out(scores.width(), scores.height());
  for (std::size_t p = 0; p < scores.plane(); ++p) {
    int best = 0;
    for (int c = 1; c < scores.channels(); ++c) {
      if (scores.at(c, p) > scores.at(best, p)) best = c;
    }
    out[p] = static_cast<ClassId>(best);
  }
  return out;
}

}  // namespace roadrand::losskernel
