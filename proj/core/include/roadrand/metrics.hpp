#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roadrand/labelmap.hpp"
#include "roadrand/markings.hpp"

namespace roadrand::metrics {

struct PixelCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  bool degenerate() const noexcept { return tp == 0 && fp == 0 && fn == 0; }
  PixelCounts& operator+=(const PixelCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const PixelCounts&, const PixelCounts&) = default;
};

// Ground-truth pixels equal to ignore_id are excluded from every count.
PixelCounts count_pixels(const labelmap::LabelMap& pred, const labelmap::LabelMap& gt,
                         ClassId c, ClassId ignore_id = 255);

// Counts for every id 0..255 in one pass.
std::vector<PixelCounts> count_all(const labelmap::LabelMap& pred,
                                   const labelmap::LabelMap& gt,
                                   ClassId ignore_id = 255);

struct ImageMetrics {
  // False when tp = fp = fn = 0; the values are then 0 and must be skipped.
  bool defined = false;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
};

ImageMetrics image_metrics(const PixelCounts& counts);

enum class Averaging {
  kPerImage,  // metrics per image, then averaged over defined images
  kPooled,    // counts summed over the set, metrics computed once
};

std::string_view to_string(Averaging a);
Averaging parse_averaging(std::string_view s);

struct EvalClass {
  ClassId id = 0;
  std::string name;
};

// Resolves names or numeric ids against the palette.
std::vector<EvalClass> resolve_classes(std::span<const std::string> names,
                                       const markings::Palette& palette);

struct ClassReport {
  ClassId id = 0;
  std::string name;
  bool evaluable = false;
  std::uint64_t image_count = 0;    // images where the class is defined
  std::uint64_t skipped_images = 0; // degenerate images
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
  PixelCounts pooled;
};

struct MeanBlock {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;  // mIoU
  std::size_t class_count = 0;
};

struct MetricsReport {
  Averaging averaging = Averaging::kPerImage;
  ClassId ignore_id = 255;
  std::uint64_t image_count = 0;
  // Degenerate images (class absent from gt and pred) are skipped per class.
  std::string degenerate_policy = "skip";
  std::vector<ClassReport> classes;
  // Mean over the evaluable classes of the declared subset.
  MeanBlock mean;
  double miou = 0.0;
};

// Streaming accumulator; add() order does not affect the result beyond the
// fixed left-to-right averaging order.
class SetEvaluator {
 public:
  SetEvaluator(std::vector<EvalClass> classes, ClassId ignore_id = 255,
               Averaging averaging = Averaging::kPerImage);

  void add(const labelmap::LabelMap& pred, const labelmap::LabelMap& gt);
  MetricsReport report() const;

 private:
  std::vector<EvalClass> classes_;
  ClassId ignore_id_;
  Averaging averaging_;
  std::uint64_t images_ = 0;
  std::vector<PixelCounts> pooled_;
  std::vector<std::vector<ImageMetrics>> per_image_;
};

using LabelPair = std::pair<labelmap::LabelMap, labelmap::LabelMap>;  // (pred, gt)

MetricsReport evaluate_set(std::span<const LabelPair> pairs,
                           std::span<const EvalClass> classes, ClassId ignore_id = 255,
                           Averaging averaging = Averaging::kPerImage);

// Table layout: one row per class with PRE, REC, F1, IoU in percent plus a
// MEAN row.
std::string to_csv(const MetricsReport& report);

}  // namespace roadrand::metrics
