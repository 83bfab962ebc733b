#include "roadrand/metrics.hpp"

#include <charconv>
#include <cstdio>
#include <string>

#include "roadrand/error.hpp"
#include "roadrand/losskernel.hpp"

namespace roadrand::metrics {

namespace {

void check_shapes(const labelmap::LabelMap& pred, const labelmap::LabelMap& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "prediction " + std::to_string(pred.width()) + "x" +
                    std::to_string(pred.height()) + " vs ground truth " +
                    std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
}

}  // namespace

PixelCounts count_pixels(const labelmap::LabelMap& pred, const labelmap::LabelMap& gt,
                         ClassId c, ClassId ignore_id) {
  check_shapes(pred, gt);
  PixelCounts out;
  const auto& p = pred.data();
  const auto& g = gt.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == ignore_id) continue;
    const bool pc = p[i] == c;
    const bool gc = g[i] == c;
    out.tp += pc && gc;
    out.fp += pc && !gc;
    out.fn += !pc && gc;
  }
  return out;
}

std::vector<PixelCounts> count_all(const labelmap::LabelMap& pred,
                                   const labelmap::LabelMap& gt, ClassId ignore_id) {
  check_shapes(pred, gt);
  std::vector<PixelCounts> out(256);
  const auto& p = pred.data();
  const auto& g = gt.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == ignore_id) continue;
    if (p[i] == g[i]) {
      ++out[g[i]].tp;
    } else {
      ++out[p[i]].fp;
      ++out[g[i]].fn;
    }
  }
  return out;
}

ImageMetrics image_metrics(const PixelCounts& c) {
  ImageMetrics m;
  if (c.degenerate()) return m;
  m.defined = true;
  const double tp = static_cast<double>(c.tp);
  m.precision = c.tp + c.fp > 0 ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
  m.recall = c.tp + c.fn > 0 ? tp / static_cast<double>(c.tp + c.fn) : 0.0;
  const double pr = m.precision + m.recall;
  m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  m.iou = tp / static_cast<double>(c.tp + c.fp + c.fn);
  return m;
}

std::string_view to_string(Averaging a) {
  return a == Averaging::kPerImage ? "per-image" : "pooled";
}

Averaging parse_averaging(std::string_view s) {
  if (s == "per-image") return Averaging::kPerImage;
  if (s == "pooled") return Averaging::kPooled;
  throw Error(ErrorCode::kInvalidConfig, "unknown averaging mode '" + std::string(s) + "'");
}

std::vector<EvalClass> resolve_classes(std::span<const std::string> names,
                                       const markings::Palette& palette) {
  std::vector<EvalClass> out;
  for (const std::string& n : names) {
    const markings::MarkingClass* cls = markings::try_find_class(palette, n);
    if (cls == nullptr) {
      unsigned id = 0;
      auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), id);
      if (ec == std::errc() && ptr == n.data() + n.size() && id < 256) {
        cls = markings::try_find_class(palette, static_cast<ClassId>(id));
      }
    }
    if (cls == nullptr) throw Error(ErrorCode::kUnknownClass, "unknown class '" + n + "'");
    for (const EvalClass& e : out) {
      if (e.id == cls->id) {
        throw Error(ErrorCode::kInvalidConfig, "class '" + n + "' listed twice");
      }
    }
    out.push_back({cls->id, cls->name});
  }
  return out;
}

SetEvaluator::SetEvaluator(std::vector<EvalClass> classes, ClassId ignore_id,
                           Averaging averaging)
    : classes_(std::move(classes)),
      ignore_id_(ignore_id),
      averaging_(averaging),
      pooled_(classes_.size()),
      per_image_(classes_.size()) {
  if (classes_.empty()) throw Error(ErrorCode::kEmptyInput, "no classes to evaluate");
}

void SetEvaluator::add(const labelmap::LabelMap& pred, const labelmap::LabelMap& gt) {
  const std::vector<PixelCounts> counts = count_all(pred, gt, ignore_id_);
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    const PixelCounts& c = counts[classes_[k].id];
    pooled_[k] += c;
    per_image_[k].push_back(image_metrics(c));
  }
  ++images_;
}

MetricsReport SetEvaluator::report() const {
  if (images_ == 0) throw Error(ErrorCode::kEmptyInput, "no image pairs to evaluate");
  MetricsReport r;
  r.averaging = averaging_;
  r.ignore_id = ignore_id_;
  r.image_count = images_;
  std::vector<double> pre, rec, f1, iou;
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    ClassReport c;
    c.id = classes_[k].id;
    c.name = classes_[k].name;
    c.pooled = pooled_[k];
    std::vector<double> p, q, f, u;
    for (const ImageMetrics& m : per_image_[k]) {
      if (!m.defined) {
        ++c.skipped_images;
        continue;
      }
      p.push_back(m.precision);
      q.push_back(m.recall);
      f.push_back(m.f1);
      u.push_back(m.iou);
    }
    c.image_count = p.size();
    if (averaging_ == Averaging::kPooled) {
      const ImageMetrics m = image_metrics(c.pooled);
      c.evaluable = m.defined;
      c.precision = m.precision;
      c.recall = m.recall;
      c.f1 = m.f1;
      c.iou = m.iou;
    } else if (!p.empty()) {
      const double n = static_cast<double>(p.size());
      c.evaluable = true;
      c.precision = losskernel::pairwise_sum(p) / n;
      c.recall = losskernel::pairwise_sum(q) / n;
      c.f1 = losskernel::pairwise_sum(f) / n;
      c.iou = losskernel::pairwise_sum(u) / n;
    }
    if (c.evaluable) {
      pre.push_back(c.precision);
      rec.push_back(c.recall);
      f1.push_back(c.f1);
      iou.push_back(c.iou);
    }
    r.classes.push_back(std::move(c));
  }
  if (!iou.empty()) {
    const double n = static_cast<double>(iou.size());
    r.mean.precision = losskernel::pairwise_sum(pre) / n;
    r.mean.recall = losskernel::pairwise_sum(rec) / n;
    r.mean.f1 = losskernel::pairwise_sum(f1) / n;
    r.mean.iou = losskernel::pairwise_sum(iou) / n;
    r.mean.class_count = iou.size();
  }
  r.miou = r.mean.iou;
  return r;
}

MetricsReport evaluate_set(std::span<const LabelPair> pairs,
                           std::span<const EvalClass> classes, ClassId ignore_id,
                           Averaging averaging) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "no image pairs to evaluate");
  SetEvaluator ev(std::vector<EvalClass>(classes.begin(), classes.end()), ignore_id,
                  averaging);
  for (const LabelPair& p : pairs) ev.add(p.first, p.second);
  return ev.report();
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

}  // namespace

std::string to_csv(const MetricsReport& report) {
  std::string out = "class,PRE,REC,F1,IoU,images\n";
  for (const ClassReport& c : report.classes) {
    out += c.name;
    if (c.evaluable) {
      out += "," + pct(c.precision) + "," + pct(c.recall) + "," + pct(c.f1) + "," +
             pct(c.iou);
    } else {
      out += ",,,,";
    }
    out += "," + std::to_string(c.image_count) + "\n";
  }
  out += "MEAN," + pct(report.mean.precision) + "," + pct(report.mean.recall) + "," +
         pct(report.mean.f1) + "," + pct(report.mean.iou) + "," +
         std::to_string(report.image_count) + "\n";
  return out;
}

}  // namespace roadrand::metrics
