#include "edgepose/detect_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "edgepose/error.hpp"

namespace edgepose {

void BBox::validate() const {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) ||
      !std::isfinite(h) || !std::isfinite(score)) {
    throw ParameterError("bounding box has non-finite fields");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw ParameterError("bounding box width and height must be positive");
  }
}

MatchResult &MatchResult::operator+=(const MatchResult &other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

double iou(const BBox &a, const BBox &b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  if (inter <= 0.0) return 0.0;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

MatchResult match_detections(std::span<const BBox> predictions,
                             std::span<const BBox> ground_truths,
                             double iou_min, double score_min) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].score >= score_min) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return predictions[a].score > predictions[b].score;
  });

  MatchResult result;
  std::vector<bool> taken(ground_truths.size(), false);
  for (const std::size_t p : order) {
    std::size_t best_gt = ground_truths.size();
    double best_iou = -1.0;
    for (std::size_t g = 0; g < ground_truths.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(predictions[p], ground_truths[g]);
      if (v >= iou_min && v > best_iou) {
        best_iou = v;
        best_gt = g;
      }
    }
    if (best_gt == ground_truths.size()) {
      ++result.fp;
      continue;
    }
    taken[best_gt] = true;
    ++result.tp;
    result.pairs.push_back({p, best_gt, best_iou});
  }
  result.fn = ground_truths.size() - result.tp;
  return result;
}

std::optional<double> precision(const MatchResult &m) {
  if (m.tp + m.fp == 0) return std::nullopt;
  return static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
}

std::optional<double> recall(const MatchResult &m) {
  if (m.tp + m.fn == 0) return std::nullopt;
  return static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
}

}  // namespace edgepose
