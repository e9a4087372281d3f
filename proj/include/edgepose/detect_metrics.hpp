#pragma once

#include <optional>
#include <span>
#include <vector>

namespace edgepose {

// Axis-aligned box, top-left corner plus size, in pixels.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;
  double score = 1.0;  // meaningful for predictions only
  int class_id = 0;

  // Throws ParameterError unless w, h > 0 and every field is finite.
  void validate() const;
  bool operator==(const BBox &) const = default;
};

struct MatchedPair {
  std::size_t prediction = 0;  // index into the input prediction list
  std::size_t ground_truth = 0;
  double iou = 0.0;
};

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<MatchedPair> pairs;

  MatchResult &operator+=(const MatchResult &other);
};

double iou(const BBox &a, const BBox &b);

// Greedy one-to-one matching. Predictions scoring below score_min are
// ignored; the rest are visited by descending score (stable for ties) and
// each takes the unmatched ground truth of highest IoU >= iou_min (lowest
// index on ties).
MatchResult match_detections(std::span<const BBox> predictions,
                             std::span<const BBox> ground_truths,
                             double iou_min = 0.5, double score_min = 0.0);

// TP / (TP + FP); nullopt when nothing was predicted.
std::optional<double> precision(const MatchResult &m);
// TP / (TP + FN); nullopt when there was nothing to find.
std::optional<double> recall(const MatchResult &m);

}  // namespace edgepose
