#pragma once

// Exhaustive detection-matching oracle. Enumerates every one-to-one partial
// assignment of predictions to ground truths (IoU >= iou_min) and keeps the
// one whose per-prediction keys, read in descending-score order, are
// lexicographically largest. Key of a prediction: (matched, IoU, -gt index).
// Greedy score-ordered matching is exactly this maximum.

#include <algorithm>
#include <numeric>
#include <tuple>
#include <vector>

namespace oracle {

struct BruteBox {
  double x, y, w, h, score;
};

inline double brute_iou(const BruteBox &a, const BruteBox &b) {
  const double left = std::max(a.x, b.x), right = std::min(a.x + a.w, b.x + b.w);
  const double top = std::max(a.y, b.y), bottom = std::min(a.y + a.h, b.y + b.h);
  if (right <= left || bottom <= top) return 0.0;
  const double inter = (right - left) * (bottom - top);
  return inter / (a.w * a.h + b.w * b.h - inter);
}

struct BruteResult {
  int tp = 0, fp = 0, fn = 0;
  std::vector<int> assignment;  // per prediction: gt index or -1 (or -2 if filtered)
};

inline BruteResult brute_force_match(const std::vector<BruteBox> &preds,
                                     const std::vector<BruteBox> &gts,
                                     double iou_min, double score_min) {
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(preds.size()); ++i) {
    if (preds[i].score >= score_min) order.push_back(i);
  }
  // Selection order by repeated arg-max (first index wins ties).
  std::vector<int> sorted;
  std::vector<bool> picked(order.size(), false);
  for (std::size_t r = 0; r < order.size(); ++r) {
    int best = -1;
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (picked[j]) continue;
      if (best < 0 || preds[order[j]].score > preds[order[best]].score) best = static_cast<int>(j);
    }
    picked[best] = true;
    sorted.push_back(order[best]);
  }

  using Key = std::vector<std::tuple<int, double, int>>;
  Key best_key;
  bool have_best = false;
  std::vector<int> best_assign;
  std::vector<int> assign(sorted.size(), -1);
  std::vector<bool> used(gts.size(), false);

  auto recurse = [&](auto &&self, std::size_t pos) -> void {
    if (pos == sorted.size()) {
      Key key;
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (assign[i] < 0) {
          key.emplace_back(0, 0.0, 0);
        } else {
          key.emplace_back(1, brute_iou(preds[sorted[i]], gts[assign[i]]), -assign[i]);
        }
      }
      if (!have_best || key > best_key) {
        have_best = true;
        best_key = key;
        best_assign = assign;
      }
      return;
    }
    assign[pos] = -1;
    self(self, pos + 1);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || brute_iou(preds[sorted[pos]], gts[g]) < iou_min) continue;
      used[g] = true;
      assign[pos] = static_cast<int>(g);
      self(self, pos + 1);
      used[g] = false;
      assign[pos] = -1;
    }
  };
  recurse(recurse, 0);

  BruteResult out;
  out.assignment.assign(preds.size(), -2);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.assignment[sorted[i]] = best_assign[i];
    if (out.assignment[sorted[i]] >= 0) {
      ++out.tp;
    } else {
      ++out.fp;
    }
  }
  out.fn = static_cast<int>(gts.size()) - out.tp;
  return out;
}

}  // namespace oracle
