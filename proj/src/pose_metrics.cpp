#include "edgepose/pose_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "edgepose/error.hpp"

namespace edgepose {

namespace {

// Both nearest-neighbor routes use this exact expression, so their minima are
// bit-identical.
inline double squared_distance(const Eigen::Vector3d &a,
                               const Eigen::Vector3d &b) {
  const double dx = a.x() - b.x(), dy = a.y() - b.y(), dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

std::vector<Eigen::Vector3d> transform_all(const ModelPoints &model,
                                           const Pose &pose) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(model.points.size());
  for (const auto &x : model.points) out.push_back(pose.apply(x));
  return out;
}

class PointGrid {
 public:
  explicit PointGrid(const std::vector<Eigen::Vector3d> &points)
      : points_(points) {
    lo_ = hi_ = points.front();
    for (const auto &p : points) {
      lo_ = lo_.cwiseMin(p);
      hi_ = hi_.cwiseMax(p);
    }
    const Eigen::Vector3d extent = (hi_ - lo_).cwiseMax(1e-12);
    const double volume = extent.x() * extent.y() * extent.z();
    cell_ = std::cbrt(volume / static_cast<double>(points.size())) * 1.5;
    // Flat or degenerate sets: fall back to the largest extent.
    cell_ = std::max(cell_, extent.maxCoeff() / 256.0);
    for (int a = 0; a < 3; ++a) {
      dims_[a] = std::clamp(static_cast<int>(extent[a] / cell_) + 1, 1, 512);
    }
    start_.assign(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2] + 1, 0);
    std::vector<std::size_t> cell_of(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      cell_of[i] = flat(cell_coords(points[i]));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    order_.resize(points.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < points.size(); ++i) order_[fill[cell_of[i]]++] = i;
  }

  double nearest_squared(const Eigen::Vector3d &q) const {
    const std::array<int, 3> c = cell_coords(q);
    const double eps = 1e-9 * ((hi_ - lo_).norm() + q.norm() + 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0;; ++r) {
      std::array<int, 3> from{}, to{};
      for (int a = 0; a < 3; ++a) {
        from[a] = std::max(c[a] - r, 0);
        to[a] = std::min(c[a] + r, dims_[a] - 1);
      }
      for (int z = from[2]; z <= to[2]; ++z) {
        for (int y = from[1]; y <= to[1]; ++y) {
          for (int x = from[0]; x <= to[0]; ++x) {
            const int ring = std::max({std::abs(x - c[0]), std::abs(y - c[1]),
                                       std::abs(z - c[2])});
            if (ring != r) continue;
            const std::size_t cell = flat({x, y, z});
            for (std::size_t k = start_[cell]; k < start_[cell + 1]; ++k) {
              best = std::min(best, squared_distance(q, points_[order_[k]]));
            }
          }
        }
      }
      // Smallest distance from q to any cell outside the visited box.
      double bound = std::numeric_limits<double>::infinity();
      for (int a = 0; a < 3; ++a) {
        if (from[a] > 0) bound = std::min(bound, q[a] - (lo_[a] + from[a] * cell_));
        if (to[a] < dims_[a] - 1) {
          bound = std::min(bound, (lo_[a] + (to[a] + 1) * cell_) - q[a]);
        }
      }
      if (std::isinf(bound)) return best;
      if (std::isfinite(best) && std::sqrt(best) < bound - eps) return best;
    }
  }

 private:
  std::array<int, 3> cell_coords(const Eigen::Vector3d &p) const {
    std::array<int, 3> c{};
    for (int a = 0; a < 3; ++a) {
      const double f = std::floor((p[a] - lo_[a]) / cell_);
      c[a] = static_cast<int>(std::clamp(f, 0.0, static_cast<double>(dims_[a] - 1)));
    }
    return c;
  }
  std::size_t flat(const std::array<int, 3> &c) const {
    return (static_cast<std::size_t>(c[2]) * dims_[1] + c[1]) * dims_[0] + c[0];
  }

  const std::vector<Eigen::Vector3d> &points_;
  Eigen::Vector3d lo_, hi_;
  double cell_ = 1.0;
  std::array<int, 3> dims_{1, 1, 1};
  std::vector<std::size_t> start_;
  std::vector<std::size_t> order_;
};

}  // namespace

void ModelPoints::validate() const {
  if (points.empty()) throw EmptyInputError("model has no points");
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw ParameterError("model diameter must be positive and finite");
  }
}

double add(const ModelPoints &model, const Pose &est, const Pose &gt) {
  if (model.points.empty()) throw EmptyInputError("ADD on an empty model");
  double sum = 0.0;
  for (const auto &x : model.points) {
    sum += std::sqrt(squared_distance(est.apply(x), gt.apply(x)));
  }
  return sum / static_cast<double>(model.points.size());
}

double add_s(const ModelPoints &model, const Pose &est, const Pose &gt,
             NearestNeighborSearch search) {
  if (model.points.empty()) throw EmptyInputError("ADD-S on an empty model");
  const auto est_pts = transform_all(model, est);
  const auto gt_pts = transform_all(model, gt);

  double sum = 0.0;
  if (search == NearestNeighborSearch::kGrid) {
    const PointGrid grid(est_pts);
    for (const auto &q : gt_pts) sum += std::sqrt(grid.nearest_squared(q));
  } else {
    for (const auto &q : gt_pts) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &p : est_pts) best = std::min(best, squared_distance(q, p));
      sum += std::sqrt(best);
    }
  }
  return sum / static_cast<double>(model.points.size());
}

PoseScore score_pose(const ModelPoints &model, const Pose &est, const Pose &gt,
                     double threshold_ratio, NearestNeighborSearch search) {
  if (!(threshold_ratio > 0.0)) {
    throw ParameterError("threshold ratio must be positive");
  }
  model.validate();
  PoseScore score;
  score.add_value =
      model.symmetric ? add_s(model, est, gt, search) : add(model, est, gt);
  score.accurate = score.add_value < threshold_ratio * model.diameter;
  return score;
}

double add_recall(std::span<const PoseScore> scores) {
  if (scores.empty()) throw EmptyInputError("recall over no scores");
  const auto hits = std::count_if(scores.begin(), scores.end(),
                                  [](const PoseScore &s) { return s.accurate; });
  return static_cast<double>(hits) / static_cast<double>(scores.size());
}

double model_diameter(std::span<const Eigen::Vector3d> points) {
  if (points.size() < 2) {
    throw EmptyInputError("diameter needs at least two points");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, squared_distance(points[i], points[j]));
    }
  }
  return std::sqrt(best);
}

}  // namespace edgepose
