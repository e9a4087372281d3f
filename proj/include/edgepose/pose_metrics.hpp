#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "edgepose/pose.hpp"

namespace edgepose {

// 3D model point set in millimeters with its diameter.
struct ModelPoints {
  std::vector<Eigen::Vector3d> points;
  double diameter = 0.0;
  // Score with ADD-S instead of ADD. Supplied by the caller, never inferred.
  bool symmetric = false;

  // Throws EmptyInputError for an empty set and ParameterError for a
  // non-positive or non-finite diameter.
  void validate() const;
};

struct PoseScore {
  double add_value = 0.0;  // mm; ADD or ADD-S depending on the model flag
  bool accurate = false;
};

enum class NearestNeighborSearch {
  kBruteForce,
  // Uniform grid over the transformed model. Returns exactly the brute-force
  // minimum; intended for large meshes.
  kGrid,
};

// Mean distance between corresponding model points under the two poses.
double add(const ModelPoints &model, const Pose &est, const Pose &gt);

// Mean over ground-truth-transformed points of the distance to the closest
// estimate-transformed point.
double add_s(const ModelPoints &model, const Pose &est, const Pose &gt,
             NearestNeighborSearch search = NearestNeighborSearch::kBruteForce);

// accurate iff metric < threshold_ratio * diameter (strict).
PoseScore score_pose(const ModelPoints &model, const Pose &est,
                     const Pose &gt, double threshold_ratio = 0.1,
                     NearestNeighborSearch search =
                         NearestNeighborSearch::kBruteForce);

// Fraction of accurate scores. Throws EmptyInputError on an empty list.
double add_recall(std::span<const PoseScore> scores);

// Maximum pairwise distance. Requires at least two points.
double model_diameter(std::span<const Eigen::Vector3d> points);

}  // namespace edgepose
