#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "edgepose/pose.hpp"

namespace edgepose {

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  // Throws ParameterError unless fx, fy > 0 and all values are finite.
  void validate() const;
  bool operator==(const CameraIntrinsics &) const = default;
};

struct Correspondence {
  Eigen::Vector3d point3d;  // model frame, mm
  Eigen::Vector2d point2d;  // pixels
};

struct PnPResult {
  Pose pose;
  double reprojection_rmse = 0.0;  // pixels
  int iterations = 0;
  bool converged = false;
  // Largest over eleventh singular value of the normalized 2n x 12 DLT
  // system; the twelfth spans the solution.
  double dlt_condition = 0.0;
  // Objective (sum of squared residuals) at the initial pose and after each
  // accepted step.
  std::vector<double> cost_history;
};

// Pinhole projection of a model point. Throws BehindCameraError when the
// camera-frame depth is <= 1e-9.
Eigen::Vector2d project(const Pose &pose, const CameraIntrinsics &K,
                        const Eigen::Vector3d &x);

double reprojection_rmse(const Pose &pose, const CameraIntrinsics &K,
                         std::span<const Correspondence> correspondences);

// Recovers the model-to-camera pose from >= 6 correspondences: normalized DLT
// initialization, then Levenberg-Marquardt over a right-multiplied axis-angle
// increment plus translation.
PnPResult solve_pnp(std::span<const Correspondence> correspondences,
                    const CameraIntrinsics &K);

namespace pnp_detail {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

// Stacked residuals (projection - observation), two rows per correspondence.
Eigen::VectorXd residuals(const Pose &pose, const CameraIntrinsics &K,
                          std::span<const Correspondence> correspondences);

// d residuals / d (omega, dt) at zero increment, 2n x 6.
Eigen::MatrixXd jacobian(const Pose &pose, const CameraIntrinsics &K,
                         std::span<const Correspondence> correspondences);

// pose with R <- R exp(omega), t <- t + dt; delta = (omega, dt).
Pose apply_increment(const Pose &pose, const Vector6d &delta);

struct DltEstimate {
  Pose pose;
  double condition = 0.0;
};

DltEstimate dlt_initialize(std::span<const Correspondence> correspondences,
                           const CameraIntrinsics &K);

}  // namespace pnp_detail

}  // namespace edgepose
