#include "edgepose/pnp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <string>

#include "edgepose/error.hpp"

namespace edgepose {

namespace {

constexpr int kMinCorrespondences = 6;
constexpr int kMaxIterations = 100;
constexpr double kGradientTolerance = 1e-10;
constexpr double kStepTolerance = 1e-12;
constexpr double kInitialDamping = 1e-3;
constexpr double kMaxCondition = 1e12;
constexpr double kMinDepth = 1e-9;

Eigen::Matrix3d skew(const Eigen::Vector3d &v) {
  Eigen::Matrix3d S;
  S << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return S;
}

// Sum of squared residuals, or +inf when any point falls behind the camera.
double objective(const Pose &pose, const CameraIntrinsics &K,
                 std::span<const Correspondence> corrs) {
  double sum = 0.0;
  for (const auto &c : corrs) {
    const Eigen::Vector3d p = pose.apply(c.point3d);
    if (p.z() <= kMinDepth) return std::numeric_limits<double>::infinity();
    const double du = K.fx * p.x() / p.z() + K.cx - c.point2d.x();
    const double dv = K.fy * p.y() / p.z() + K.cy - c.point2d.y();
    sum += du * du + dv * dv;
  }
  return sum;
}

}  // namespace

void CameraIntrinsics::validate() const {
  if (!std::isfinite(fx) || !std::isfinite(fy) || !std::isfinite(cx) ||
      !std::isfinite(cy)) {
    throw ParameterError("camera intrinsics must be finite");
  }
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw ParameterError("focal lengths must be positive");
  }
}

Eigen::Vector2d project(const Pose &pose, const CameraIntrinsics &K,
                        const Eigen::Vector3d &x) {
  const Eigen::Vector3d p = pose.apply(x);
  if (!(p.z() > kMinDepth)) {
    throw BehindCameraError("point projects at or behind the camera (z = " +
                            std::to_string(p.z()) + ")");
  }
  return {K.fx * (p.x() / p.z()) + K.cx, K.fy * (p.y() / p.z()) + K.cy};
}

double reprojection_rmse(const Pose &pose, const CameraIntrinsics &K,
                         std::span<const Correspondence> correspondences) {
  if (correspondences.empty()) {
    throw EmptyInputError("reprojection error over no correspondences");
  }
  double sum = 0.0;
  for (const auto &c : correspondences) {
    sum += (project(pose, K, c.point3d) - c.point2d).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(correspondences.size()));
}

namespace pnp_detail {

Eigen::VectorXd residuals(const Pose &pose, const CameraIntrinsics &K,
                          std::span<const Correspondence> correspondences) {
  Eigen::VectorXd r(2 * correspondences.size());
  for (std::size_t i = 0; i < correspondences.size(); ++i) {
    r.segment<2>(2 * i) = project(pose, K, correspondences[i].point3d) -
                          correspondences[i].point2d;
  }
  return r;
}

Eigen::MatrixXd jacobian(const Pose &pose, const CameraIntrinsics &K,
                         std::span<const Correspondence> correspondences) {
  Eigen::MatrixXd J(2 * correspondences.size(), 6);
  const Eigen::Matrix3d &R = pose.rotation();
  for (std::size_t i = 0; i < correspondences.size(); ++i) {
    const Eigen::Vector3d &x = correspondences[i].point3d;
    const Eigen::Vector3d p = pose.apply(x);
    if (!(p.z() > kMinDepth)) {
      throw BehindCameraError("point projects at or behind the camera");
    }
    const double iz = 1.0 / p.z();
    Eigen::Matrix<double, 2, 3> d_proj;
    d_proj << K.fx * iz, 0.0, -K.fx * p.x() * iz * iz,
              0.0, K.fy * iz, -K.fy * p.y() * iz * iz;
    // R exp(w) x ~ R x + R (w x x) = R x - R [x]_x w
    J.block<2, 3>(2 * i, 0) = d_proj * (-R * skew(x));
    J.block<2, 3>(2 * i, 3) = d_proj;
  }
  return J;
}

Pose apply_increment(const Pose &pose, const Vector6d &delta) {
  return Pose(pose.rotation() * exp_so3(delta.head<3>()),
              pose.translation() + delta.tail<3>());
}

DltEstimate dlt_initialize(std::span<const Correspondence> correspondences,
                           const CameraIntrinsics &K) {
  const auto n = static_cast<Eigen::Index>(correspondences.size());

  // Similarity normalization of both point sets.
  Eigen::Vector3d centroid3 = Eigen::Vector3d::Zero();
  Eigen::Vector2d centroid2 = Eigen::Vector2d::Zero();
  std::vector<Eigen::Vector2d> rays(correspondences.size());
  for (std::size_t i = 0; i < correspondences.size(); ++i) {
    const auto &c = correspondences[i];
    rays[i] = {(c.point2d.x() - K.cx) / K.fx, (c.point2d.y() - K.cy) / K.fy};
    centroid3 += c.point3d;
    centroid2 += rays[i];
  }
  centroid3 /= static_cast<double>(n);
  centroid2 /= static_cast<double>(n);
  double spread3 = 0.0, spread2 = 0.0;
  for (std::size_t i = 0; i < correspondences.size(); ++i) {
    spread3 += (correspondences[i].point3d - centroid3).norm();
    spread2 += (rays[i] - centroid2).norm();
  }
  spread3 /= static_cast<double>(n);
  spread2 /= static_cast<double>(n);
  if (!(spread3 > 0.0)) {
    throw DegenerateConfigurationError("all 3D points coincide");
  }
  const double s3 = std::sqrt(3.0) / spread3;
  const double s2 = spread2 > 0.0 ? std::sqrt(2.0) / spread2 : 1.0;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 12);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto &c = correspondences[static_cast<std::size_t>(i)];
    Eigen::Vector4d X;
    X << s3 * (c.point3d - centroid3), 1.0;
    const Eigen::Vector2d x = s2 * (rays[static_cast<std::size_t>(i)] - centroid2);
    A.block<1, 4>(2 * i, 0) = X.transpose();
    A.block<1, 4>(2 * i, 8) = -x.x() * X.transpose();
    A.block<1, 4>(2 * i + 1, 4) = X.transpose();
    A.block<1, 4>(2 * i + 1, 8) = -x.y() * X.transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const Eigen::VectorXd &sigma = svd.singularValues();
  DltEstimate out;
  out.condition = sigma(10) > 0.0 ? sigma(0) / sigma(10)
                                  : std::numeric_limits<double>::infinity();
  if (!(out.condition <= kMaxCondition)) {
    throw DegenerateConfigurationError(
        "rank-deficient DLT system (condition " + std::to_string(out.condition) +
        "); points may be coplanar or collinear");
  }
  const Eigen::VectorXd p = svd.matrixV().col(11);
  Eigen::Matrix<double, 3, 4> P_norm;
  P_norm << p.segment<4>(0).transpose(), p.segment<4>(4).transpose(),
            p.segment<4>(8).transpose();

  Eigen::Matrix4d T3 = Eigen::Matrix4d::Identity();
  T3.topLeftCorner<3, 3>() *= s3;
  T3.block<3, 1>(0, 3) = -s3 * centroid3;
  Eigen::Matrix3d T2_inv = Eigen::Matrix3d::Identity();
  T2_inv.topLeftCorner<2, 2>() /= s2;
  T2_inv.block<2, 1>(0, 2) = centroid2;
  Eigen::Matrix<double, 3, 4> P = T2_inv * P_norm * T3;

  double depth_sum = 0.0;
  for (const auto &c : correspondences) {
    depth_sum += P.row(2).head<3>().dot(c.point3d) + P(2, 3);
  }
  if (depth_sum < 0.0) P = -P;

  const Eigen::Matrix3d M = P.leftCols<3>();
  Eigen::JacobiSVD<Eigen::Matrix3d> msvd(M);
  const double scale = msvd.singularValues().sum() / 3.0;
  if (!(scale > 0.0)) {
    throw DegenerateConfigurationError("DLT rotation block vanished");
  }
  const Eigen::Matrix3d R = closest_rotation(M);
  const Eigen::Vector3d t = P.col(3) / scale;
  out.pose = Pose(R, t);

  for (const auto &c : correspondences) {
    if (!(out.pose.apply(c.point3d).z() > kMinDepth)) {
      throw InitializationError(
          "initial pose places correspondences behind the camera");
    }
  }
  return out;
}

}  // namespace pnp_detail

PnPResult solve_pnp(std::span<const Correspondence> correspondences,
                    const CameraIntrinsics &K) {
  using namespace pnp_detail;
  K.validate();
  if (correspondences.size() < static_cast<std::size_t>(kMinCorrespondences)) {
    throw InsufficientDataError("PnP needs at least 6 correspondences, got " +
                                std::to_string(correspondences.size()));
  }
  for (const auto &c : correspondences) {
    if (!c.point3d.allFinite() || !c.point2d.allFinite()) {
      throw ParameterError("correspondence has non-finite coordinates");
    }
  }

  const DltEstimate init = dlt_initialize(correspondences, K);
  PnPResult result;
  result.dlt_condition = init.condition;

  Pose pose = init.pose;
  double cost = objective(pose, K, correspondences);
  double lambda = kInitialDamping;
  result.cost_history.push_back(cost);
  while (result.iterations < kMaxIterations) {
    const Eigen::MatrixXd J = jacobian(pose, K, correspondences);
    const Eigen::VectorXd r = residuals(pose, K, correspondences);
    const Vector6d g = J.transpose() * r;
    if (g.norm() < kGradientTolerance) {
      result.converged = true;
      break;
    }
    const Matrix6d H = J.transpose() * J;
    Matrix6d damped = H;
    damped.diagonal() += lambda * H.diagonal();
    const Vector6d step = damped.ldlt().solve(-g);
    ++result.iterations;
    if (!step.allFinite()) {
      lambda *= 10.0;
      continue;
    }
    if (step.norm() < kStepTolerance) {
      result.converged = true;
      break;
    }
    const Pose candidate = apply_increment(pose, step);
    const double candidate_cost = objective(candidate, K, correspondences);
    if (candidate_cost < cost) {
      pose = candidate;
      cost = candidate_cost;
      result.cost_history.push_back(cost);
      lambda /= 10.0;
    } else {
      lambda *= 10.0;
    }
  }

  result.pose = pose;
  result.reprojection_rmse = reprojection_rmse(pose, K, correspondences);
  return result;
}

}  // namespace edgepose
