#include "edgepose/pose.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

#include "edgepose/error.hpp"

namespace edgepose {

bool is_rotation(const Eigen::Matrix3d &R, double tolerance) {
  if (!R.allFinite()) return false;
  const Eigen::Matrix3d residual = R.transpose() * R - Eigen::Matrix3d::Identity();
  if (residual.cwiseAbs().maxCoeff() > tolerance) return false;
  return std::abs(R.determinant() - 1.0) <= tolerance;
}

Pose::Pose(const Eigen::Matrix3d &R, const Eigen::Vector3d &t,
           double tolerance)
    : R_(R), t_(t) {
  if (!is_rotation(R, tolerance)) {
    throw ParameterError("rotation matrix is not orthonormal with det +1");
  }
  if (!t.allFinite()) throw ParameterError("translation is not finite");
}

Pose Pose::operator*(const Pose &other) const {
  Pose out;
  out.R_ = R_ * other.R_;
  out.t_ = R_ * other.t_ + t_;
  return out;
}

Pose Pose::inverse() const {
  Pose out;
  out.R_ = R_.transpose();
  out.t_ = -(R_.transpose() * t_);
  return out;
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d &omega) {
  const double theta = omega.norm();
  Eigen::Matrix3d K;
  K << 0, -omega.z(), omega.y(),
       omega.z(), 0, -omega.x(),
       -omega.y(), omega.x(), 0;
  double a, b;
  if (theta < 1e-8) {
    // Taylor terms of sin(x)/x and (1 - cos(x))/x^2.
    a = 1.0 - theta * theta / 6.0;
    b = 0.5 - theta * theta / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Eigen::Matrix3d::Identity() + a * K + b * K * K;
}

Eigen::Matrix3d closest_rotation(const Eigen::Matrix3d &M) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(M, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  Eigen::Matrix3d U = svd.matrixU();
  const Eigen::Matrix3d V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0) U.col(2) *= -1.0;
  return U * V.transpose();
}

double rotation_angle_between(const Eigen::Matrix3d &A,
                              const Eigen::Matrix3d &B) {
  const Eigen::Matrix3d D = A.transpose() * B;
  const Eigen::Vector3d axis(D(2, 1) - D(1, 2), D(0, 2) - D(2, 0),
                             D(1, 0) - D(0, 1));
  return std::atan2(0.5 * axis.norm(), 0.5 * (D.trace() - 1.0));
}

}  // namespace edgepose
