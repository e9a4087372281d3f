#pragma once

#include <Eigen/Core>

namespace edgepose {

// Orthonormality tolerance applied to every rotation entering the toolkit.
inline constexpr double kRotationTolerance = 1e-9;

// True iff R^T R = I and det(R) = +1, each entry within `tolerance`.
bool is_rotation(const Eigen::Matrix3d &R,
                 double tolerance = kRotationTolerance);

// Rigid transform model -> camera: x_cam = R x + t. Translation in mm.
class Pose {
 public:
  Pose() : R_(Eigen::Matrix3d::Identity()), t_(Eigen::Vector3d::Zero()) {}
  // Throws ParameterError when R is not a rotation within `tolerance` or any
  // entry is non-finite. Inputs are never re-orthonormalized.
  Pose(const Eigen::Matrix3d &R, const Eigen::Vector3d &t,
       double tolerance = kRotationTolerance);

  const Eigen::Matrix3d &rotation() const { return R_; }
  const Eigen::Vector3d &translation() const { return t_; }

  Eigen::Vector3d apply(const Eigen::Vector3d &x) const { return R_ * x + t_; }

  // (this * other)(x) = this(other(x)).
  Pose operator*(const Pose &other) const;
  Pose inverse() const;

  bool operator==(const Pose &other) const {
    return R_ == other.R_ && t_ == other.t_;
  }

 private:
  Eigen::Matrix3d R_;
  Eigen::Vector3d t_;
};

// Rodrigues exponential map of an axis-angle vector.
Eigen::Matrix3d exp_so3(const Eigen::Vector3d &omega);

// Closest rotation in Frobenius norm (det fixed to +1).
Eigen::Matrix3d closest_rotation(const Eigen::Matrix3d &M);

// Geodesic angle between two rotations in radians.
double rotation_angle_between(const Eigen::Matrix3d &A,
                              const Eigen::Matrix3d &B);

}  // namespace edgepose
