#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace vilo {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rotations are stored as plain 3x3 orthonormal matrices (det = +1).
using Rotation = Eigen::Matrix3d;

/// Below this angle exp/log/right_jacobian switch to truncated series.
inline constexpr double kSmallAngle = 1e-8;

/// Hat operator: skew(v) * w == v.cross(w).
inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

inline Vec3 unskew(const Mat3& m) {
  return Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) * 0.5;
}

/// Exact matrix exponential of skew(phi) (Rodrigues formula).
Rotation exp_so3(const Vec3& phi);

/// Which computation path log_so3 took, for diagnostics.
enum class LogSo3Branch { taylor, standard, near_pi };

/// Inverse of exp_so3. Angles up to and including pi are handled; at
/// theta ~ pi the symmetric-matrix branch extracts the axis from R + R^T.
Vec3 log_so3(const Rotation& r, LogSo3Branch* branch = nullptr);

/// Right Jacobian of SO(3): exp(phi + d) ~ exp(phi) * exp(Jr(phi) * d).
Mat3 right_jacobian_so3(const Vec3& phi);

Mat3 inverse_right_jacobian_so3(const Vec3& phi);

/// Orthonormality / determinant check used by type invariants.
bool is_rotation(const Rotation& r, double tol = 1e-9);

/// Unit quaternion (w, x, y, z) with w >= 0, used by trajectory records.
Eigen::Vector4d rotation_to_quaternion(const Rotation& r);
Rotation quaternion_to_rotation(const Eigen::Vector4d& wxyz);

}  // namespace vilo
