#include "vilo/geometry.hpp"

#include <cmath>

namespace vilo {

Rotation exp_so3(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 w = skew(phi);
  if (theta < kSmallAngle) {
    return Mat3::Identity() + w + 0.5 * w * w;
  }
  return Mat3::Identity() + std::sin(theta) / theta * w +
         (1.0 - std::cos(theta)) / theta2 * w * w;
}

Vec3 log_so3(const Rotation& r, LogSo3Branch* branch) {
  const double cos_theta =
      std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  const double theta = std::acos(cos_theta);

  if (theta < kSmallAngle) {
    if (branch) *branch = LogSo3Branch::taylor;
    return unskew(r);
  }

  if (theta > M_PI - 1e-4) {
    // sin(theta) ~ 0: recover the axis from the symmetric part,
    // R + R^T = 2I + 2(1 - cos) (a a^T - I).
    if (branch) *branch = LogSo3Branch::near_pi;
    const Mat3 aat =
        Mat3::Identity() + (r + r.transpose() - 2.0 * Mat3::Identity()) /
                               (2.0 * (1.0 - cos_theta));
    int c = 0;
    aat.diagonal().maxCoeff(&c);
    Vec3 axis = aat.col(c) / std::sqrt(aat(c, c));
    // Orient along the antisymmetric part while it is still nonzero;
    // at exactly pi both signs are valid log values.
    const Vec3 anti = unskew(r);
    if (anti.dot(axis) < 0.0) axis = -axis;
    return theta * axis;
  }

  if (branch) *branch = LogSo3Branch::standard;
  return theta / std::sin(theta) * unskew(r);
}

Mat3 right_jacobian_so3(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 w = skew(phi);
  if (theta < kSmallAngle) {
    return Mat3::Identity() - 0.5 * w + (1.0 / 6.0) * w * w;
  }
  return Mat3::Identity() - (1.0 - std::cos(theta)) / theta2 * w +
         (theta - std::sin(theta)) / (theta2 * theta) * w * w;
}

Mat3 inverse_right_jacobian_so3(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 w = skew(phi);
  if (theta < kSmallAngle) {
    return Mat3::Identity() + 0.5 * w + (1.0 / 12.0) * w * w;
  }
  return Mat3::Identity() + 0.5 * w +
         (1.0 / theta2 - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta))) *
             w * w;
}

bool is_rotation(const Rotation& r, double tol) {
  const double ortho = (r * r.transpose() - Mat3::Identity()).norm();
  return ortho < tol && std::abs(r.determinant() - 1.0) < tol;
}

Eigen::Vector4d rotation_to_quaternion(const Rotation& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
}

Rotation quaternion_to_rotation(const Eigen::Vector4d& wxyz) {
  Eigen::Quaterniond q(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace vilo
