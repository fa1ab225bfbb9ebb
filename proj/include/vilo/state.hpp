#pragma once

#include <cstdint>

#include "vilo/geometry.hpp"

namespace vilo {

/// IMU biases (gyro, accelerometer) plus the leg-odometry twist biases
/// (angular velocity, linear velocity). Twist biases are expressed in the
/// base frame, the pair [ang_vel, lin_vel] is what the velocity factor
/// estimates.
struct BiasBlock {
  Vec3 gyro = Vec3::Zero();      // rad/s
  Vec3 accel = Vec3::Zero();     // m/s^2
  Vec3 ang_vel = Vec3::Zero();   // rad/s
  Vec3 lin_vel = Vec3::Zero();   // m/s

  Eigen::Matrix<double, 12, 1> vector() const {
    Eigen::Matrix<double, 12, 1> b;
    b << gyro, accel, ang_vel, lin_vel;
    return b;
  }

  Eigen::Matrix<double, 6, 1> twist_bias() const {
    Eigen::Matrix<double, 6, 1> b;
    b << ang_vel, lin_vel;
    return b;
  }

  static BiasBlock from_vector(const Eigen::Matrix<double, 12, 1>& b) {
    BiasBlock out;
    out.gyro = b.segment<3>(0);
    out.accel = b.segment<3>(3);
    out.ang_vel = b.segment<3>(6);
    out.lin_vel = b.segment<3>(9);
    return out;
  }
};

/// One graph node: base pose (world frame), world-frame linear velocity,
/// and the 12-dim bias block.
struct State {
  Rotation orientation = Rotation::Identity();  // world <- base
  Vec3 position = Vec3::Zero();                 // m, world
  Vec3 velocity = Vec3::Zero();                 // m/s, world
  BiasBlock bias;
  double stamp = 0.0;  // s
};

struct Landmark {
  Vec3 position = Vec3::Zero();  // m, world
  std::int64_t id = -1;
};

/// Tangent ordering, fixed repo-wide. Every Jacobian column block in the
/// factor library follows it:
///   [0:3)  delta phi   (orientation, right-multiplicative R * exp(d))
///   [3:6)  delta p
///   [6:9)  delta v
///   [9:21) delta bias  [b_gyro, b_accel, b_ang_vel, b_lin_vel]
inline constexpr int kStateDim = 21;
using StateTangent = Eigen::Matrix<double, kStateDim, 1>;

/// Manifold update: orientation via R * exp(delta_phi), everything else
/// added. The stamp is carried over unchanged.
inline State retract(const State& x, const StateTangent& delta) {
  State out = x;
  out.orientation = x.orientation * exp_so3(delta.segment<3>(0));
  out.position += delta.segment<3>(3);
  out.velocity += delta.segment<3>(6);
  out.bias = BiasBlock::from_vector(x.bias.vector() + delta.segment<12>(9));
  return out;
}

/// Chart inverse: local(x, retract(x, d)) == d.
inline StateTangent local(const State& x, const State& y) {
  StateTangent d;
  d.segment<3>(0) = log_so3(x.orientation.transpose() * y.orientation);
  d.segment<3>(3) = y.position - x.position;
  d.segment<3>(6) = y.velocity - x.velocity;
  d.segment<12>(9) = y.bias.vector() - x.bias.vector();
  return d;
}

}  // namespace vilo
