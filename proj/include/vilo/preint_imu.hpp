#pragma once

#include "vilo/state.hpp"

namespace vilo {

struct ImuSample {
  Vec3 gyro = Vec3::Zero();   // rad/s, body frame
  Vec3 accel = Vec3::Zero();  // m/s^2, body frame, specific force (no gravity)
  double stamp = 0.0;         // s, start of the interval the sample covers
};

struct ImuNoiseSpec {
  double gyro_noise_density = 1e-3;    // rad/s/sqrt(Hz)
  double accel_noise_density = 1e-2;   // m/s^2/sqrt(Hz)
  double gyro_bias_walk = 1e-5;        // rad/s/sqrt(s)
  double accel_bias_walk = 1e-4;       // m/s^2/sqrt(s)
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
};

/// Preintegrated IMU measurement between two keyframes.
///
/// Discrete scheme (Euler forward, all right-hand sides at step k):
///   dp_{k+1} = dp_k + dv_k * dt
///   dv_{k+1} = dv_k + dR_k * (a_k - b_a) * dt
///   dR_{k+1} = dR_k * Exp((w_k - b_g) * dt)
/// so dv is the plain sum of rotated bias-free accelerations and dp the
/// plain sum of dv values (no half-step term). The simulator and the
/// residual below are exact against these sums.
///
/// Noise convention: dR_true = dR_meas * Exp(-dphi). Covariance is over
/// [dphi, dv, dp] in that order.
struct PreintImuDelta {
  Rotation rot = Rotation::Identity();
  Vec3 vel = Vec3::Zero();
  Vec3 pos = Vec3::Zero();
  double dt = 0.0;

  BiasBlock bias_ref;  // gyro/accel parts used at integration time
  ImuNoiseSpec noise;

  // First-order bias sensitivities of the measurement.
  Mat3 d_rot_d_bg = Mat3::Zero();
  Mat3 d_vel_d_bg = Mat3::Zero();
  Mat3 d_vel_d_ba = Mat3::Zero();
  Mat3 d_pos_d_bg = Mat3::Zero();
  Mat3 d_pos_d_ba = Mat3::Zero();

  Eigen::Matrix<double, 9, 9> cov = Eigen::Matrix<double, 9, 9>::Zero();

  double last_stamp = 0.0;
  bool has_samples = false;

  /// Measurement corrected to a bias estimate near bias_ref (first order).
  Rotation rot_corrected(const Vec3& bg) const;
  Vec3 vel_corrected(const Vec3& bg, const Vec3& ba) const;
  Vec3 pos_corrected(const Vec3& bg, const Vec3& ba) const;
};

PreintImuDelta make_imu_delta(const BiasBlock& bias_ref, const ImuNoiseSpec& noise);

/// One Euler-forward step. Throws std::invalid_argument on dt <= 0 or a
/// non-monotone sample stamp.
PreintImuDelta imu_integrate(const PreintImuDelta& delta, const ImuSample& s,
                             double dt);

/// Residual [r_phi, r_v, r_p] of the preintegrated IMU factor and its
/// Jacobians with respect to the two state tangents.
struct ImuResidual {
  Eigen::Matrix<double, 9, 1> value = Eigen::Matrix<double, 9, 1>::Zero();
  Eigen::Matrix<double, 9, kStateDim> d_xi =
      Eigen::Matrix<double, 9, kStateDim>::Zero();
  Eigen::Matrix<double, 9, kStateDim> d_xj =
      Eigen::Matrix<double, 9, kStateDim>::Zero();
};

ImuResidual imu_residual(const State& xi, const State& xj,
                         const PreintImuDelta& delta);

/// Forward state propagation consistent with the residual: composing a
/// keyframe state with a delta gives zero residual by construction.
State imu_propagate(const State& xi, const PreintImuDelta& delta);

}  // namespace vilo
