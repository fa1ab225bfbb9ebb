#pragma once

#include "vilo/state.hpp"

namespace vilo {

/// Fused leg-odometry twist, base frame. The fusion across legs in contact
/// is done upstream; this module consumes the unified stream directly.
struct TwistMeasurement {
  Vec3 ang_vel = Vec3::Zero();  // rad/s
  Vec3 lin_vel = Vec3::Zero();  // m/s
  double stamp = 0.0;           // s, start of the interval the sample covers
};

struct TwistNoiseSpec {
  double ang_noise = 0.01;      // rad/s, per sample
  double lin_noise = 0.02;      // m/s, per sample
  double ang_bias_walk = 1e-4;  // rad/s/sqrt(s)
  double lin_bias_walk = 1e-3;  // m/s/sqrt(s)
};

/// Preintegrated velocity measurement between two keyframes, with
/// sensitivities to the twist biases (b_w, b_v) frozen at bias_ref.
///
/// Discrete scheme (zero-order hold, right-hand sides at step k):
///   dp_{k+1} = dp_k + dR_k * (v_k - b_v) * dt
///   dR_{k+1} = dR_k * Exp((w_k - b_w) * dt)
///
/// Bias sensitivities follow by differentiating those sums. With
/// E_k = Exp((w_k - b_w) dt) and Jr_k the right Jacobian at (w_k - b_w) dt:
///   d_rot_d_bw <- E_k^T * d_rot_d_bw - Jr_k * dt
/// (same recursion as the IMU gyro-bias sensitivity), and since a bias
/// change rotates dR_k by Exp(d_rot_d_bw * db):
///   d_pos_d_bw <- d_pos_d_bw - dR_k * skew(v_k - b_v) * d_rot_d_bw * dt
///   d_pos_d_bv <- d_pos_d_bv - dR_k * dt
///
/// Noise convention matches the IMU module: dR_true = dR_meas * Exp(-dphi),
/// covariance over [dphi, dp]. The per-step propagation uses the recursive
/// per-step orientation noise (the standard form); the twist white-noise
/// sigmas are per-sample quantities, not spectral densities.
struct PreintVelDelta {
  Rotation rot = Rotation::Identity();
  Vec3 pos = Vec3::Zero();
  double dt = 0.0;

  Vec3 ang_bias_ref = Vec3::Zero();
  Vec3 lin_bias_ref = Vec3::Zero();
  TwistNoiseSpec noise;

  Mat3 d_rot_d_bw = Mat3::Zero();
  Mat3 d_pos_d_bw = Mat3::Zero();
  Mat3 d_pos_d_bv = Mat3::Zero();

  Eigen::Matrix<double, 6, 6> cov = Eigen::Matrix<double, 6, 6>::Zero();

  double last_stamp = 0.0;
  bool has_samples = false;
};

PreintVelDelta make_vel_delta(const Vec3& ang_bias_ref, const Vec3& lin_bias_ref,
                              const TwistNoiseSpec& noise);

/// One zero-order-hold step. Throws std::invalid_argument on dt <= 0 or a
/// non-monotone sample stamp.
PreintVelDelta vel_integrate(const PreintVelDelta& delta,
                             const TwistMeasurement& m, double dt);

/// One step of the covariance recursion cov' = A cov A^T + B S B^T, exposed
/// separately so it can be checked in isolation.
Eigen::Matrix<double, 6, 6> vel_propagate_cov(
    const Eigen::Matrix<double, 6, 6>& cov, const Vec3& ang_vel,
    const Vec3& lin_vel, const Vec3& ang_bias, const Vec3& lin_bias,
    const Rotation& rot_ik, double dt, const TwistNoiseSpec& noise);

/// First-order re-correction of the measurement to a new bias estimate,
/// avoiding a re-sum of the raw measurements.
struct CorrectedVelDelta {
  Rotation rot;
  Vec3 pos;
};
CorrectedVelDelta vel_apply_bias_update(const PreintVelDelta& delta,
                                        const Vec3& ang_bias,
                                        const Vec3& lin_bias);

/// Residual [r_phi, r_p] and Jacobians. The rotation rows duplicate the IMU
/// rotation constraint between the same pair; factor construction can drop
/// them for ablation.
struct VelResidual {
  Eigen::Matrix<double, 6, 1> value = Eigen::Matrix<double, 6, 1>::Zero();
  Eigen::Matrix<double, 6, kStateDim> d_xi =
      Eigen::Matrix<double, 6, kStateDim>::Zero();
  Eigen::Matrix<double, 6, kStateDim> d_xj =
      Eigen::Matrix<double, 6, kStateDim>::Zero();
};

VelResidual vel_residual(const State& xi, const State& xj,
                         const PreintVelDelta& delta);

}  // namespace vilo
