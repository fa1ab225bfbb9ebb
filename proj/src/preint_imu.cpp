#include "vilo/preint_imu.hpp"

#include <stdexcept>

namespace vilo {

Rotation PreintImuDelta::rot_corrected(const Vec3& bg) const {
  return rot * exp_so3(d_rot_d_bg * (bg - bias_ref.gyro));
}

Vec3 PreintImuDelta::vel_corrected(const Vec3& bg, const Vec3& ba) const {
  return vel + d_vel_d_bg * (bg - bias_ref.gyro) + d_vel_d_ba * (ba - bias_ref.accel);
}

Vec3 PreintImuDelta::pos_corrected(const Vec3& bg, const Vec3& ba) const {
  return pos + d_pos_d_bg * (bg - bias_ref.gyro) + d_pos_d_ba * (ba - bias_ref.accel);
}

PreintImuDelta make_imu_delta(const BiasBlock& bias_ref, const ImuNoiseSpec& noise) {
  PreintImuDelta d;
  d.bias_ref = bias_ref;
  d.noise = noise;
  return d;
}

PreintImuDelta imu_integrate(const PreintImuDelta& delta, const ImuSample& s,
                             double dt) {
  if (dt <= 0.0) {
    throw std::invalid_argument("imu_integrate: dt must be positive");
  }
  if (delta.has_samples && s.stamp <= delta.last_stamp) {
    throw std::invalid_argument("imu_integrate: non-monotone sample stamp");
  }

  const Vec3 w = s.gyro - delta.bias_ref.gyro;
  const Vec3 a = s.accel - delta.bias_ref.accel;
  const Vec3 psi = w * dt;
  const Rotation incr = exp_so3(psi);
  const Mat3 jr = right_jacobian_so3(psi);
  const Mat3& rot = delta.rot;

  PreintImuDelta out = delta;

  // Bias Jacobians, position first so it consumes the step-k velocity terms.
  out.d_pos_d_bg = delta.d_pos_d_bg + delta.d_vel_d_bg * dt;
  out.d_pos_d_ba = delta.d_pos_d_ba + delta.d_vel_d_ba * dt;
  out.d_vel_d_bg = delta.d_vel_d_bg - rot * skew(a) * delta.d_rot_d_bg * dt;
  out.d_vel_d_ba = delta.d_vel_d_ba - rot * dt;
  out.d_rot_d_bg = incr.transpose() * delta.d_rot_d_bg - jr * dt;

  // Covariance over [dphi, dv, dp].
  Eigen::Matrix<double, 9, 9> a_mat = Eigen::Matrix<double, 9, 9>::Identity();
  a_mat.block<3, 3>(0, 0) = incr.transpose();
  a_mat.block<3, 3>(3, 0) = -rot * skew(a) * dt;
  a_mat.block<3, 3>(6, 3) = Mat3::Identity() * dt;

  Eigen::Matrix<double, 9, 6> b_mat = Eigen::Matrix<double, 9, 6>::Zero();
  b_mat.block<3, 3>(0, 0) = jr * dt;
  b_mat.block<3, 3>(3, 3) = rot * dt;

  // Continuous-time densities to per-sample variances.
  Eigen::Matrix<double, 6, 6> sj = Eigen::Matrix<double, 6, 6>::Zero();
  const double gv = delta.noise.gyro_noise_density * delta.noise.gyro_noise_density / dt;
  const double av = delta.noise.accel_noise_density * delta.noise.accel_noise_density / dt;
  sj.diagonal() << gv, gv, gv, av, av, av;

  out.cov = a_mat * delta.cov * a_mat.transpose() + b_mat * sj * b_mat.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();

  out.pos = delta.pos + delta.vel * dt;
  out.vel = delta.vel + rot * a * dt;
  out.rot = rot * incr;
  out.dt = delta.dt + dt;
  out.last_stamp = s.stamp;
  out.has_samples = true;
  return out;
}

ImuResidual imu_residual(const State& xi, const State& xj,
                         const PreintImuDelta& delta) {
  const Vec3& g = delta.noise.gravity;
  const double dt = delta.dt;
  const Mat3 ri_t = xi.orientation.transpose();

  const Vec3 dbg = xi.bias.gyro - delta.bias_ref.gyro;
  const Rotation rot_c = delta.rot_corrected(xi.bias.gyro);
  const Vec3 vel_c = delta.vel_corrected(xi.bias.gyro, xi.bias.accel);
  const Vec3 pos_c = delta.pos_corrected(xi.bias.gyro, xi.bias.accel);

  const Vec3 v_term = ri_t * (xj.velocity - xi.velocity - g * dt);
  const Vec3 p_term = ri_t * (xj.position - xi.position - xi.velocity * dt -
                              0.5 * g * dt * dt);

  ImuResidual res;
  const Vec3 r_phi = log_so3(rot_c.transpose() * ri_t * xj.orientation);
  res.value.segment<3>(0) = r_phi;
  res.value.segment<3>(3) = v_term - vel_c;
  res.value.segment<3>(6) = p_term - pos_c;

  const Mat3 jr_inv = inverse_right_jacobian_so3(r_phi);
  const Mat3 rj_t_ri = xj.orientation.transpose() * xi.orientation;

  // Rotation rows.
  res.d_xi.block<3, 3>(0, 0) = -jr_inv * rj_t_ri;
  res.d_xj.block<3, 3>(0, 0) = jr_inv;
  {
    const Vec3 xi_corr = delta.d_rot_d_bg * dbg;
    res.d_xi.block<3, 3>(0, 9) = -jr_inv * exp_so3(r_phi).transpose() *
                                 right_jacobian_so3(xi_corr) * delta.d_rot_d_bg;
  }

  // Velocity rows.
  res.d_xi.block<3, 3>(3, 0) = skew(v_term);
  res.d_xi.block<3, 3>(3, 6) = -ri_t;
  res.d_xi.block<3, 3>(3, 9) = -delta.d_vel_d_bg;
  res.d_xi.block<3, 3>(3, 12) = -delta.d_vel_d_ba;
  res.d_xj.block<3, 3>(3, 6) = ri_t;

  // Position rows.
  res.d_xi.block<3, 3>(6, 0) = skew(p_term);
  res.d_xi.block<3, 3>(6, 3) = -ri_t;
  res.d_xi.block<3, 3>(6, 6) = -ri_t * dt;
  res.d_xi.block<3, 3>(6, 9) = -delta.d_pos_d_bg;
  res.d_xi.block<3, 3>(6, 12) = -delta.d_pos_d_ba;
  res.d_xj.block<3, 3>(6, 3) = ri_t;

  return res;
}

State imu_propagate(const State& xi, const PreintImuDelta& delta) {
  const Vec3& g = delta.noise.gravity;
  const double dt = delta.dt;

  State xj = xi;
  xj.orientation = xi.orientation * delta.rot_corrected(xi.bias.gyro);
  xj.velocity = xi.velocity + g * dt +
                xi.orientation * delta.vel_corrected(xi.bias.gyro, xi.bias.accel);
  xj.position = xi.position + xi.velocity * dt + 0.5 * g * dt * dt +
                xi.orientation * delta.pos_corrected(xi.bias.gyro, xi.bias.accel);
  xj.stamp = xi.stamp + dt;
  return xj;
}

}  // namespace vilo
