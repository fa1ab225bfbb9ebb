#include "vilo/preint_velocity.hpp"

#include <stdexcept>

namespace vilo {

PreintVelDelta make_vel_delta(const Vec3& ang_bias_ref, const Vec3& lin_bias_ref,
                              const TwistNoiseSpec& noise) {
  PreintVelDelta d;
  d.ang_bias_ref = ang_bias_ref;
  d.lin_bias_ref = lin_bias_ref;
  d.noise = noise;
  return d;
}

Eigen::Matrix<double, 6, 6> vel_propagate_cov(
    const Eigen::Matrix<double, 6, 6>& cov, const Vec3& ang_vel,
    const Vec3& lin_vel, const Vec3& ang_bias, const Vec3& lin_bias,
    const Rotation& rot_ik, double dt, const TwistNoiseSpec& noise) {
  const Vec3 psi = (ang_vel - ang_bias) * dt;
  const Vec3 v = lin_vel - lin_bias;

  Eigen::Matrix<double, 6, 6> a_mat = Eigen::Matrix<double, 6, 6>::Identity();
  a_mat.block<3, 3>(0, 0) = exp_so3(psi).transpose();
  a_mat.block<3, 3>(3, 0) = -rot_ik * skew(v) * dt;

  Eigen::Matrix<double, 6, 6> b_mat = Eigen::Matrix<double, 6, 6>::Zero();
  b_mat.block<3, 3>(0, 0) = right_jacobian_so3(psi) * dt;
  b_mat.block<3, 3>(3, 3) = rot_ik * dt;

  Eigen::Matrix<double, 6, 6> sj = Eigen::Matrix<double, 6, 6>::Zero();
  const double wv = noise.ang_noise * noise.ang_noise;
  const double vv = noise.lin_noise * noise.lin_noise;
  sj.diagonal() << wv, wv, wv, vv, vv, vv;

  Eigen::Matrix<double, 6, 6> out =
      a_mat * cov * a_mat.transpose() + b_mat * sj * b_mat.transpose();
  return 0.5 * (out + out.transpose()).eval();
}

PreintVelDelta vel_integrate(const PreintVelDelta& delta,
                             const TwistMeasurement& m, double dt) {
  if (dt <= 0.0) {
    throw std::invalid_argument("vel_integrate: dt must be positive");
  }
  if (delta.has_samples && m.stamp <= delta.last_stamp) {
    throw std::invalid_argument("vel_integrate: non-monotone sample stamp");
  }

  const Vec3 w = m.ang_vel - delta.ang_bias_ref;
  const Vec3 v = m.lin_vel - delta.lin_bias_ref;
  const Vec3 psi = w * dt;
  const Rotation incr = exp_so3(psi);
  const Mat3 jr = right_jacobian_so3(psi);
  const Mat3& rot = delta.rot;

  PreintVelDelta out = delta;

  out.d_pos_d_bw = delta.d_pos_d_bw - rot * skew(v) * delta.d_rot_d_bw * dt;
  out.d_pos_d_bv = delta.d_pos_d_bv - rot * dt;
  out.d_rot_d_bw = incr.transpose() * delta.d_rot_d_bw - jr * dt;

  out.cov = vel_propagate_cov(delta.cov, m.ang_vel, m.lin_vel,
                              delta.ang_bias_ref, delta.lin_bias_ref, rot, dt,
                              delta.noise);

  out.pos = delta.pos + rot * v * dt;
  out.rot = rot * incr;
  out.dt = delta.dt + dt;
  out.last_stamp = m.stamp;
  out.has_samples = true;
  return out;
}

CorrectedVelDelta vel_apply_bias_update(const PreintVelDelta& delta,
                                        const Vec3& ang_bias,
                                        const Vec3& lin_bias) {
  const Vec3 dbw = ang_bias - delta.ang_bias_ref;
  const Vec3 dbv = lin_bias - delta.lin_bias_ref;
  CorrectedVelDelta out;
  out.rot = delta.rot * exp_so3(delta.d_rot_d_bw * dbw);
  out.pos = delta.pos + delta.d_pos_d_bw * dbw + delta.d_pos_d_bv * dbv;
  return out;
}

VelResidual vel_residual(const State& xi, const State& xj,
                         const PreintVelDelta& delta) {
  const Mat3 ri_t = xi.orientation.transpose();
  const Vec3 dbw = xi.bias.ang_vel - delta.ang_bias_ref;
  const CorrectedVelDelta corr =
      vel_apply_bias_update(delta, xi.bias.ang_vel, xi.bias.lin_vel);

  const Vec3 p_term = ri_t * (xj.position - xi.position);

  VelResidual res;
  const Vec3 r_phi = log_so3(corr.rot.transpose() * ri_t * xj.orientation);
  res.value.segment<3>(0) = r_phi;
  res.value.segment<3>(3) = p_term - corr.pos;

  const Mat3 jr_inv = inverse_right_jacobian_so3(r_phi);
  const Mat3 rj_t_ri = xj.orientation.transpose() * xi.orientation;

  res.d_xi.block<3, 3>(0, 0) = -jr_inv * rj_t_ri;
  res.d_xj.block<3, 3>(0, 0) = jr_inv;
  {
    const Vec3 xi_corr = delta.d_rot_d_bw * dbw;
    res.d_xi.block<3, 3>(0, 15) = -jr_inv * exp_so3(r_phi).transpose() *
                                  right_jacobian_so3(xi_corr) * delta.d_rot_d_bw;
  }

  res.d_xi.block<3, 3>(3, 0) = skew(p_term);
  res.d_xi.block<3, 3>(3, 3) = -ri_t;
  res.d_xi.block<3, 3>(3, 15) = -delta.d_pos_d_bw;
  res.d_xi.block<3, 3>(3, 18) = -delta.d_pos_d_bv;
  res.d_xj.block<3, 3>(3, 3) = ri_t;

  return res;
}

}  // namespace vilo
