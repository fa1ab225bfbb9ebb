#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "vilo/state.hpp"

namespace vilo {

struct Key {
  enum class Type { state, landmark };
  Type type = Type::state;
  std::int64_t id = 0;

  auto operator<=>(const Key&) const = default;

  static Key state_key(std::int64_t i) { return Key{Type::state, i}; }
  static Key landmark_key(std::int64_t i) { return Key{Type::landmark, i}; }
};

inline int key_dim(const Key& k) {
  return k.type == Key::Type::state ? kStateDim : 3;
}

/// Estimates for all graph nodes. Ordered maps keep iteration (and thus
/// every assembled system) deterministic.
class Values {
 public:
  void insert_state(std::int64_t i, const State& x) { states_[i] = x; }
  void insert_landmark(std::int64_t i, const Vec3& p) { landmarks_[i] = p; }
  void erase(const Key& k) {
    if (k.type == Key::Type::state) states_.erase(k.id);
    else landmarks_.erase(k.id);
  }

  bool has(const Key& k) const {
    return k.type == Key::Type::state ? states_.count(k.id) > 0
                                      : landmarks_.count(k.id) > 0;
  }
  const State& state(std::int64_t i) const { return states_.at(i); }
  State& state(std::int64_t i) { return states_.at(i); }
  const Vec3& landmark(std::int64_t i) const { return landmarks_.at(i); }
  Vec3& landmark(std::int64_t i) { return landmarks_.at(i); }

  const std::map<std::int64_t, State>& states() const { return states_; }
  const std::map<std::int64_t, Vec3>& landmarks() const { return landmarks_; }

  /// Manifold update of a single node.
  void retract_in_place(const Key& k, const Eigen::VectorXd& delta) {
    if (k.type == Key::Type::state) {
      states_.at(k.id) = retract(states_.at(k.id), StateTangent(delta));
    } else {
      landmarks_.at(k.id) += Vec3(delta);
    }
  }

 private:
  std::map<std::int64_t, State> states_;
  std::map<std::int64_t, Vec3> landmarks_;
};

/// Square-root information weighting for a factor. Stored dense; factors
/// are small so the generality costs little.
class NoiseModel {
 public:
  NoiseModel() = default;

  static NoiseModel from_sigmas(const Eigen::VectorXd& sigmas) {
    NoiseModel n;
    n.sqrt_info_ = sigmas.cwiseInverse().asDiagonal();
    return n;
  }

  static NoiseModel isotropic(int dim, double sigma) {
    return from_sigmas(Eigen::VectorXd::Constant(dim, sigma));
  }

  /// sqrt_info = chol(cov + floor^2 I)^-1. The floor keeps noise-free
  /// synthetic covariances invertible.
  static NoiseModel from_covariance(const Eigen::MatrixXd& cov,
                                    double sigma_floor = 1e-8) {
    Eigen::MatrixXd c = cov;
    c.diagonal().array() += sigma_floor * sigma_floor;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("NoiseModel: covariance not positive definite");
    }
    NoiseModel n;
    n.sqrt_info_ = Eigen::MatrixXd(llt.matrixL())
                       .triangularView<Eigen::Lower>()
                       .solve(Eigen::MatrixXd::Identity(c.rows(), c.cols()));
    return n;
  }

  static NoiseModel from_sqrt_info(const Eigen::MatrixXd& w) {
    NoiseModel n;
    n.sqrt_info_ = w;
    return n;
  }

  Eigen::VectorXd whiten(const Eigen::VectorXd& r) const { return sqrt_info_ * r; }
  Eigen::MatrixXd whiten_jacobian(const Eigen::MatrixXd& j) const {
    return sqrt_info_ * j;
  }
  const Eigen::MatrixXd& sqrt_info() const { return sqrt_info_; }

 private:
  Eigen::MatrixXd sqrt_info_;
};

/// Whitened residual and per-key Jacobian blocks at a linearization point.
struct Linearization {
  Eigen::VectorXd residual;
  std::vector<Eigen::MatrixXd> jacobians;
  bool active = true;
};

class Factor {
 public:
  virtual ~Factor() = default;

  virtual const char* name() const = 0;
  virtual int dim() const = 0;

  /// Unwhitened residual (measurement-space units).
  virtual Eigen::VectorXd residual(const Values& v) const = 0;

  /// Whitened residual and Jacobians. `active == false` means the factor is
  /// skipped at this linearization point (e.g. stereo point behind camera).
  virtual Linearization linearize(const Values& v) const = 0;

  const std::vector<Key>& keys() const { return keys_; }

  Eigen::VectorXd whitened(const Values& v) const {
    return noise_.whiten(residual(v));
  }

  /// DCS parameter; 0 disables robust weighting for this factor.
  double robust_phi = 0.0;

 protected:
  std::vector<Key> keys_;
  NoiseModel noise_;
};

using FactorPtr = std::shared_ptr<const Factor>;

struct FactorGraph {
  std::vector<FactorPtr> factors;

  void add(FactorPtr f) { factors.push_back(std::move(f)); }
  std::size_t size() const { return factors.size(); }
};

/// Dynamic covariance scaling weight, s in (0, 1]. Inliers (r2 <= phi) keep
/// full weight; the whitened residual is scaled by s before entering the
/// normal equations.
inline double dcs_weight(double r_squared, double phi) {
  if (r_squared <= phi) return 1.0;
  return 2.0 * phi / (phi + r_squared);
}

}  // namespace vilo
