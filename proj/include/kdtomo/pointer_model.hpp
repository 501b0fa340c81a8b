// SPDX-License-Identifier: Apache-2.0
//
// Von Neumann pointer model with a qubit meter: the system couples weakly to
// a rank-one projector through exp(-i theta Pi (x) sigma_y), the system is
// post-selected, and the conditional meter expectations <sigma_x>, <sigma_y>
// recover Re and Im of the weak value as theta -> 0. Serves as a physical
// cross-check of the algebraic weak-value formula, sharing no code with it.

#pragma once

#include "kdtomo/hilbert.hpp"

#include <utility>

namespace kdtomo {

/// One weak-measurement setup: coupling angle, measured projector |a><a|
/// (row `projector_index` of basis_a), preparation psi, post-selection |b>.
class WeakMeasConfig {
 public:
  WeakMeasConfig(double theta, OrthonormalBasis basis_a, int projector_index,
                 PureState psi, Vector post_vector)
      : theta_(theta),
        basis_a_(std::move(basis_a)),
        projector_index_(projector_index),
        psi_(std::move(psi)),
        post_vector_(std::move(post_vector)) {
    if (theta_ < min_theta || theta_ > max_theta)
      throw std::invalid_argument("WeakMeasConfig: theta outside [1e-4, 0.2]");
    if (projector_index_ < 0 || projector_index_ >= basis_a_.dim())
      throw std::invalid_argument("WeakMeasConfig: projector index out of range");
    if (psi_.dim() != basis_a_.dim() || post_vector_.size() != basis_a_.dim())
      throw std::invalid_argument("WeakMeasConfig: dimension mismatch");
    if (std::abs(post_vector_.norm() - 1.0) > tol::constructive)
      throw std::invalid_argument("WeakMeasConfig: post-selection vector is not normalized");
  }

  // Below the floor the conditional meter signal drowns in rounding; above
  // the ceiling the weak expansion is no longer meaningful.
  static constexpr double min_theta = 1e-4;
  static constexpr double max_theta = 0.2;

  double theta() const { return theta_; }
  const OrthonormalBasis& basis_a() const { return basis_a_; }
  int projector_index() const { return projector_index_; }
  const PureState& psi() const { return psi_; }
  const Vector& post_vector() const { return post_vector_; }

 private:
  double theta_;
  OrthonormalBasis basis_a_;
  int projector_index_;
  PureState psi_;
  Vector post_vector_;
};

/// Conditional meter readout after post-selection.
struct PointerShift {
  double x_shift;       // <sigma_x> on the meter
  double y_shift;       // <sigma_y> on the meter
  double success_prob;  // post-selection probability (norm of conditional state)
};

namespace detail {

/// Exact conditional meter state, worked out in closed form. The coupling
/// exp(-i theta Pi (x) sigma_y) acts as identity on the Pi = 0 sector and as
/// the rotation [[cos, -sin], [sin, cos]] on the meter in the Pi = 1 sector,
/// so with beta = <b|psi> and gamma = <b|a><a|psi> the unnormalized meter
/// components after post-selecting |b> are
///   mu_0 = beta + (cos theta - 1) gamma,   mu_1 = sin theta * gamma.
inline PointerShift pointer_shift_raw(double theta, const Vector& a_vec, const PureState& psi,
                                      const Vector& post_vector) {
  const Complex beta = post_vector.dot(psi.amplitudes());
  if (std::norm(beta) < 1e-10)
    throw OrthogonalPostSelection(
        "simulate_pointer_shift: post-selection overlap below 1e-10, weak value undefined");
  const Complex gamma = post_vector.dot(a_vec) * a_vec.dot(psi.amplitudes());
  const Complex mu0 = beta + (std::cos(theta) - 1.0) * gamma;
  const Complex mu1 = std::sin(theta) * gamma;
  const double norm_sq = std::norm(mu0) + std::norm(mu1);
  const Complex cross = std::conj(mu0) * mu1;
  return {2.0 * cross.real() / norm_sq, 2.0 * cross.imag() / norm_sq, norm_sq};
}

}  // namespace detail

/// Runs the pointer model at the configured coupling. In the weak limit
/// (x_shift + i y_shift) / (2 theta) -> <b|Pi|psi> / <b|psi>.
inline PointerShift simulate_pointer_shift(const WeakMeasConfig& cfg) {
  return detail::pointer_shift_raw(cfg.theta(), cfg.basis_a().vector(cfg.projector_index()),
                                   cfg.psi(), cfg.post_vector());
}

/// Finite-coupling weak-value estimate v(theta) = (x + i y) / (2 theta);
/// differs from the weak value by O(theta^2).
inline Complex pointer_weak_value_estimate(const WeakMeasConfig& cfg) {
  const PointerShift s = simulate_pointer_shift(cfg);
  return Complex(s.x_shift, s.y_shift) / (2.0 * cfg.theta());
}

/// Richardson extrapolation in theta^2: (4 v(theta/2) - v(theta)) / 3 cancels
/// the quadratic error term, leaving O(theta^4). The half-step bypasses the
/// config floor deliberately; the closed form never divides by theta, so it
/// stays well conditioned there.
inline Complex weak_limit_extrapolate(const WeakMeasConfig& cfg) {
  const Vector a_vec = cfg.basis_a().vector(cfg.projector_index());
  const PointerShift full = simulate_pointer_shift(cfg);
  const PointerShift half =
      detail::pointer_shift_raw(cfg.theta() / 2.0, a_vec, cfg.psi(), cfg.post_vector());
  const Complex v_full = Complex(full.x_shift, full.y_shift) / (2.0 * cfg.theta());
  const Complex v_half = Complex(half.x_shift, half.y_shift) / cfg.theta();
  return (4.0 * v_half - v_full) / 3.0;
}

}  // namespace kdtomo
