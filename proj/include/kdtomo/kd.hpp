// SPDX-License-Identifier: Apache-2.0
//
// Kirkwood-Dirac statistics over a pair of bases: the complex joint table
// kd(a,b) = <b|a><a|rho|b>, weak values, cloner output probabilities with
// background subtraction, controlled-swap readout, and direct density-matrix
// reconstruction. Index a always refers to the weakly measured basis, b to
// the post-selected one.

#pragma once

#include "kdtomo/clone.hpp"
#include "kdtomo/hilbert.hpp"
#include "kdtomo/tables.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kdtomo {

/// kd(a,b) = <b|a><a|rho|b>. Marginals reproduce the Born probabilities in
/// either basis and the total sum is 1; real parts may be negative and
/// entries complex, which is what makes the table a quasiprobability.
inline ComplexJointTable kd_distribution(const DensityMatrix& rho,
                                         const OrthonormalBasis& basis_a,
                                         const OrthonormalBasis& basis_b) {
  const int d = rho.dim();
  if (basis_a.dim() != d || basis_b.dim() != d)
    throw std::invalid_argument("kd_distribution: basis dimension mismatch");
  Matrix entries(d, d);
  for (int b = 0; b < d; ++b) {
    const Vector vb = basis_b.vector(b);
    const Vector rho_vb = rho.matrix() * vb;
    for (int a = 0; a < d; ++a) {
      const Vector va = basis_a.vector(a);
      entries(a, b) = vb.dot(va) * va.dot(rho_vb);
    }
  }
  return ComplexJointTable(std::move(entries), basis_a, basis_b);
}

/// Weak value of an observable between preparation psi and post-selection b.
struct WeakValueResult {
  Complex value;
  double post_selection_prob;  // |<b|psi>|^2
};

/// <b|A|psi> / <b|psi> with A = Σ_a A_a |a><a|. Defined only when the
/// post-selection overlap clears the threshold; the result may lie far
/// outside the eigenvalue range (anomalous weak values).
inline WeakValueResult weak_value(const Observable& obs, const PureState& psi,
                                  const Vector& post_vector) {
  if (post_vector.size() != psi.dim())
    throw std::invalid_argument("weak_value: post-selection vector dimension mismatch");
  if (std::abs(post_vector.norm() - 1.0) > tol::constructive)
    throw std::invalid_argument("weak_value: post-selection vector is not normalized");
  const Complex overlap = post_vector.dot(psi.amplitudes());
  const double prob = std::norm(overlap);
  if (prob < tol::post_selection)
    throw OrthogonalPostSelection("weak_value: post-selection is orthogonal to the state");
  const Complex numer = post_vector.dot(obs.matrix() * psi.amplitudes());
  return {numer / overlap, prob};
}

/// Weak value as the conditional average of the joint table at fixed b:
/// Σ_a A_a kd(a,b) / Σ_a kd(a,b). Agrees with weak_value when the table was
/// built from the observable's eigenbasis.
inline Complex weak_value_from_kd(const Observable& obs, const ComplexJointTable& kd, int b) {
  const int d = kd.dim();
  if (obs.basis().dim() != d) throw std::invalid_argument("weak_value_from_kd: dimension mismatch");
  if (b < 0 || b >= d) throw std::invalid_argument("weak_value_from_kd: column index out of range");
  const Complex denom = kd.marginal_b(b);
  if (std::abs(denom) < tol::post_selection)
    throw OrthogonalPostSelection("weak_value_from_kd: column sum vanishes at b = " +
                                  std::to_string(b));
  Complex numer = 0.0;
  for (int a = 0; a < d; ++a) numer += obs.eigenvalue(a) * kd.entry(a, b);
  return numer / denom;
}

/// Joint outcome probabilities of the cloning output: p(a,b) = <a,b|E|a,b>.
/// Closed form (the test oracle, not the implementation path):
/// p(a,b) = (<a|rho|a> + <b|rho|b> + 2 Re kd(a,b)) / (2(d+1)).
inline ProbTable clone_joint_probabilities(const CloneOutput& clone_out,
                                           const OrthonormalBasis& basis_a,
                                           const OrthonormalBasis& basis_b) {
  const int d = clone_out.dim();
  if (basis_a.dim() != d || basis_b.dim() != d)
    throw std::invalid_argument("clone_joint_probabilities: basis dimension mismatch");
  RealMatrix entries(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Vector v = tensor(basis_a.vector(a), basis_b.vector(b));
      entries(a, b) = v.dot(clone_out.state.matrix() * v).real();
    }
  return ProbTable(std::move(entries), basis_a, basis_b);
}

/// Background levels q(a) recovered from a cloner table's marginal via
/// p(a) = ((d+2) q(a) + 1) / (2(d+1)). Values outside [0,1] beyond epsilon
/// mean the table did not come from a cloning channel.
inline RealVector invert_clone_marginal(const RealVector& marginal, int d) {
  constexpr double eps = 1e-6;
  RealVector q(marginal.size());
  for (Eigen::Index i = 0; i < marginal.size(); ++i) {
    q(i) = (2.0 * (d + 1.0) * marginal(i) - 1.0) / (d + 2.0);
    if (q(i) < -eps || q(i) > 1.0 + eps)
      throw MalformedTable("background inversion out of range: q(" + std::to_string(i) +
                           ") = " + std::to_string(q(i)) + " not in [0, 1]");
  }
  return q;
}

/// Removes the white-noise background from a cloner joint table, recovering
/// Re kd(a,b) = (2(d+1) p(a,b) − q_A(a) − q_B(b)) / 2 with the Born levels
/// q_A, q_B supplied explicitly.
inline RealMatrix background_subtract(const ProbTable& p, int d, const RealVector& q_a,
                                      const RealVector& q_b) {
  if (p.dim() != d || q_a.size() != d || q_b.size() != d)
    throw std::invalid_argument("background_subtract: dimension mismatch");
  RealMatrix re_kd(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      re_kd(a, b) = (2.0 * (d + 1.0) * p.entry(a, b) - q_a(a) - q_b(b)) / 2.0;
  return re_kd;
}

/// Same, with the backgrounds estimated from the table's own marginals.
/// Exact on noiseless cloner tables; on sampled tables the estimate carries
/// the marginals' shot noise.
inline RealMatrix background_subtract(const ProbTable& p, int d) {
  if (p.dim() != d) throw std::invalid_argument("background_subtract: dimension mismatch");
  const RealVector q_a = invert_clone_marginal(p.marginal_a(), d);
  const RealVector q_b = invert_clone_marginal(p.marginal_b(), d);
  return background_subtract(p, d, q_a, q_b);
}

namespace detail {

inline void require_same_shape(const ProbTable& t, int d, const char* name) {
  if (t.dim() != d)
    throw MalformedTable(std::string("extract_kd_from_cswap: table ") + name +
                         " has dimension " + std::to_string(t.dim()) + ", expected " +
                         std::to_string(d));
  if (!t.basis_a() || !t.basis_b())
    throw MalformedTable(std::string("extract_kd_from_cswap: table ") + name +
                         " carries no basis information");
}

}  // namespace detail

/// Rebuilds the complex joint table from the four control-tagged outcome
/// tables of the controlled-swap circuit:
///   entries(a,b) = d·(pX0 − pX1)(a,b) + i·d·(pY0 − pY1)(a,b).
/// The bases are taken from the tables, which must agree in shape.
inline ComplexJointTable extract_kd_from_cswap(const ProbTable& px0, const ProbTable& px1,
                                               const ProbTable& py0, const ProbTable& py1,
                                               int d) {
  detail::require_same_shape(px0, d, "pX0");
  detail::require_same_shape(px1, d, "pX1");
  detail::require_same_shape(py0, d, "pY0");
  detail::require_same_shape(py1, d, "pY1");
  Matrix entries(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      entries(a, b) = Complex(d * (px0.entry(a, b) - px1.entry(a, b)),
                              d * (py0.entry(a, b) - py1.entry(a, b)));
  return ComplexJointTable(std::move(entries), *px0.basis_a(), *px0.basis_b());
}

/// Result of direct reconstruction. The raw matrix is kept alongside its
/// deviation from the density-matrix axioms: exact tables reconstruct
/// exactly, while sampled tables land nearby but need the diagnostics to
/// judge how far off they are.
struct Reconstruction {
  Matrix matrix;
  double hermiticity_error;  // max |M - M†| elementwise
  double trace_error;        // |Tr M - 1|

  /// Validates the raw matrix as a DensityMatrix (throws if it fails).
  DensityMatrix as_density_matrix() const {
    return DensityMatrix(static_cast<int>(matrix.rows()), matrix);
  }
};

/// Direct reconstruction: rho = Σ_{a,b} kd(a,b) |a><b| / <b|a>. Exact
/// whenever the table is exact, by the twofold resolution of identity.
/// Every overlap <b|a> must clear the threshold since it is divided by.
inline Reconstruction reconstruct_density_matrix(const ComplexJointTable& kd) {
  const int d = kd.dim();
  Matrix rho = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const Vector va = kd.basis_a().vector(a);
    for (int b = 0; b < d; ++b) {
      const Vector vb = kd.basis_b().vector(b);
      const Complex overlap = vb.dot(va);
      if (std::abs(overlap) < tol::reconstruction_overlap)
        throw UnsuitableBasisPair(a, b, std::abs(overlap));
      rho += (kd.entry(a, b) / overlap) * (va * vb.adjoint());
    }
  }
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const double tr = std::abs(rho.trace() - Complex(1.0, 0.0));
  return Reconstruction{std::move(rho), herm, tr};
}

/// Summary of quasiprobability negativity and complexity in a joint table.
struct NegativityReport {
  double min_re;
  int min_re_a, min_re_b;
  double max_abs_im;
  int max_im_a, max_im_b;
  int negative_count;  // entries with Re < -1e-12
  std::vector<std::pair<int, int>> negative_indices;
};

inline NegativityReport negativity_report(const ComplexJointTable& kd) {
  const int d = kd.dim();
  NegativityReport rep{0.0, 0, 0, 0.0, 0, 0, 0, {}};
  rep.min_re = kd.entry(0, 0).real();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Complex e = kd.entry(a, b);
      if (e.real() < rep.min_re) {
        rep.min_re = e.real();
        rep.min_re_a = a;
        rep.min_re_b = b;
      }
      if (std::abs(e.imag()) > rep.max_abs_im) {
        rep.max_abs_im = std::abs(e.imag());
        rep.max_im_a = a;
        rep.max_im_b = b;
      }
      if (e.real() < -tol::constructive) {
        ++rep.negative_count;
        rep.negative_indices.emplace_back(a, b);
      }
    }
  return rep;
}

}  // namespace kdtomo
