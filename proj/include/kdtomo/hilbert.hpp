// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra over small finite-dimensional Hilbert spaces:
// states, bases, tensor products, partial traces, unitary square roots, and
// seeded random sampling. Everything here is a pure function of its inputs;
// values are immutable after construction.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace kdtomo {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

namespace tol {
// Constructive identities (pure arithmetic, no spectral decomposition).
inline constexpr double constructive = 1e-12;
// Results that pass through an eigendecomposition.
inline constexpr double spectral = 1e-10;
// Smallest admissible |<b|psi>|^2 before post-selection is declared orthogonal.
inline constexpr double post_selection = 1e-12;
// Smallest admissible |<b|a>| for density-matrix reconstruction.
inline constexpr double reconstruction_overlap = 1e-8;
}  // namespace tol

//==============================================================================
// Errors
//==============================================================================

/// Post-selection vector is (numerically) orthogonal to the evolved state, so
/// the conditional quantity is undefined.
class OrthogonalPostSelection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A basis pair has a vanishing overlap <b|a>, making it unusable for direct
/// density-matrix reconstruction. Carries the offending index pair.
class UnsuitableBasisPair : public std::runtime_error {
 public:
  UnsuitableBasisPair(int a, int b, double overlap)
      : std::runtime_error("unsuitable basis pair: |<b" + std::to_string(b) +
                           "|a" + std::to_string(a) + ">| = " +
                           std::to_string(overlap) + " below threshold"),
        index_a(a),
        index_b(b) {}
  int index_a;
  int index_b;
};

/// A probability table fails the structural checks of the operation consuming
/// it (e.g. marginal inversion out of range).
class MalformedTable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//==============================================================================
// Seeded randomness
//==============================================================================

/// Deterministic random source. Same seed, same stream, bit for bit: the
/// generator is mt19937_64 (fully specified by the standard) and the Gaussian
/// transform is done by hand rather than through the implementation-defined
/// std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms per call.
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * kPi * u2);
  }

  /// Complex Gaussian with independent N(0,1) real and imaginary parts.
  Complex complex_gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

 private:
  std::mt19937_64 engine_;
};

//==============================================================================
// Domain types
//==============================================================================

/// Unit-norm state vector in a d-dimensional Hilbert space.
class PureState {
 public:
  PureState(int dim, Vector amplitudes) : dim_(dim), amplitudes_(std::move(amplitudes)) {
    if (dim_ < 1 || amplitudes_.size() != dim_)
      throw std::invalid_argument("PureState: amplitude vector does not match dim");
    if (std::abs(amplitudes_.norm() - 1.0) > tol::constructive)
      throw std::invalid_argument("PureState: vector is not normalized");
  }

  /// Normalizes the given vector (rejecting the zero vector).
  static PureState normalized(Vector v) {
    const double n = v.norm();
    if (n < 1e-300) throw std::invalid_argument("PureState: cannot normalize zero vector");
    return PureState(static_cast<int>(v.size()), v / n);
  }

  static PureState basis_state(int dim, int index) {
    if (index < 0 || index >= dim) throw std::invalid_argument("PureState: basis index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return PureState(dim, std::move(v));
  }

  int dim() const { return dim_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int i) const { return amplitudes_(i); }

 private:
  int dim_;
  Vector amplitudes_;
};

/// Positive unit-trace operator (validated: Hermitian within 1e-12, trace 1
/// within 1e-12, eigenvalues >= -1e-10).
class DensityMatrix {
 public:
  DensityMatrix(int dim, Matrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
    if (dim_ < 1 || matrix_.rows() != dim_ || matrix_.cols() != dim_)
      throw std::invalid_argument("DensityMatrix: matrix does not match dim");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol::constructive)
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > tol::constructive)
      throw std::invalid_argument("DensityMatrix: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol::spectral)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }

  static DensityMatrix pure(const PureState& psi) {
    return DensityMatrix(psi.dim(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  static DensityMatrix maximally_mixed(int dim) {
    return DensityMatrix(dim, Matrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  int dim() const { return dim_; }
  const Matrix& matrix() const { return matrix_; }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  int dim_;
  Matrix matrix_;
};

/// Ordered set of d orthonormal vectors, stored as matrix columns.
class OrthonormalBasis {
 public:
  OrthonormalBasis(Matrix vectors, std::string label)
      : dim_(static_cast<int>(vectors.rows())), vectors_(std::move(vectors)), label_(std::move(label)) {
    if (vectors_.cols() != dim_ || dim_ < 1)
      throw std::invalid_argument("OrthonormalBasis: need d column vectors of length d");
    const Matrix gram = vectors_.adjoint() * vectors_;
    if ((gram - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol::constructive)
      throw std::invalid_argument("OrthonormalBasis: vectors are not orthonormal");
  }

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  /// Basis vector |k>.
  Vector vector(int k) const { return vectors_.col(k); }
  /// Columns are the basis vectors.
  const Matrix& vectors() const { return vectors_; }

 private:
  int dim_;
  Matrix vectors_;
  std::string label_;
};

/// Observable given by an eigenbasis {|a>} and real eigenvalues A_a.
class Observable {
 public:
  Observable(OrthonormalBasis basis, RealVector eigenvalues)
      : basis_(std::move(basis)), eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.size() != basis_.dim())
      throw std::invalid_argument("Observable: eigenvalue count does not match basis");
    if (!eigenvalues_.allFinite())
      throw std::invalid_argument("Observable: eigenvalues must be finite");
  }

  const OrthonormalBasis& basis() const { return basis_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(int a) const { return eigenvalues_(a); }

  /// Sum_a A_a |a><a|.
  Matrix matrix() const {
    const int d = basis_.dim();
    Matrix m = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
      m += eigenvalues_(a) * basis_.vector(a) * basis_.vector(a).adjoint();
    return m;
  }

 private:
  OrthonormalBasis basis_;
  RealVector eigenvalues_;
};

/// Operator on system1 (x) system2, both d-dimensional. Index convention,
/// used everywhere in this library: row/column index = a*d + b for
/// (system1 = a, system2 = b), i.e. system 1 is the left tensor factor.
class BipartiteOperator {
 public:
  BipartiteOperator(int dim, Matrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
    if (dim_ < 1 || matrix_.rows() != dim_ * dim_ || matrix_.cols() != dim_ * dim_)
      throw std::invalid_argument("BipartiteOperator: matrix is not d^2 x d^2");
  }

  int dim() const { return dim_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  int dim_;
  Matrix matrix_;
};

//==============================================================================
// Tensor algebra
//==============================================================================

/// Kronecker product A (x) B with A acting on the left (slow) index:
/// result(i*n + k, j*n + l) = A(i, j) * B(k, l).
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  const auto m = a.rows(), p = a.cols();
  const auto n = b.rows(), q = b.cols();
  Matrix out(m * n, p * q);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < p; ++j) out.block(i * n, j * q, n, q) = a(i, j) * b;
  return out;
}

inline Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Trace over the first factor of a (d1*d2)x(d1*d2) operator; returns d2 x d2.
inline Matrix trace_out_first(const Matrix& m, int d1, int d2) {
  Matrix out = Matrix::Zero(d2, d2);
  for (int k = 0; k < d1; ++k) out += m.block(k * d2, k * d2, d2, d2);
  return out;
}

/// Trace over the second factor; returns d1 x d1.
inline Matrix trace_out_second(const Matrix& m, int d1, int d2) {
  Matrix out = Matrix::Zero(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
  return out;
}

/// Partial trace of a bipartite operator. keep = 1 keeps system 1 (traces out
/// system 2), keep = 2 keeps system 2.
inline Matrix partial_trace(const BipartiteOperator& x, int keep) {
  const int d = x.dim();
  if (keep == 1) return trace_out_second(x.matrix(), d, d);
  if (keep == 2) return trace_out_first(x.matrix(), d, d);
  throw std::invalid_argument("partial_trace: keep must be 1 or 2");
}

//==============================================================================
// Unitary square root
//==============================================================================

/// Principal square root of a unitary matrix: eigenvalue e^{i phi} with
/// phi in (-pi, pi] maps to e^{i phi/2}. Eigenvalues sitting on the branch
/// cut are snapped to phi = +pi, so sqrt(-1) = +i. Uses the Schur form, whose
/// triangular factor is diagonal (to machine precision) for normal input.
inline Matrix unitary_sqrt(const Matrix& u) {
  const auto n = u.rows();
  if (u.cols() != n) throw std::invalid_argument("unitary_sqrt: matrix must be square");
  const double dev = (u * u.adjoint() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > tol::spectral)
    throw std::invalid_argument("unitary_sqrt: input is not unitary (deviation " +
                                std::to_string(dev) + ")");
  Eigen::ComplexSchur<Matrix> schur(u);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("unitary_sqrt: Schur decomposition failed");
  Vector roots(n);
  constexpr double branch_snap = 1e-9;
  for (Eigen::Index k = 0; k < n; ++k) {
    double phi = std::arg(schur.matrixT()(k, k));
    if (phi < -kPi + branch_snap) phi = kPi;
    roots(k) = std::polar(1.0, phi / 2.0);
  }
  const Matrix& q = schur.matrixU();
  return q * roots.asDiagonal() * q.adjoint();
}

//==============================================================================
// Random sampling
//==============================================================================

/// Haar-uniform pure state: d independent standard complex Gaussians,
/// normalized. Deterministic for fixed (d, seed).
inline PureState haar_random_state(int d, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("haar_random_state: d must be >= 2");
  Rng rng(seed);
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
  return PureState::normalized(std::move(v));
}

/// Random density matrix of the given rank: a mixture of `rank` Haar states
/// with Dirichlet(1,...,1) weights.
inline DensityMatrix random_density(int d, int rank, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("random_density: d must be >= 2");
  if (rank < 1 || rank > d) throw std::invalid_argument("random_density: rank out of range");
  Rng rng(seed);
  RealVector weights(rank);
  for (int k = 0; k < rank; ++k) weights(k) = -std::log1p(-rng.uniform());
  weights /= weights.sum();
  Matrix rho = Matrix::Zero(d, d);
  for (int k = 0; k < rank; ++k) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
    v.normalize();
    rho += weights(k) * v * v.adjoint();
  }
  return DensityMatrix(d, std::move(rho));
}

/// Haar-distributed random unitary: the eigenvector matrix of a random
/// Hermitian (GUE) matrix. Columns are orthonormal even for near-degenerate
/// spectra, courtesy of the self-adjoint solver.
inline Matrix random_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_unitary: d must be >= 1");
  Rng rng(seed);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
  const Matrix h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return es.eigenvectors();
}

inline OrthonormalBasis random_basis(int d, std::uint64_t seed) {
  return OrthonormalBasis(random_unitary(d, seed), "random");
}

//==============================================================================
// Standard bases
//==============================================================================

inline OrthonormalBasis computational_basis(int d) {
  return OrthonormalBasis(Matrix::Identity(d, d), "computational");
}

/// Discrete Fourier basis: <m|b_k> = d^{-1/2} e^{2 pi i m k / d}. Mutually
/// unbiased with the computational basis, so every overlap has modulus
/// d^{-1/2}, the safest default partner for reconstruction.
inline OrthonormalBasis fourier_basis(int d) {
  if (d < 2) throw std::invalid_argument("fourier_basis: d must be >= 2");
  Matrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k)
      f(m, k) = norm * std::polar(1.0, 2.0 * kPi * static_cast<double>(m) *
                                           static_cast<double>(k) / static_cast<double>(d));
  return OrthonormalBasis(std::move(f), "fourier");
}

}  // namespace kdtomo
