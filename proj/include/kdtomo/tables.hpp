// SPDX-License-Identifier: Apache-2.0
//
// Joint outcome tables over a pair of measurement bases: complex-valued
// quasiprobability tables, real probability tables (optionally tagged with a
// control-qubit outcome), and seeded multinomial sampling for finite-shot
// statistics.

#pragma once

#include "kdtomo/hilbert.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kdtomo {

/// d x d table of complex joint quasiprobabilities indexed (a, b), together
/// with the two bases that define the indices. Entry order convention:
/// index a refers to basis_a, index b to basis_b, entries(a, b) row-major.
class ComplexJointTable {
 public:
  ComplexJointTable(Matrix entries, OrthonormalBasis basis_a, OrthonormalBasis basis_b)
      : dim_(static_cast<int>(entries.rows())),
        entries_(std::move(entries)),
        basis_a_(std::move(basis_a)),
        basis_b_(std::move(basis_b)) {
    if (entries_.cols() != dim_ || dim_ < 1)
      throw std::invalid_argument("ComplexJointTable: entries must be square");
    if (basis_a_.dim() != dim_ || basis_b_.dim() != dim_)
      throw std::invalid_argument("ComplexJointTable: basis dimension mismatch");
  }

  int dim() const { return dim_; }
  const Matrix& entries() const { return entries_; }
  Complex entry(int a, int b) const { return entries_(a, b); }
  const OrthonormalBasis& basis_a() const { return basis_a_; }
  const OrthonormalBasis& basis_b() const { return basis_b_; }

  Complex sum() const { return entries_.sum(); }
  /// Σ_b entries(a, b); equals the Born probability in basis_a for a
  /// unit-trace source (imaginary part zero in exact arithmetic).
  Complex marginal_a(int a) const { return entries_.row(a).sum(); }
  Complex marginal_b(int b) const { return entries_.col(b).sum(); }

 private:
  int dim_;
  Matrix entries_;
  OrthonormalBasis basis_a_;
  OrthonormalBasis basis_b_;
};

/// d x d table of real joint probabilities. Produced either by projecting a
/// two-system state onto basis pairs or by sampling; may carry the bases that
/// generated it and a control-qubit outcome tag ("0x", "1x", "0y", "1y").
class ProbTable {
 public:
  explicit ProbTable(RealMatrix entries,
                     std::optional<OrthonormalBasis> basis_a = std::nullopt,
                     std::optional<OrthonormalBasis> basis_b = std::nullopt,
                     std::optional<std::string> control_tag = std::nullopt)
      : dim_(static_cast<int>(entries.rows())),
        entries_(std::move(entries)),
        basis_a_(std::move(basis_a)),
        basis_b_(std::move(basis_b)),
        control_tag_(std::move(control_tag)) {
    if (entries_.cols() != dim_ || dim_ < 1)
      throw std::invalid_argument("ProbTable: entries must be square");
    if (entries_.minCoeff() < -tol::constructive)
      throw std::invalid_argument("ProbTable: negative probability entry");
    if ((basis_a_ && basis_a_->dim() != dim_) || (basis_b_ && basis_b_->dim() != dim_))
      throw std::invalid_argument("ProbTable: basis dimension mismatch");
  }

  int dim() const { return dim_; }
  const RealMatrix& entries() const { return entries_; }
  double entry(int a, int b) const { return entries_(a, b); }
  const std::optional<OrthonormalBasis>& basis_a() const { return basis_a_; }
  const std::optional<OrthonormalBasis>& basis_b() const { return basis_b_; }
  const std::optional<std::string>& control_tag() const { return control_tag_; }

  double sum() const { return entries_.sum(); }
  RealVector marginal_a() const { return entries_.rowwise().sum(); }
  RealVector marginal_b() const { return entries_.colwise().sum().transpose(); }

 private:
  int dim_;
  RealMatrix entries_;
  std::optional<OrthonormalBasis> basis_a_;
  std::optional<OrthonormalBasis> basis_b_;
  std::optional<std::string> control_tag_;
};

namespace detail {

/// Draws `shots` multinomial samples over `probs` (assumed to sum to ~1) and
/// returns per-cell counts. Inverse-CDF sampling with a binary search per
/// shot; deterministic for a fixed rng state.
inline std::vector<long long> multinomial_counts(const std::vector<double>& probs,
                                                 long long shots, Rng& rng) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(probs[i], 0.0);
    cdf[i] = acc;
  }
  std::vector<long long> counts(probs.size(), 0);
  for (long long s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto cell = std::min<std::size_t>(it - cdf.begin(), probs.size() - 1);
    ++counts[cell];
  }
  return counts;
}

}  // namespace detail

/// Finite-shot estimate of a normalized probability table: multinomial
/// sampling over all d^2 cells, returning relative frequencies. The table
/// must sum to 1 within 1e-9 (no silent renormalization). Bases and tag are
/// carried over unchanged.
inline ProbTable sample_table(const ProbTable& p, long long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_table: shots must be >= 1");
  if (std::abs(p.sum() - 1.0) > 1e-9)
    throw MalformedTable("sample_table: table mass " + std::to_string(p.sum()) +
                         " is not 1; sample the joint pair instead");
  const int d = p.dim();
  std::vector<double> probs(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) probs[a * d + b] = p.entry(a, b);
  Rng rng(seed);
  const auto counts = detail::multinomial_counts(probs, shots, rng);
  RealMatrix freq(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      freq(a, b) = static_cast<double>(counts[a * d + b]) / static_cast<double>(shots);
  return ProbTable(std::move(freq), p.basis_a(), p.basis_b(), p.control_tag());
}

/// Finite-shot estimate of a complementary pair of control-tagged tables
/// (e.g. the two outcomes of one control-axis setting). The 2d^2 cells are
/// sampled jointly, reflecting one experimental run per shot; the pair must
/// sum to 1 within 1e-9.
inline std::pair<ProbTable, ProbTable> sample_table_pair(const ProbTable& p0,
                                                         const ProbTable& p1,
                                                         long long shots,
                                                         std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_table_pair: shots must be >= 1");
  if (p0.dim() != p1.dim())
    throw MalformedTable("sample_table_pair: dimension mismatch between tables");
  if (std::abs(p0.sum() + p1.sum() - 1.0) > 1e-9)
    throw MalformedTable("sample_table_pair: pair mass is not 1");
  const int d = p0.dim();
  const std::size_t cells = static_cast<std::size_t>(d) * d;
  std::vector<double> probs(2 * cells);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      probs[a * d + b] = p0.entry(a, b);
      probs[cells + a * d + b] = p1.entry(a, b);
    }
  Rng rng(seed);
  const auto counts = detail::multinomial_counts(probs, shots, rng);
  RealMatrix f0(d, d), f1(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      f0(a, b) = static_cast<double>(counts[a * d + b]) / static_cast<double>(shots);
      f1(a, b) = static_cast<double>(counts[cells + a * d + b]) / static_cast<double>(shots);
    }
  return {ProbTable(std::move(f0), p0.basis_a(), p0.basis_b(), p0.control_tag()),
          ProbTable(std::move(f1), p1.basis_a(), p1.basis_b(), p1.control_tag())};
}

}  // namespace kdtomo
