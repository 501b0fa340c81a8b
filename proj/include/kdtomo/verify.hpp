// SPDX-License-Identifier: Apache-2.0
//
// Cross-module identity suite over seeded random inputs. Each identity
// exercises two independent computation routes and records the maximum
// elementwise deviation seen across all trials; a report entry fails when
// that deviation exceeds the requested tolerance or a route throws.
//
// Trial t uses seed (base_seed + t), so a failure is reproducible in
// isolation by rerunning a single trial with its reported seed. Even trials
// draw pure states, odd trials mixed ones of cycling rank.

#pragma once

#include "kdtomo/clone.hpp"
#include "kdtomo/hilbert.hpp"
#include "kdtomo/kd.hpp"
#include "kdtomo/tables.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kdtomo {

struct IdentityResult {
  std::string name;
  double max_deviation;
  int trials;
  bool pass;
  std::string note;  // failure detail (offending seed or thrown message)
};

struct VerifyReport {
  int dim;
  int trials;
  std::uint64_t seed;
  double tolerance;
  std::vector<IdentityResult> identities;

  bool all_pass() const {
    for (const auto& r : identities)
      if (!r.pass) return false;
    return true;
  }
};

namespace detail {

/// Deterministic per-trial inputs. Sub-seeds for the bases are fixed
/// xor-scrambles of the trial seed so every random object is independent yet
/// fully determined by (dim, trial seed). `psi` is set on pure trials.
struct TrialInputs {
  DensityMatrix rho;
  std::optional<PureState> psi;
  OrthonormalBasis basis_a;
  OrthonormalBasis basis_b;
};

inline TrialInputs make_trial_inputs(int dim, std::uint64_t trial_seed, long long t) {
  std::optional<PureState> psi;
  std::optional<DensityMatrix> rho;
  if (t % 2 == 0) {
    psi = haar_random_state(dim, trial_seed);
    rho = DensityMatrix::pure(*psi);
  } else {
    const int rank = 2 + static_cast<int>((t / 2) % (dim - 1));
    rho = random_density(dim, rank, trial_seed);
  }
  OrthonormalBasis ba = random_basis(dim, trial_seed ^ 0x9e3779b97f4a7c15ULL);
  OrthonormalBasis bb = random_basis(dim, trial_seed ^ 0x517cc1b727220a95ULL);
  return TrialInputs{std::move(*rho), std::move(psi), std::move(ba), std::move(bb)};
}

/// Runs `body` over all trials, collecting the worst deviation. The body
/// returns the trial's deviation; throwing marks the identity failed with
/// the message and the trial seed in the note.
inline IdentityResult run_identity(
    const std::string& name, int trials, std::uint64_t seed, double tolerance,
    const std::function<double(std::uint64_t, long long)>& body) {
  IdentityResult res{name, 0.0, trials, true, ""};
  for (long long t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(t);
    double dev = 0.0;
    try {
      dev = body(trial_seed, t);
    } catch (const std::exception& e) {
      res.pass = false;
      res.max_deviation = std::numeric_limits<double>::infinity();
      res.note = "trial seed " + std::to_string(trial_seed) + " threw: " + e.what();
      return res;
    }
    if (dev > res.max_deviation) {
      res.max_deviation = dev;
      if (dev > tolerance)
        res.note = "worst trial seed " + std::to_string(trial_seed);
    }
  }
  res.pass = res.max_deviation <= tolerance;
  return res;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace detail

/// Runs every cross-module identity over `trials` seeded random states and
/// returns per-identity maximum deviations. `perturb`, when nonzero, scales
/// the cloning-channel output by (1 + perturb) inside the clone-roundtrip
/// identity only; it exists to prove the suite can fail.
inline VerifyReport run_identity_suite(int dim, int trials, std::uint64_t seed, double tolerance,
                                       double perturb = 0.0) {
  if (dim < 2) throw std::invalid_argument("run_identity_suite: dim must be >= 2");
  if (trials < 1) throw std::invalid_argument("run_identity_suite: trials must be >= 1");
  if (tolerance <= 0.0) throw std::invalid_argument("run_identity_suite: tolerance must be > 0");

  VerifyReport report{dim, trials, seed, tolerance, {}};
  const int d = dim;

  // Both partial traces of the coherence operator reproduce the state.
  report.identities.push_back(detail::run_identity(
      "coherence-partial-traces", trials, seed, tolerance, [d](std::uint64_t s, long long t) {
        const auto in = detail::make_trial_inputs(d, s, t);
        const BipartiteOperator c = coherence_operator(in.rho);
        const double dev1 = detail::max_abs(partial_trace(c, 1) - in.rho.matrix());
        const double dev2 = detail::max_abs(partial_trace(c, 2) - in.rho.matrix());
        return std::max(dev1, dev2);
      }));

  // Projecting both slots of the coherence operator onto one basis gives a
  // delta-correlated table: <a,a'|C|a,a'> = delta_{a,a'} |<a|psi>|^2.
  report.identities.push_back(detail::run_identity(
      "same-basis-correlation", trials, seed, tolerance, [d](std::uint64_t s, long long t) {
        const auto in = detail::make_trial_inputs(d, s, t);
        const BipartiteOperator c = coherence_operator(in.rho);
        double dev = 0.0;
        for (int a = 0; a < d; ++a)
          for (int ap = 0; ap < d; ++ap) {
            const Vector v = tensor(in.basis_a.vector(a), in.basis_a.vector(ap));
            const Complex got = v.dot(c.matrix() * v);
            const Complex want =
                a == ap ? in.basis_a.vector(a).dot(in.rho.matrix() * in.basis_a.vector(a))
                        : Complex(0.0, 0.0);
            dev = std::max(dev, std::abs(got - want));
          }
        return dev;
      }));

  // The direct formula <b|a><a|rho|b> agrees with the matrix elements
  // <a,b|C|a,b> of the coherence operator.
  report.identities.push_back(detail::run_identity(
      "kd-coherence-match", trials, seed, tolerance, [d](std::uint64_t s, long long t) {
        const auto in = detail::make_trial_inputs(d, s, t);
        const ComplexJointTable kd = kd_distribution(in.rho, in.basis_a, in.basis_b);
        const BipartiteOperator c = coherence_operator(in.rho);
        double dev = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const Vector v = tensor(in.basis_a.vector(a), in.basis_b.vector(b));
            dev = std::max(dev, std::abs(v.dot(c.matrix() * v) - kd.entry(a, b)));
          }
        return dev;
      }));

  // Cloner statistics invert back to Re kd after background subtraction, and
  // the reduced single-clone fidelity on pure inputs is (d+3)/(2(d+1)).
  report.identities.push_back(detail::run_identity(
      "clone-roundtrip", trials, seed, tolerance, [d, perturb](std::uint64_t s, long long t) {
        const auto in = detail::make_trial_inputs(d, s, t);
        CloneOutput clone = apply_clone_channel(in.rho);
        if (perturb != 0.0)
          clone = CloneOutput{BipartiteOperator(d, clone.state.matrix() * (1.0 + perturb))};
        const ProbTable p = clone_joint_probabilities(clone, in.basis_a, in.basis_b);
        const RealMatrix re_kd = background_subtract(p, d);
        const ComplexJointTable kd = kd_distribution(in.rho, in.basis_a, in.basis_b);
        double dev = (re_kd - kd.entries().real()).cwiseAbs().maxCoeff();
        if (in.psi) {
          const Matrix reduced = partial_trace(clone.state, 1);
          const double fidelity =
              in.psi->amplitudes().dot(reduced * in.psi->amplitudes()).real();
          dev = std::max(dev, std::abs(fidelity - (d + 3.0) / (2.0 * (d + 1.0))));
        }
        return dev;
      }));

  // Closed-form partial-swap channel equals conjugation by (I + iS)/sqrt(2),
  // and its diagonal matrix elements expose Im kd / d.
  report.identities.push_back(detail::run_identity(
      "partial-swap-oracle", trials, seed, tolerance, [d](std::uint64_t s, long long t) {
        const auto in = detail::make_trial_inputs(d, s, t);
        const BipartiteOperator closed = apply_partial_swap_channel(in.rho);
        const Matrix u = partial_swap_unitary(d).matrix();
        const Matrix x = tensor(in.rho.matrix(), Matrix::Identity(d, d)) / static_cast<double>(d);
        double dev = detail::max_abs(closed.matrix() - u * x * u.adjoint());
        const ComplexJointTable kd = kd_distribution(in.rho, in.basis_a, in.basis_b);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const Vector v = tensor(in.basis_a.vector(a), in.basis_b.vector(b));
            const double diag = v.dot(closed.matrix() * v).real();
            const double born_a =
                in.basis_a.vector(a).dot(in.rho.matrix() * in.basis_a.vector(a)).real();
            const double born_b =
                in.basis_b.vector(b).dot(in.rho.matrix() * in.basis_b.vector(b)).real();
            const double expected = (born_a + born_b + 2.0 * kd.entry(a, b).imag()) / (2.0 * d);
            dev = std::max(dev, std::abs(diag - expected));
          }
        return dev;
      }));

  // The controlled-swap circuit's X/Y control statistics reassemble the
  // complex joint table.
  report.identities.push_back(detail::run_identity(
      "cswap-extraction", trials, seed, tolerance, [d](std::uint64_t s, long long t) {
        const auto in = detail::make_trial_inputs(d, s, t);
        const CswapOutput out = controlled_swap_output(in.rho);
        const auto [px0, px1] = cswap_joint_probabilities(out, ControlAxis::X, in.basis_a, in.basis_b);
        const auto [py0, py1] = cswap_joint_probabilities(out, ControlAxis::Y, in.basis_a, in.basis_b);
        const ComplexJointTable got = extract_kd_from_cswap(px0, px1, py0, py1, d);
        const ComplexJointTable want = kd_distribution(in.rho, in.basis_a, in.basis_b);
        return detail::max_abs(got.entries() - want.entries());
      }));

  // Reconstruction from an exact table is the identity map on states. Uses
  // the computational/Fourier pair so every overlap is d^{-1/2}.
  report.identities.push_back(detail::run_identity(
      "reconstruction", trials, seed, tolerance, [d](std::uint64_t s, long long t) {
        const auto in = detail::make_trial_inputs(d, s, t);
        const ComplexJointTable kd =
            kd_distribution(in.rho, computational_basis(d), fourier_basis(d));
        const Reconstruction rec = reconstruct_density_matrix(kd);
        double dev = detail::max_abs(rec.matrix - in.rho.matrix());
        dev = std::max({dev, rec.hermiticity_error, rec.trace_error});
        return dev;
      }));

  return report;
}

}  // namespace kdtomo
