// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one numbered check per release criterion, one line of
// output each, exit 0 only if every criterion passes. Runs from a fixed seed
// set so the numbers are reproducible run to run.

#include "kdtomo/kdtomo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace kdtomo;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

DensityMatrix trial_state(int d, int t, std::uint64_t seed, bool mixed) {
  return mixed ? random_density(d, 2 + t % (d - 1), seed)
               : DensityMatrix::pure(haar_random_state(d, seed));
}

// --- criterion 1: both partial traces of the coherence operator ------------

void criterion_partial_traces() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (int t = 0; t < 200; ++t) {
      const bool mixed = t >= 100;
      const DensityMatrix rho = trial_state(d, t, 10000 + 200 * d + t, mixed);
      const BipartiteOperator c = coherence_operator(rho);
      worst = std::max(worst, max_abs_diff(partial_trace(c, 1), rho.matrix()));
      worst = std::max(worst, max_abs_diff(partial_trace(c, 2), rho.matrix()));
    }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = worst < 1e-12 && seconds < 5.0;
  report(1, pass,
         "partial traces of the coherence operator: max deviation " + fmt(worst) +
             " over 800 states, d in {2..5}, " + fmt(seconds) + " s");
}

// --- criterion 2: same-basis joint projection is delta-correlated ----------

void criterion_same_basis() {
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (int t = 0; t < 100; ++t) {
      const std::uint64_t seed = 20000 + 100 * d + t;
      const PureState psi = haar_random_state(d, seed);
      const Matrix c = coherence_operator(DensityMatrix::pure(psi)).matrix();
      const OrthonormalBasis basis = random_basis(d, seed + 7);
      for (int a = 0; a < d; ++a)
        for (int ap = 0; ap < d; ++ap) {
          const Vector v = tensor(basis.vector(a), basis.vector(ap));
          const Complex want = a == ap
              ? Complex(std::norm(basis.vector(a).dot(psi.amplitudes())), 0.0)
              : Complex(0.0, 0.0);
          worst = std::max(worst, std::abs(v.dot(c * v) - want));
        }
    }
  report(2, worst < 1e-12,
         "same-basis projection delta law: max deviation " + fmt(worst) +
             " over 100 trials per d");
}

// --- criterion 3: joint table from the operator equals the direct formula --

void criterion_kd_equivalence() {
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (int t = 0; t < 100; ++t) {
      const std::uint64_t seed = 30000 + 100 * d + t;
      const DensityMatrix rho = trial_state(d, t, seed, t % 2 == 1);
      const OrthonormalBasis ba = random_basis(d, seed + 11);
      const OrthonormalBasis bb = random_basis(d, seed + 13);
      const Matrix c = coherence_operator(rho).matrix();
      const ComplexJointTable kd = kd_distribution(rho, ba, bb);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const Vector v = tensor(ba.vector(a), bb.vector(b));
          worst = std::max(worst, std::abs(v.dot(c * v) - kd.entry(a, b)));
        }
    }
  report(3, worst < 1e-12,
         "operator matrix elements vs direct joint table: max deviation " + fmt(worst));
}

// --- criterion 4: cloner statistics round trip and fidelity ----------------

void criterion_clone_roundtrip() {
  double worst_re = 0.0;
  double worst_fid = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (int t = 0; t < 40; ++t) {
      const std::uint64_t seed = 40000 + 100 * d + t;
      const bool mixed = t % 2 == 1;
      const DensityMatrix rho = trial_state(d, t, seed, mixed);
      const OrthonormalBasis ba = random_basis(d, seed + 17);
      const OrthonormalBasis bb = random_basis(d, seed + 19);
      const CloneOutput out = apply_clone_channel(rho);
      const ProbTable p = clone_joint_probabilities(out, ba, bb);
      const RealMatrix re = background_subtract(p, d);
      const ComplexJointTable kd = kd_distribution(rho, ba, bb);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          worst_re = std::max(worst_re, std::abs(re(a, b) - kd.entry(a, b).real()));
      if (!mixed) {
        const PureState psi = haar_random_state(d, seed);
        for (int keep : {1, 2}) {
          const Matrix reduced = partial_trace(out.state, keep);
          const double fid = psi.amplitudes().dot(reduced * psi.amplitudes()).real();
          worst_fid = std::max(worst_fid, std::abs(fid - (d + 3.0) / (2.0 * (d + 1.0))));
        }
      }
    }
  const bool pass = worst_re < 1e-10 && worst_fid < 1e-12;
  report(4, pass,
         "clone statistics round trip: max real-part deviation " + fmt(worst_re) +
             ", max fidelity deviation " + fmt(worst_fid));
}

// --- criterion 5: partial-swap closed form vs unitary conjugation ----------

void criterion_partial_swap() {
  double worst_op = 0.0;
  double worst_diag = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (int t = 0; t < 40; ++t) {
      const std::uint64_t seed = 50000 + 100 * d + t;
      const DensityMatrix rho = trial_state(d, t, seed, t % 2 == 1);
      const Matrix closed = apply_partial_swap_channel(rho).matrix();
      const Matrix u = partial_swap_unitary(d).matrix();
      const Matrix x = tensor(rho.matrix(), Matrix::Identity(d, d)) / static_cast<double>(d);
      worst_op = std::max(worst_op, max_abs_diff(closed, u * x * u.adjoint()));

      const OrthonormalBasis ba = random_basis(d, seed + 23);
      const OrthonormalBasis bb = random_basis(d, seed + 29);
      const ComplexJointTable kd = kd_distribution(rho, ba, bb);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const Vector v = tensor(ba.vector(a), bb.vector(b));
          const double born_a = ba.vector(a).dot(rho.matrix() * ba.vector(a)).real();
          const double born_b = bb.vector(b).dot(rho.matrix() * bb.vector(b)).real();
          const double want = (born_a + born_b) / (2.0 * d) + kd.entry(a, b).imag() / d;
          worst_diag = std::max(worst_diag, std::abs(v.dot(closed * v).real() - want));
        }
    }
  const bool pass = worst_op < 1e-12 && worst_diag < 1e-10;
  report(5, pass,
         "partial swap closed form vs conjugation: max operator deviation " + fmt(worst_op) +
             ", max diagonal deviation " + fmt(worst_diag));
}

// --- criterion 6: controlled-swap extraction and reconstruction ------------

void criterion_cswap_reconstruction() {
  double worst_extract = 0.0;
  double worst_rec = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (int t = 0; t < 10; ++t) {
      const std::uint64_t seed = 60000 + 100 * d + t;
      const DensityMatrix rho = trial_state(d, t, seed, t % 2 == 1);
      const OrthonormalBasis ba = computational_basis(d);
      const OrthonormalBasis bb = fourier_basis(d);
      const CswapOutput out = controlled_swap_output(rho);
      const auto [px0, px1] = cswap_joint_probabilities(out, ControlAxis::X, ba, bb);
      const auto [py0, py1] = cswap_joint_probabilities(out, ControlAxis::Y, ba, bb);
      const ComplexJointTable extracted = extract_kd_from_cswap(px0, px1, py0, py1, d);
      const ComplexJointTable direct = kd_distribution(rho, ba, bb);
      worst_extract =
          std::max(worst_extract, max_abs_diff(extracted.entries(), direct.entries()));
      const Reconstruction rec = reconstruct_density_matrix(extracted);
      worst_rec = std::max(worst_rec, max_abs_diff(rec.matrix, rho.matrix()));
    }
  const bool pass = worst_extract < 1e-10 && worst_rec < 1e-10;
  report(6, pass,
         "controlled-swap extraction and reconstruction: max table deviation " +
             fmt(worst_extract) + ", max state deviation " + fmt(worst_rec) +
             ", d in {2..5}, computational/Fourier bases");
}

// --- criterion 7: pointer-model convergence and anomalous preset -----------

void criterion_weak_convergence() {
  Vector amp(2);
  amp << Complex(1, 0), Complex(1, 0);
  const PureState psi = PureState::normalized(std::move(amp));
  Matrix bvecs(2, 2);
  bvecs << Complex(2, 0), Complex(1, 0), Complex(-1, 0), Complex(2, 0);
  bvecs /= std::sqrt(5.0);
  const OrthonormalBasis skew(std::move(bvecs), "skewed");
  const Vector post = skew.vector(0);
  const OrthonormalBasis z = computational_basis(2);

  // Hand-derived weak values for this preset: 2 for |0><0|, 3 for sigma_z.
  const Complex w_proj(2.0, 0.0);
  const Complex w_sigma(3.0, 0.0);

  const Complex v_full =
      pointer_weak_value_estimate(WeakMeasConfig(0.05, z, 0, psi, post));
  const Complex v_half =
      pointer_weak_value_estimate(WeakMeasConfig(0.025, z, 0, psi, post));
  const double ratio = std::abs(v_full - w_proj) / std::abs(v_half - w_proj);

  const Complex ext_p0 = weak_limit_extrapolate(WeakMeasConfig(0.05, z, 0, psi, post));
  const Complex ext_p1 = weak_limit_extrapolate(WeakMeasConfig(0.05, z, 1, psi, post));
  const Complex ext_sigma = ext_p0 - ext_p1;
  const double err_proj = std::abs(ext_p0 - w_proj);
  const double err_sigma = std::abs(ext_sigma - w_sigma);

  const bool pass = ratio >= 3.0 && ratio <= 5.0 && err_proj < 1e-4 && err_sigma < 1e-4;
  report(7, pass,
         "pointer-model convergence: halving ratio " + fmt(ratio) +
             ", extrapolated errors " + fmt(err_sigma) + " (sigma_z -> 3) and " +
             fmt(err_proj) + " (projector -> 2) at theta = 0.05");
}

// --- criterion 8: negative real part in the skewed-basis preset ------------

void criterion_negativity() {
  Vector amp(2);
  amp << Complex(1, 0), Complex(1, 0);
  const PureState psi = PureState::normalized(std::move(amp));
  Matrix bvecs(2, 2);
  bvecs << Complex(2, 0), Complex(1, 0), Complex(-1, 0), Complex(2, 0);
  bvecs /= std::sqrt(5.0);
  const OrthonormalBasis skew(std::move(bvecs), "skewed");
  const ComplexJointTable kd =
      kd_distribution(DensityMatrix::pure(psi), computational_basis(2), skew);
  const NegativityReport rep = negativity_report(kd);
  const double dev = std::abs(rep.min_re - (-0.1));
  const bool pass = dev < 1e-12 && rep.min_re_a == 1 && rep.min_re_b == 0 &&
                    rep.negative_count == 1;
  report(8, pass,
         "negativity preset: min real part " + fmt(rep.min_re) + " at (a=" +
             std::to_string(rep.min_re_a) + ",b=" + std::to_string(rep.min_re_b) +
             "), deviation from -1/10 " + fmt(dev));
}

// --- criterion 9: finite-shot tomography at d = 2 ---------------------------

Matrix sampled_reconstruction(const DensityMatrix& rho, long long shots_per_axis,
                              std::uint64_t seed) {
  const OrthonormalBasis ba = computational_basis(2);
  const OrthonormalBasis bb = fourier_basis(2);
  const CswapOutput out = controlled_swap_output(rho);
  const auto [px0, px1] = cswap_joint_probabilities(out, ControlAxis::X, ba, bb);
  const auto [py0, py1] = cswap_joint_probabilities(out, ControlAxis::Y, ba, bb);
  const auto [sx0, sx1] = sample_table_pair(px0, px1, shots_per_axis, seed);
  const auto [sy0, sy1] = sample_table_pair(py0, py1, shots_per_axis, seed + 1);
  return reconstruct_density_matrix(extract_kd_from_cswap(sx0, sx1, sy0, sy1, 2)).matrix;
}

void criterion_finite_shots() {
  const DensityMatrix rho = DensityMatrix::pure(haar_random_state(2, 90001));
  // Two tables per axis pair, sampled jointly: 2e6 shots per axis keeps the
  // per-table budget at the required 1e6.
  const long long shots_per_axis = 2000000;
  const Matrix first = sampled_reconstruction(rho, shots_per_axis, 90100);
  const Matrix second = sampled_reconstruction(rho, shots_per_axis, 90100);
  const double dev = max_abs_diff(first, rho.matrix());
  const double rerun = max_abs_diff(first, second);
  const bool pass = dev < 1e-2 && rerun == 0.0;
  report(9, pass,
         "finite-shot tomography: max deviation " + fmt(dev) +
             " at 1e6 samples per table, rerun difference " + fmt(rerun));
}

}  // namespace

int main() {
  criterion_partial_traces();
  criterion_same_basis();
  criterion_kd_equivalence();
  criterion_clone_roundtrip();
  criterion_partial_swap();
  criterion_cswap_reconstruction();
  criterion_weak_convergence();
  criterion_negativity();
  criterion_finite_shots();
  if (g_failures == 0) {
    std::printf("acceptance: 9/9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
