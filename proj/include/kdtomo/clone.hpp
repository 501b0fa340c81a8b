// SPDX-License-Identifier: Apache-2.0
//
// Optimal universal cloning and its relatives: the non-Hermitian coherence
// operator, the symmetric cloning channel, swap and partial-swap operations,
// and the controlled-swap circuit with a qubit control.
//
// Index conventions (repo-wide): system 1 is the left tensor factor of every
// bipartite operator (row = a*d + b); in the tripartite controlled-swap
// output the control qubit is the leftmost factor (row = c*d*d + a*d + b).
// The unknown state always enters system 1; system 2 starts maximally mixed.

#pragma once

#include "kdtomo/hilbert.hpp"
#include "kdtomo/tables.hpp"

#include <utility>

namespace kdtomo {

/// SWAP = Σ_{m,n} |m,n⟩⟨n,m|. Hermitian, unitary, involutive; eigenvalue +1
/// on the symmetric subspace (dimension d(d+1)/2), -1 on the antisymmetric.
inline BipartiteOperator swap_operator(int d) {
  if (d < 2) throw std::invalid_argument("swap_operator: d must be >= 2");
  Matrix s = Matrix::Zero(d * d, d * d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) s(m * d + n, n * d + m) = 1.0;
  return BipartiteOperator(d, std::move(s));
}

/// Coherence operator of a state: (ρ ⊗ I)·SWAP. For pure ρ = |ψ⟩⟨ψ| this
/// equals Σ_m |ψ⟩⟨m| ⊗ |m⟩⟨ψ| for any orthonormal {|m⟩}; the product form is
/// manifestly basis-free and extends linearly to mixed states. The result is
/// not Hermitian in general and is not a physical state on its own; both of
/// its partial traces equal ρ.
inline BipartiteOperator coherence_operator(const DensityMatrix& rho) {
  const int d = rho.dim();
  const Matrix rho_i = tensor(rho.matrix(), Matrix::Identity(d, d));
  return BipartiteOperator(d, rho_i * swap_operator(d).matrix());
}

/// Output of the optimal universal cloning channel on system1 (x) system2.
struct CloneOutput {
  BipartiteOperator state;
  int dim() const { return state.dim(); }
};

/// Optimal universal cloning channel:
///   E(ρ) = (ρ⊗I + I⊗ρ + C_ρ + C_ρ†) / (2(d+1)),   C_ρ = (ρ⊗I)·SWAP.
/// The output is a valid two-system density matrix supported on the
/// symmetric subspace; each reduced clone equals ((d+2)ρ + I)/(2(d+1)).
inline CloneOutput apply_clone_channel(const DensityMatrix& rho) {
  const int d = rho.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix c = coherence_operator(rho).matrix();
  Matrix out = tensor(rho.matrix(), id) + tensor(id, rho.matrix()) + c + c.adjoint();
  out /= 2.0 * (d + 1.0);
  return CloneOutput{BipartiteOperator(d, std::move(out))};
}

/// Trace weights of the two halves of the cloning output: the direct terms
/// (ρ⊗I + I⊗ρ)/(2(d+1)) carry total weight d/(d+1) and the coherence terms
/// (C + C†)/(2(d+1)) carry 1/(d+1).
inline std::pair<double, double> clone_decomposition_weights(int d) {
  if (d < 2) throw std::invalid_argument("clone_decomposition_weights: d must be >= 2");
  return {d / (d + 1.0), 1.0 / (d + 1.0)};
}

/// Partial swap U = (I + i·SWAP)/√2: unitary with eigenvalue (1+i)/√2 on the
/// symmetric subspace and (1-i)/√2 on the antisymmetric one. U² = i·SWAP, so
/// U is a square root of SWAP up to a global phase (the principal root from
/// unitary_sqrt differs from U by exactly that phase).
inline BipartiteOperator partial_swap_unitary(int d) {
  const int dd = d * d;
  const Matrix s = swap_operator(d).matrix();
  Matrix u = (Matrix::Identity(dd, dd) + Complex(0.0, 1.0) * s) / std::sqrt(2.0);
  return BipartiteOperator(d, std::move(u));
}

/// Partial-swap channel output, closed form:
///   U (ρ ⊗ I/d) U† = (ρ⊗I + I⊗ρ − i(C_ρ − C_ρ†)) / (2d).
/// The closed form is the implementation; conjugating by partial_swap_unitary
/// is the independent route used by tests. Diagonal matrix elements at
/// |a,b⟩ read (⟨a|ρ|a⟩ + ⟨b|ρ|b⟩ + 2·Im kd(a,b)) / (2d).
inline BipartiteOperator apply_partial_swap_channel(const DensityMatrix& rho) {
  const int d = rho.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix c = coherence_operator(rho).matrix();
  Matrix out = tensor(rho.matrix(), id) + tensor(id, rho.matrix()) -
               Complex(0.0, 1.0) * (c - c.adjoint());
  out /= 2.0 * d;
  return BipartiteOperator(d, std::move(out));
}

/// Full tripartite state after the controlled-swap circuit, on
/// control (x) system1 (x) system2 (dimension 2d²).
struct CswapOutput {
  int dim;  // per-system dimension d; the stored matrix is 2d² x 2d²
  Matrix state;
};

/// Controlled-swap circuit: control prepared in (|0_z⟩+|1_z⟩)/√2, system 1
/// carries ρ, system 2 the maximally mixed state; CSWAP = |0_z⟩⟨0_z|⊗I +
/// |1_z⟩⟨1_z|⊗SWAP. With X = ρ⊗I/d the output has the 2x2 block form
///   (1/2) [ X    X·S ]
///         [ S·X  S·X·S ]
/// whose off-diagonal blocks hold the interference terms read out below.
inline CswapOutput controlled_swap_output(const DensityMatrix& rho) {
  const int d = rho.dim();
  const int dd = d * d;
  const Matrix x = tensor(rho.matrix(), Matrix::Identity(d, d)) / static_cast<double>(d);
  const Matrix s = swap_operator(d).matrix();
  Matrix out(2 * dd, 2 * dd);
  out.block(0, 0, dd, dd) = 0.5 * x;
  out.block(0, dd, dd, dd) = 0.5 * (x * s);
  out.block(dd, 0, dd, dd) = 0.5 * (s * x);
  out.block(dd, dd, dd, dd) = 0.5 * (s * x * s);
  return CswapOutput{d, std::move(out)};
}

/// Readout basis for the control qubit.
enum class ControlAxis { X, Y };

/// Control readout vectors, columns |0_axis⟩ and |1_axis⟩ in the z basis:
///   |0_x⟩ = (|0_z⟩ + |1_z⟩)/√2,    |1_x⟩ = (|0_z⟩ − |1_z⟩)/√2
///   |0_y⟩ = (|0_z⟩ − i|1_z⟩)/√2,   |1_y⟩ = (|0_z⟩ + i|1_z⟩)/√2
/// The Y labels are fixed so the outcome differences read out the two parts
/// of kd(a,b) = ⟨b|a⟩⟨a|ρ|b⟩ with matching signs under this library's state
/// placement (ρ in system 1, noise in system 2):
///   d·(p(0_x,a,b) − p(1_x,a,b)) = Re kd(a,b)
///   d·(p(0_y,a,b) − p(1_y,a,b)) = Im kd(a,b)
/// Swapping either Y label or the two system slots flips the Im sign.
inline Matrix control_basis(ControlAxis axis) {
  Matrix m(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  if (axis == ControlAxis::X) {
    m << Complex(r, 0), Complex(r, 0), Complex(r, 0), Complex(-r, 0);
  } else {
    m << Complex(r, 0), Complex(r, 0), Complex(0, -r), Complex(0, r);
  }
  return m;
}

inline std::string control_tag(ControlAxis axis, int outcome) {
  return std::string(outcome == 0 ? "0" : "1") + (axis == ControlAxis::X ? "x" : "y");
}

/// Joint probabilities p(c, a, b) = ⟨c, a, b| out |c, a, b⟩ for the two
/// control outcomes along the given axis, with systems 1 and 2 projected
/// onto basis_a and basis_b. The two returned tables sum to 1 jointly.
inline std::pair<ProbTable, ProbTable> cswap_joint_probabilities(
    const CswapOutput& out, ControlAxis axis, const OrthonormalBasis& basis_a,
    const OrthonormalBasis& basis_b) {
  const int d = out.dim;
  if (basis_a.dim() != d || basis_b.dim() != d)
    throw std::invalid_argument("cswap_joint_probabilities: basis dimension mismatch");
  const Matrix ctrl = control_basis(axis);
  RealMatrix table[2] = {RealMatrix(d, d), RealMatrix(d, d)};
  for (int c = 0; c < 2; ++c) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Vector v = tensor(Vector(ctrl.col(c)), tensor(basis_a.vector(a), basis_b.vector(b)));
        table[c](a, b) = v.dot(out.state * v).real();
      }
  }
  return {ProbTable(std::move(table[0]), basis_a, basis_b, control_tag(axis, 0)),
          ProbTable(std::move(table[1]), basis_a, basis_b, control_tag(axis, 1))};
}

}  // namespace kdtomo
