// SPDX-License-Identifier: Apache-2.0
//
// Probability table containers and the finite-shot sampling layer.

#include "kdtomo/tables.hpp"

#include "kdtomo/kd.hpp"
#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace kdtomo;

TEST_CASE("ProbTable validates and exposes its contents", "[tables]") {
  RealMatrix m(2, 2);
  m << 0.5, 0.25, 0.25, 0.0;
  const ProbTable p(m, computational_basis(2), fourier_basis(2), "0x");
  REQUIRE(p.dim() == 2);
  REQUIRE(p.sum() == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(p.marginal_a()(0) == Catch::Approx(0.75).margin(1e-15));
  REQUIRE(p.marginal_b()(0) == Catch::Approx(0.75).margin(1e-15));
  REQUIRE(*p.control_tag() == "0x");
  REQUIRE(p.basis_b()->label() == "fourier");

  RealMatrix bad(2, 2);
  bad << 0.5, 0.5, 0.5, -0.5;
  REQUIRE_THROWS_AS(ProbTable(bad), std::invalid_argument);
  REQUIRE_THROWS_AS(ProbTable(RealMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("ComplexJointTable exposes entries and marginals", "[tables]") {
  Matrix e(2, 2);
  e << Complex(0.5, 0), Complex(0.25, 0.25), Complex(0.25, -0.25), Complex(0, 0);
  const ComplexJointTable t(e, computational_basis(2), computational_basis(2));
  REQUIRE(t.dim() == 2);
  REQUIRE(std::abs(t.sum() - Complex(1, 0)) < 1e-15);
  REQUIRE(std::abs(t.marginal_a(0) - Complex(0.75, 0.25)) < 1e-15);
  REQUIRE(std::abs(t.marginal_b(1) - Complex(0.25, 0.25)) < 1e-15);
  REQUIRE_THROWS_AS(ComplexJointTable(Matrix::Zero(2, 3), computational_basis(2),
                                      computational_basis(2)),
                    std::invalid_argument);
}

TEST_CASE("sample_table is deterministic in the seed", "[tables]") {
  const ProbTable p = clone_joint_probabilities(
      apply_clone_channel(random_density(2, 2, 560)), computational_basis(2), fourier_basis(2));

  const ProbTable s1 = sample_table(p, 10000, 99);
  const ProbTable s2 = sample_table(p, 10000, 99);
  REQUIRE((s1.entries() - s2.entries()).cwiseAbs().maxCoeff() == 0.0);

  const ProbTable s3 = sample_table(p, 10000, 100);
  REQUIRE((s1.entries() - s3.entries()).cwiseAbs().maxCoeff() > 0.0);

  REQUIRE(s1.sum() == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(s1.basis_a().has_value());
}

TEST_CASE("sample_table concentrates on the true table", "[tables]") {
  const ProbTable p = clone_joint_probabilities(
      apply_clone_channel(DensityMatrix::pure(haar_random_state(3, 561))),
      computational_basis(3), fourier_basis(3));
  const ProbTable s = sample_table(p, 1000000, 7);
  REQUIRE((s.entries() - p.entries()).cwiseAbs().maxCoeff() < 5e-3);
}

TEST_CASE("sample_table rejects pathological requests", "[tables]") {
  RealMatrix half(2, 2);
  half << 0.25, 0.25, 0.0, 0.0;
  REQUIRE_THROWS_AS(sample_table(ProbTable(half), 100, 1), MalformedTable);
  RealMatrix ok = RealMatrix::Constant(2, 2, 0.25);
  REQUIRE_THROWS_AS(sample_table(ProbTable(ok), 0, 1), std::invalid_argument);
}

TEST_CASE("sample_table_pair draws one joint experiment per shot", "[tables]") {
  const CswapOutput out = controlled_swap_output(DensityMatrix::pure(haar_random_state(2, 562)));
  const auto [p0, p1] = cswap_joint_probabilities(out, ControlAxis::X, computational_basis(2),
                                                  fourier_basis(2));
  const long long shots = 200000;
  const auto [s0, s1] = sample_table_pair(p0, p1, shots, 17);

  REQUIRE(s0.sum() + s1.sum() == Catch::Approx(1.0).margin(1e-12));
  REQUIRE((s0.entries() - p0.entries()).cwiseAbs().maxCoeff() < 5e-3);
  REQUIRE((s1.entries() - p1.entries()).cwiseAbs().maxCoeff() < 5e-3);
  REQUIRE(*s0.control_tag() == "0x");
  REQUIRE(*s1.control_tag() == "1x");

  const auto [t0, t1] = sample_table_pair(p0, p1, shots, 17);
  REQUIRE((s0.entries() - t0.entries()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((s1.entries() - t1.entries()).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE_THROWS_AS(sample_table_pair(p0, p0, shots, 17), MalformedTable);
}
