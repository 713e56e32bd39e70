// Copyright 2026 The Supermap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_util.hpp"

namespace supermap {
namespace {

// E -> E o C: Kraus I (x) C_j^T.
Supermap pre_processing(const KrausSet& c) {
  std::vector<Matrix> kraus;
  const std::size_t h_out = 2;
  for (const auto& cj : c.operators) {
    kraus.push_back(kron(identity(h_out), cj.transpose()));
  }
  return Supermap({c.dim_out, h_out, c.dim_in, h_out}, std::move(kraus));
}

// E -> D o E: Kraus D_k (x) I.
Supermap post_processing(const KrausSet& d, std::size_t h_in) {
  std::vector<Matrix> kraus;
  for (const auto& dk : d.operators) kraus.push_back(kron(dk, identity(h_in)));
  return Supermap({h_in, d.dim_in, h_in, d.dim_out}, std::move(kraus));
}

// Every input state is replaced by |psi> before E acts; the B register
// carries K_in to the output ancilla A, which is discarded.
Supermap fixed_input(std::size_t d, const Vector& psi) {
  CircuitRealization c;
  c.dim_b = d;
  c.dim_a = d;
  c.v = kron(identity(d), Matrix(psi));
  c.w = identity(d * d);
  return circuit_to_supermap(c, {d, d, d, d}).front();
}

Matrix random_choi(std::size_t dim, std::uint64_t seed) {
  const Matrix g = random_gaussian(dim, dim, seed);
  return g * g.adjoint();
}

Matrix effect_residual(const Supermap& s, const EffectMap& n, const Matrix& e) {
  const auto& d = s.dims();
  const Matrix lhs =
      partial_trace(apply_to_choi(s, e), TensorShape{d.k_out, d.k_in}, {1});
  const Matrix rhs = n.apply(partial_trace(e, TensorShape{d.h_out, d.h_in}, {1}));
  return lhs - rhs;
}

TEST_CASE("Supermap construction", "[supermap]") {
  CHECK_THROWS_AS(Supermap({2, 2, 2, 2}, {}), ValidationError);
  CHECK_THROWS_AS(Supermap({2, 2, 2, 2}, {identity(3)}), DimensionError);
  CHECK_THROWS_AS(Supermap({0, 2, 2, 2}, {identity(4)}), DimensionError);
}

TEST_CASE("apply_supermap", "[supermap]") {
  const auto e = random_channel(2, 2, 2, 5);
  const Supermap id = identity_supermap(2, 2);
  CHECK(approx_equal(apply_supermap(id, e).choi(), e.choi(), 1e-14));

  SECTION("unitary sandwich matches composition") {
    const Matrix a = random_unitary(2, 1);
    const Matrix b = random_unitary(2, 2);
    const Supermap s({2, 2, 2, 2}, {kron(a, b.transpose())});
    const auto expected =
        compose(unitary_channel(a), compose(e, unitary_channel(b)));
    CHECK(relative_distance(apply_supermap(s, e).choi(), expected.choi()) <=
          1e-8);
    // Same identity on every element of an operator basis.
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        const Matrix unit = matrix_unit(4, i, j);
        const Matrix oracle = choi_from_action(2, 2, [&](const Matrix& x) {
          const Matrix mid = apply_choi(unit, 2, 2, b * x * b.adjoint());
          return Matrix(a * mid * a.adjoint());
        });
        CHECK((apply_to_choi(s, unit) - oracle).norm() <= 1e-12);
      }
    }
  }

  SECTION("scaling halves the Choi operator") {
    const Supermap half({2, 2, 2, 2}, {std::sqrt(0.5) * identity(4)});
    const auto out = apply_supermap(half, e);
    CHECK(approx_equal(out.choi(), 0.5 * e.choi(), 1e-14));
    CHECK_FALSE(is_channel(out));
  }

  CHECK_THROWS_AS(apply_supermap(id, random_channel(3, 2, 2, 1)),
                  DimensionError);
}

TEST_CASE("dual_supermap", "[supermap]") {
  const Supermap id = identity_supermap(2, 3);
  const Matrix o = random_gaussian(6, 6, 3);
  CHECK(approx_equal(dual_supermap(id, o), o, 0.0));
  const Supermap half({2, 3, 2, 3}, {std::sqrt(0.5) * identity(6)});
  CHECK(approx_equal(dual_supermap(half, o), 0.5 * o, 1e-14));

  // Tr[C S(E)] == Tr[S_*(C) E] over random instances of dims 2-3.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SupermapDims d{2 + seed % 2, 2 + (seed / 2) % 2, 2 + (seed / 4) % 2,
                         2 + (seed / 8) % 2};
    std::vector<Matrix> kraus;
    for (std::size_t i = 0; i < 1 + seed % 3; ++i) {
      kraus.push_back(
          random_gaussian(d.output_dim(), d.input_dim(), 1000 * seed + i));
    }
    const Supermap s(d, kraus);
    const Matrix c = random_gaussian(d.output_dim(), d.output_dim(), 7 * seed);
    const Matrix e = random_gaussian(d.input_dim(), d.input_dim(), 7 * seed + 1);
    const Complex lhs = (c * apply_to_choi(s, e)).trace();
    const Complex rhs = (dual_supermap(s, c) * e).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
  }

  CHECK_THROWS_AS(dual_supermap(id, identity(4)), DimensionError);
}

TEST_CASE("is_normalization_functional", "[supermap]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix rho = random_density_matrix(3, seed);
    const auto r = is_normalization_functional(kron(identity(2), rho), 2, 3);
    CHECK(r.valid);
    CHECK(relative_distance(r.rho, rho) <= 1e-12);
    // Tr[(I (x) rho) E] = 1 for channel Choi operators.
    for (std::uint64_t k = 0; k < 5; ++k) {
      const auto e = random_channel(3, 2, 2, 100 * seed + k);
      CHECK(std::abs((kron(identity(2), rho) * e.choi()).trace() - 1.0) <= 1e-8);
    }
  }

  const Matrix rho = random_density_matrix(2, 42);
  CHECK_FALSE(is_normalization_functional(kron(rho, identity(2)), 2, 2).valid);

  const auto e = random_channel(2, 2, 2, 43);
  const auto verdict = is_normalization_functional(e.choi(), 2, 2);
  CHECK_FALSE(verdict.valid);
  CHECK(verdict.residual > 1e-3);

  // Right form, wrong normalization.
  CHECK_FALSE(
      is_normalization_functional(kron(identity(2), 2.0 * rho), 2, 2).valid);
}

TEST_CASE("is_deterministic", "[supermap]") {
  CHECK(is_deterministic(identity_supermap(2, 2)));
  CHECK(is_deterministic(identity_supermap(3, 1)));
  const Supermap half({2, 2, 2, 2}, {std::sqrt(0.5) * identity(4)});
  CHECK_FALSE(is_deterministic(half));
  CHECK_FALSE(check_determinism_via_effects(half).deterministic);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Supermap s = random_deterministic_supermap({2, 2, 2, 2}, 2, 3, seed);
    CHECK(is_deterministic(s));
    CHECK(check_determinism_via_effects(s).deterministic);
  }

  // Determinism is cached and shared across copies.
  const Supermap s = random_deterministic_supermap({2, 3, 2, 2}, 2, 3, 77);
  const Supermap copy = s;
  CHECK(&s.determinism() == &copy.determinism());
}

TEST_CASE("effect_map_of", "[supermap]") {
  SECTION("identity supermap") {
    const auto n = effect_map_of(identity_supermap(2, 3));
    REQUIRE(n.kraus.size() == 1);
    CHECK(approx_equal(n.kraus[0], identity(2), 1e-12));
  }

  SECTION("pre-processing by a channel") {
    const KrausSet c = random_kraus(3, 2, 2, 11);
    const Supermap s = pre_processing(c);
    const auto n = effect_map_of(s);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        const Matrix p = matrix_unit(2, a, b);
        Matrix expected = Matrix::Zero(3, 3);
        for (const auto& cj : c.operators)
          expected += cj.transpose() * p * cj.conjugate();
        CHECK((n.apply(p) - expected).norm() <= 1e-10);
      }
    }
    for (std::size_t i = 0; i < 16; ++i) {
      const Matrix e = matrix_unit(4, i / 4, i % 4);
      CHECK(effect_residual(s, n, e).norm() <= 1e-8);
    }
  }

  SECTION("post-processing by a channel") {
    const KrausSet d = random_kraus(2, 3, 2, 12);
    const Supermap s = post_processing(d, 2);
    const auto n = effect_map_of(s);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        CHECK((n.apply(matrix_unit(2, a, b)) - matrix_unit(2, a, b)).norm() <=
              1e-10);
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK(effect_residual(s, n, matrix_unit(4, i / 4, i % 4)).norm() <= 1e-8);
    }
  }

  SECTION("random circuit fixtures satisfy the effect relation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Supermap s = random_deterministic_supermap({2, 3, 3, 2}, 2, 3, seed);
      const auto n = effect_map_of(s);
      CHECK(n.apply(identity(2)).isApprox(identity(3), 1e-10));
      const Matrix e = random_choi(6, seed + 300);
      CHECK(effect_residual(s, n, e).norm() <= 1e-8 * std::max(1.0, e.norm()));
    }
  }

  const Supermap half({2, 2, 2, 2}, {std::sqrt(0.5) * identity(4)});
  CHECK_THROWS_AS(effect_map_of(half), NotDeterministicError);
}

TEST_CASE("is_probability_preserving", "[supermap]") {
  CHECK(is_probability_preserving(identity_supermap(2, 3)));
  CHECK(is_probability_preserving(post_processing(random_kraus(2, 2, 3, 1), 2)));

  Vector psi = Vector::Zero(2);
  psi(0) = 1.0;
  const Supermap feed = fixed_input(2, psi);
  REQUIRE(is_deterministic(feed));
  CHECK_FALSE(is_probability_preserving(feed));
  // A measurement that never fires on |0> becomes impossible everywhere.
  const QuantumOperation never(2, 2, kron(matrix_unit(2, 1, 1),
                                          matrix_unit(2, 1, 1)));
  const auto out = apply_supermap(feed, never);
  CHECK(effect_of(out).norm() < 1e-12);
  CHECK(effect_of(never).norm() > 0.5);

  CHECK_THROWS_AS(is_probability_preserving(
                      random_deterministic_supermap({2, 2, 3, 2}, 2, 2, 3)),
                  DimensionError);
  const Supermap half({2, 2, 2, 2}, {std::sqrt(0.5) * identity(4)});
  CHECK_THROWS_AS(is_probability_preserving(half), NotDeterministicError);
}

TEST_CASE("dual and effect determinism tests agree", "[supermap][property]") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SupermapDims d{2, 2, 1 + seed % 3, 2};
    const Supermap s = random_deterministic_supermap(d, 2, 2, seed);
    CHECK(check_determinism(s).deterministic ==
          check_determinism_via_effects(s).deterministic);

    std::vector<Matrix> kraus = s.kraus();
    kraus[0] += 0.05 * random_gaussian(kraus[0].rows(), kraus[0].cols(),
                                       seed + 900);
    const Supermap perturbed(d, kraus);
    CHECK_FALSE(check_determinism(perturbed).deterministic);
    CHECK_FALSE(check_determinism_via_effects(perturbed).deterministic);
  }
}

TEST_CASE("deterministic supermaps send channels to channels",
          "[supermap][property]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Supermap s = random_deterministic_supermap({2, 2, 3, 2}, 2, 2, seed);
    const auto e = random_channel(2, 2, 1 + seed % 4, seed + 40);
    CHECK(is_channel(apply_supermap(s, e)));
  }
}

TEST_CASE("tensor_supermaps", "[supermap]") {
  const Supermap id22 = identity_supermap(2, 2);
  CHECK(extensionally_equal(tensor_supermaps(id22, id22),
                            identity_supermap(4, 4)));

  SECTION("local action on product operations") {
    const Supermap a = random_deterministic_supermap({2, 2, 2, 2}, 2, 2, 5);
    const Supermap local = tensor_supermaps(a, identity_supermap(2, 2));
    const auto e = random_channel(2, 2, 2, 6);
    const auto f = random_channel(2, 2, 2, 7);
    const auto lhs = apply_supermap(local, tensor(e, f));
    const auto rhs = tensor(apply_supermap(a, e), f);
    CHECK(relative_distance(lhs.choi(), rhs.choi()) <= 1e-8);
  }

  SECTION("factorized oracle on a generic bipartite operator") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto make = [](std::uint64_t sd) {
        const Matrix u = random_unitary(2, sd);
        const Matrix v = random_unitary(2, sd + 1);
        return Supermap({2, 2, 2, 2}, {kron(u, v.transpose())});
      };
      const Supermap a = make(10 * seed);
      const Supermap b = make(10 * seed + 5);
      const Supermap ab = tensor_supermaps(a, b);
      // Operator on (out_a, out_b, in_a, in_b).
      const Matrix x = random_gaussian(16, 16, seed + 60);
      const TensorShape canonical{2, 2, 2, 2};
      const Matrix split = permute_systems(x, canonical, {0, 2, 1, 3});
      Matrix expected_split = Matrix::Zero(16, 16);
      for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
          const Matrix unit = matrix_unit(4, std::size_t(i), std::size_t(j));
          expected_split += kron(apply_to_choi(a, unit),
                                 apply_to_choi(b, split.block(4 * i, 4 * j, 4, 4)));
        }
      }
      const Matrix expected =
          permute_systems(expected_split, canonical, {0, 2, 1, 3});
      CHECK(relative_distance(apply_to_choi(ab, x), expected) <= 1e-8);
    }
  }

  SECTION("local application preserves complete positivity") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Supermap s = random_deterministic_supermap({2, 2, 2, 2}, 2, 2, seed);
      const Supermap local = tensor_supermaps(s, identity_supermap(2, 2));
      const auto joint = random_channel(4, 4, 3, seed + 20);
      const Matrix out = apply_to_choi(local, joint.choi());
      CHECK(is_positive_semidefinite(out));
      CHECK(is_channel(QuantumOperation(4, 4, out)));
    }
  }
}

TEST_CASE("sum_supermaps", "[supermap]") {
  const Supermap s = random_deterministic_supermap({2, 2, 2, 2}, 2, 2, 1);
  const Supermap parts1[] = {s};
  CHECK(extensionally_equal(sum_supermaps(parts1), s));

  const Supermap half({2, 2, 2, 2}, {std::sqrt(0.5) * identity(4)});
  const Supermap parts2[] = {half, half};
  const Supermap total = sum_supermaps(parts2);
  CHECK(extensionally_equal(total, identity_supermap(2, 2)));
  CHECK(is_deterministic(total));

  // Split a fixture's Kraus list into two probabilistic parts.
  const Supermap first({2, 2, 2, 2}, {s.kraus().begin(), s.kraus().begin() + 1});
  const Supermap rest({2, 2, 2, 2}, {s.kraus().begin() + 1, s.kraus().end()});
  CHECK_FALSE(is_deterministic(first));
  const Supermap parts3[] = {first, rest};
  CHECK(is_deterministic(sum_supermaps(parts3)));

  const Supermap mismatched[] = {half, identity_supermap(3, 2)};
  CHECK_THROWS_AS(sum_supermaps(mismatched), DimensionError);
}

}  // namespace
}  // namespace supermap
