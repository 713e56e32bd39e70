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

using testing::cnot;
using testing::pauli_x;
using testing::swap_gate;

Matrix basis_ket(std::size_t d, std::size_t k) {
  Matrix v = Matrix::Zero(Eigen::Index(d), 1);
  v(Eigen::Index(k), 0) = 1.0;
  return v;
}

// X on qubit q of three (q = 0 is the leftmost factor).
Matrix flip(std::size_t q) {
  Matrix ops[3] = {identity(2), identity(2), identity(2)};
  ops[q] = pauli_x();
  return kron({ops[0], ops[1], ops[2]});
}

TEST_CASE("sandwich_supermap", "[applications]") {
  SECTION("identity pre and post") {
    const Supermap s = sandwich_supermap(identity_channel(2), identity_channel(3));
    CHECK(extensionally_equal(s, identity_supermap(2, 3)));
  }

  SECTION("composition with channels") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto pre = random_channel(2, 3, 2, seed);
      const auto post = random_channel(2, 2, 2, seed + 10);
      const auto e = random_channel(3, 2, 2, seed + 20);
      const Supermap s = sandwich_supermap(pre, post);
      CHECK(is_deterministic(s));
      const auto direct = apply_supermap(s, e);
      const auto composed = compose(post, compose(e, pre));
      CHECK(relative_distance(direct.choi(), composed.choi()) <= 1e-8);
    }
  }

  SECTION("unitary conjugation") {
    const Matrix u = random_unitary(2, 3);
    const Supermap s =
        sandwich_supermap(unitary_channel(u.adjoint()), unitary_channel(u));
    const auto e = random_channel(2, 2, 3, 4);
    const auto out = apply_supermap(s, e);
    for (std::uint64_t k = 0; k < 3; ++k) {
      const Matrix rho = random_density_matrix(2, 40 + k);
      const Matrix expected =
          u * apply_choi(e.choi(), 2, 2, u.adjoint() * rho * u) * u.adjoint();
      CHECK((apply_choi(out.choi(), 2, 2, rho) - expected).norm() <= 1e-10);
    }
  }

  SECTION("three-qubit repetition code corrects single flips") {
    const Matrix encoder = basis_ket(8, 0) * basis_ket(2, 0).adjoint() +
                           basis_ket(8, 7) * basis_ket(2, 1).adjoint();
    const auto encode = kraus_to_choi(KrausSet{2, 8, {encoder}});

    std::vector<Matrix> decoder;
    const Matrix zero = basis_ket(8, 0);
    const Matrix one = basis_ket(8, 7);
    decoder.push_back(basis_ket(2, 0) * zero.adjoint() +
                      basis_ket(2, 1) * one.adjoint());
    for (std::size_t q = 0; q < 3; ++q) {
      decoder.push_back(basis_ket(2, 0) * (flip(q) * zero).adjoint() +
                        basis_ket(2, 1) * (flip(q) * one).adjoint());
    }
    const auto decode = kraus_to_choi(KrausSet{8, 2, decoder});
    const Supermap code = sandwich_supermap(encode, decode);

    const double p = 0.1;
    std::vector<Matrix> noise = {std::sqrt(1.0 - 3.0 * p) * identity(8)};
    for (std::size_t q = 0; q < 3; ++q) noise.push_back(std::sqrt(p) * flip(q));
    const auto single = kraus_to_choi(KrausSet{8, 8, noise});
    CHECK(relative_distance(apply_supermap(code, single).choi(),
                            identity_channel(2).choi()) <= 1e-8);

    const std::vector<Matrix> double_flip = {flip(0) * flip(1)};
    const auto two = kraus_to_choi(KrausSet{8, 8, double_flip});
    CHECK(relative_distance(apply_supermap(code, two).choi(),
                            unitary_channel(pauli_x()).choi()) <= 1e-8);
  }

  const QuantumOperation lossy(2, 2, 0.5 * identity_channel(2).choi());
  CHECK_THROWS_AS(sandwich_supermap(lossy, identity_channel(2)), ValidationError);
}

TEST_CASE("programmable channels", "[applications]") {
  const Matrix sigma = random_density_matrix(2, 1);

  SECTION("trivial interaction") {
    const ProgrammableDevice dev(identity(4), 2, 2);
    const auto e = programmable_channel(dev, sigma);
    CHECK(relative_distance(e.choi(), identity_channel(2).choi()) <= 1e-10);
  }

  SECTION("swap outputs the program") {
    const ProgrammableDevice dev(swap_gate(2), 2, 2);
    const auto e = programmable_channel(dev, sigma);
    CHECK(relative_distance(e.choi(), kron(sigma, identity(2))) <= 1e-10);
    CHECK(relative_distance(e.choi(), replacement_channel(2, sigma).choi()) <=
          1e-10);
    const Matrix rho = random_density_matrix(2, 2);
    CHECK((apply_choi(e.choi(), 2, 2, rho) - sigma).norm() <= 1e-10);
  }

  SECTION("controlled-not") {
    const ProgrammableDevice dev(cnot(), 2, 2);
    const Matrix zero = matrix_unit(2, 0, 0);
    const auto dephase = programmable_channel(dev, zero);
    const Matrix rho = random_density_matrix(2, 3);
    Matrix diag = rho;
    diag(0, 1) = diag(1, 0) = 0.0;
    CHECK((apply_choi(dephase.choi(), 2, 2, rho) - diag).norm() <= 1e-10);

    const Matrix plus = Matrix::Constant(2, 2, 0.5);
    const auto id = programmable_channel(dev, plus);
    CHECK(relative_distance(id.choi(), identity_channel(2).choi()) <= 1e-10);
  }

  CHECK_THROWS_AS(ProgrammableDevice(identity(3), 2, 2), DimensionError);
  CHECK_THROWS_AS(ProgrammableDevice(2.0 * identity(4), 2, 2), ValidationError);
  const ProgrammableDevice dev(identity(4), 2, 2);
  CHECK_THROWS_AS(programmable_channel(dev, identity(2)), ValidationError);
  CHECK_THROWS_AS(programmable_channel(dev, identity(3) / 3.0), DimensionError);
}

TEST_CASE("programmable POVMs", "[applications]") {
  const auto joint = computational_povm(4);
  const auto povm = programmable_povm(joint, matrix_unit(2, 0, 0), 2);
  REQUIRE(povm.size() == 4);
  CHECK(approx_equal(povm[0], matrix_unit(2, 0, 0), 1e-12));
  CHECK(povm[1].norm() < 1e-12);
  CHECK(approx_equal(povm[2], matrix_unit(2, 1, 1), 1e-12));
  CHECK(povm[3].norm() < 1e-12);

  // The Born rule commutes with tracing out the program.
  const Matrix program = random_density_matrix(2, 6);
  const Matrix u = random_unitary(4, 7);
  std::vector<Matrix> rotated;
  for (const auto& p : joint) rotated.push_back(u * p * u.adjoint());
  const auto induced = programmable_povm(rotated, program, 2);
  CHECK_NOTHROW(validate_povm(induced));
  const Matrix rho = random_density_matrix(2, 8);
  for (std::size_t j = 0; j < 4; ++j) {
    const double lhs = (induced[j] * rho).trace().real();
    const double rhs = (rotated[j] * kron(rho, program)).trace().real();
    CHECK(lhs == Catch::Approx(rhs).margin(1e-12));
  }
  CHECK_THROWS_AS(programmable_povm(computational_povm(3), program, 2),
                  DimensionError);
}

TEST_CASE("tomography", "[applications]") {
  const Vector phi = max_entangled(2) / std::sqrt(2.0);
  const Matrix bell = phi * phi.adjoint();

  SECTION("maximally entangled probe") {
    const TomographySetup setup(bell, 2, 2);
    CHECK(setup.dim_anc() == 2);
    CHECK(tomography_rank(setup) == 16);
    CHECK(is_faithful(setup));
    const Supermap s = tomography_supermap(setup);
    CHECK(is_deterministic(s));
    const auto e = random_channel(2, 2, 2, 1);
    CHECK(relative_distance(probe_output(setup, e), e.choi() / 2.0) <= 1e-10);
    CHECK(relative_distance(apply_to_choi(s, e.choi()), probe_output(setup, e)) <=
          1e-10);
  }

  SECTION("product probe is not faithful") {
    const Matrix rho = random_density_matrix(2, 5, 1);
    const TomographySetup setup(kron(rho, rho), 2, 2);
    CHECK(tomography_rank(setup) < 16);
    CHECK_FALSE(is_faithful(setup));
    CHECK_THROWS_AS(informationally_complete_tester_for(setup, pauli_product_povm(2)),
                    ValidationError);
  }

  SECTION("Werner probes") {
    const auto werner = [&](double p) {
      return TomographySetup(p * bell + (1.0 - p) * identity(4) / 4.0, 2, 2);
    };
    CHECK(is_faithful(werner(0.5)));
    CHECK(is_faithful(werner(-0.2)));
    CHECK_FALSE(is_faithful(werner(0.0)));
  }

  SECTION("informationally complete tester") {
    const TomographySetup setup(bell, 2, 2);
    const Tester t = informationally_complete_tester_for(setup, pauli_product_povm(2));
    CHECK(t.effects().size() == 36);
    CHECK(effect_span_rank(t.effects()) == 16);
    CHECK(is_informationally_complete(t));
    CHECK_THROWS_WITH(
        informationally_complete_tester_for(setup, computational_povm(4)),
        Catch::Matchers::ContainsSubstring("informationally complete"));
  }

  CHECK_THROWS_AS(TomographySetup(identity(3) / 3.0, 2, 2), DimensionError);
  CHECK_THROWS_AS(TomographySetup(identity(4), 2, 2), ValidationError);
}

TEST_CASE("application properties", "[applications][property]") {
  SECTION("programmable channels are affine in the program") {
    const ProgrammableDevice dev(random_unitary(4, 11), 2, 2);
    const Matrix s1 = random_density_matrix(2, 12);
    const Matrix s2 = random_density_matrix(2, 13);
    const double lambda = 0.3;
    const auto mixed = programmable_channel(dev, lambda * s1 + (1 - lambda) * s2);
    const Matrix expected = lambda * programmable_channel(dev, s1).choi() +
                            (1 - lambda) * programmable_channel(dev, s2).choi();
    CHECK(relative_distance(mixed.choi(), expected) <= 1e-8);
    CHECK(is_channel(mixed));
  }

  SECTION("trivial joint POVM") {
    const std::vector<Matrix> trivial = {identity(4)};
    const auto povm = programmable_povm(trivial, random_density_matrix(2, 14), 2);
    REQUIRE(povm.size() == 1);
    CHECK(approx_equal(povm[0], identity(2), 1e-12));
  }

  SECTION("tomography output for the identity channel is the probe") {
    const Matrix f = random_density_matrix(4, 15);
    const TomographySetup setup(f, 2, 2);
    const Supermap s = tomography_supermap(setup);
    CHECK(relative_distance(apply_to_choi(s, identity_channel(2).choi()), f) <= 1e-8);
  }

  SECTION("tomography output matches an index-summation oracle") {
    const Matrix f = random_density_matrix(6, 16);  // H_in = 2, ancilla = 3
    const TomographySetup setup(f, 2, 3);
    const auto e = random_channel(2, 3, 2, 17);
    // (E (x) I)(F) = sum_{x,y} E(|x><y|) (x) F_{xy}, F_{xy} the ancilla blocks.
    Matrix expected = Matrix::Zero(9, 9);
    for (Eigen::Index x = 0; x < 2; ++x) {
      for (Eigen::Index y = 0; y < 2; ++y) {
        expected += kron(apply_choi(e.choi(), 2, 3, matrix_unit(2, std::size_t(x),
                                                                std::size_t(y))),
                         f.block(3 * x, 3 * y, 3, 3));
      }
    }
    CHECK((probe_output(setup, e) - expected).norm() <= 1e-8);
    CHECK((apply_to_choi(tomography_supermap(setup), e.choi()) - expected).norm() <=
          1e-8);
  }

  SECTION("post-processing sandwiches preserve probabilities") {
    const Supermap s =
        sandwich_supermap(identity_channel(2), random_channel(2, 3, 2, 18));
    CHECK(is_probability_preserving(s));
  }

  SECTION("sandwich with a unitary pre-processing realizes with trivial memory") {
    const Supermap s = sandwich_supermap(unitary_channel(random_unitary(2, 19)),
                                         random_channel(2, 2, 3, 20));
    const auto c = realize(s);
    CHECK(c.dim_b == 1);
    CHECK(roundtrip_residual(s, c) <= 1e-8);
    const Supermap noisy_pre =
        sandwich_supermap(random_channel(2, 2, 2, 21), identity_channel(2));
    CHECK(realize(noisy_pre).dim_b == 2);
  }

  SECTION("single-outcome POVM") {
    const std::vector<Matrix> trivial = {identity(2)};
    const auto e = povm_as_channel(trivial);
    CHECK(e.dim_out() == 1);
    const Matrix out = apply_choi(e.choi(), 2, 1, random_density_matrix(2, 22));
    CHECK(out(0, 0).real() == Catch::Approx(1.0));
  }
}

TEST_CASE("povm_as_channel", "[applications]") {
  const auto povm = pauli_povm();
  const auto e = povm_as_channel(povm);
  CHECK(e.dim_in() == 2);
  CHECK(e.dim_out() == 6);
  CHECK(is_channel(e));
  const Matrix rho = random_density_matrix(2, 9);
  const Matrix out = apply_choi(e.choi(), 2, 6, rho);
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(out(Eigen::Index(n), Eigen::Index(n)).real() ==
          Catch::Approx((povm[n] * rho).trace().real()).margin(1e-12));
    for (std::size_t m = 0; m < 6; ++m) {
      if (m != n) CHECK(std::abs(out(Eigen::Index(n), Eigen::Index(m))) < 1e-12);
    }
  }
}

TEST_CASE("standard POVMs", "[applications]") {
  CHECK(pauli_povm().size() == 6);
  CHECK(effect_span_rank(pauli_povm()) == 4);
  CHECK(pauli_product_povm(2).size() == 36);
  CHECK(effect_span_rank(pauli_product_povm(2)) == 16);
  CHECK_NOTHROW(validate_povm(pauli_product_povm(3)));
  CHECK(effect_span_rank(computational_povm(3)) == 3);
}

}  // namespace
}  // namespace supermap
