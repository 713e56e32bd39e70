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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "supermap/supermap_all.hpp"
#include "supermap_cli/cli.hpp"

namespace {

using namespace supermap;

constexpr double kTol = 1e-8;

struct Outcome {
  bool pass = true;
  std::string summary;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::size_t in_range(std::uint64_t seed, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(seed % (hi - lo + 1));
}

Outcome choi_kraus_roundtrip() {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::uint64_t seed = derive_seed(101, t);
    const std::size_t din = in_range(seed, 2, 3);
    const std::size_t dout = in_range(seed >> 8, 2, 3);
    const std::size_t rank =
        std::max(in_range(seed >> 16, 1, 4), (din + dout - 1) / dout);
    const QuantumOperation op = random_channel(din, dout, rank, seed);
    const QuantumOperation back = kraus_to_choi(choi_to_kraus(op));
    worst = std::max(worst, (back.choi() - op.choi()).norm());
  }
  return {worst <= kTol, fmt("100 operations, max residual %.3g", worst)};
}

Outcome kraus_vs_choi_action() {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::uint64_t seed = derive_seed(202, t);
    const std::size_t din = in_range(seed, 2, 3);
    const std::size_t dout = in_range(seed >> 8, 2, 3);
    const std::size_t rank =
        std::max(in_range(seed >> 16, 1, 4), (din + dout - 1) / dout);
    const KrausSet k = random_kraus(din, dout, rank, seed);
    const Matrix rho = random_density_matrix(din, derive_seed(seed, 1));
    Matrix direct = Matrix::Zero(Eigen::Index(dout), Eigen::Index(dout));
    for (const auto& e : k.operators) direct += e * rho * e.adjoint();
    const Matrix via_choi = apply_choi(kraus_to_choi(k).choi(), din, dout, rho);
    worst = std::max(worst, (direct - via_choi).norm());
  }
  return {worst <= kTol, fmt("100 Kraus sets, max residual %.3g", worst)};
}

Outcome normalization_functional() {
  double worst_norm = 0.0;
  double worst_rho = 0.0;
  bool all_valid = true;
  std::vector<QuantumOperation> channels;
  for (std::uint64_t c = 0; c < 50; ++c) {
    channels.push_back(random_channel(2, 3, 1 + c % 3, derive_seed(303, c)));
  }
  for (std::uint64_t r = 0; r < 50; ++r) {
    const Matrix rho = random_density_matrix(2, derive_seed(304, r));
    const Matrix functional = kron(identity(3), rho);
    for (const auto& e : channels) {
      worst_norm = std::max(worst_norm,
                            std::abs((functional * e.choi()).trace() - 1.0));
    }
    const auto nf = is_normalization_functional(functional, 3, 2);
    all_valid = all_valid && nf.valid;
    worst_rho = std::max(worst_rho, (nf.rho - rho).norm());
  }
  return {all_valid && worst_norm <= kTol && worst_rho <= kTol,
          fmt("2500 pairs, max |Tr-1| %.3g, max state error %.3g", worst_norm,
              worst_rho)};
}

Outcome determinism_tests_agree() {
  std::size_t disagreements = 0;
  std::size_t wrong = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::uint64_t seed = derive_seed(404, t);
    const SupermapDims d{2, 2, in_range(seed >> 4, 1, 3), 2};
    const std::size_t dim_b = std::max(in_range(seed, 1, 2), (d.k_in + 1) / 2);
    const Supermap fixture =
        random_deterministic_supermap(d, dim_b, in_range(seed >> 8, dim_b, 4), seed);
    std::vector<Matrix> kraus = fixture.kraus();
    kraus[0] += 0.05 * random_gaussian(kraus[0].rows(), kraus[0].cols(),
                                       derive_seed(seed, 1));
    const Supermap perturbed(d, kraus);
    for (const auto* s : {&fixture, &perturbed}) {
      const bool dual = check_determinism(*s).deterministic;
      const bool effects = check_determinism_via_effects(*s).deterministic;
      if (dual != effects) ++disagreements;
      if (dual != (s == &fixture)) ++wrong;
    }
  }
  return {disagreements == 0 && wrong == 0,
          fmt("100 supermaps, %.0f disagreements, %.0f misclassified",
              double(disagreements), double(wrong))};
}

Outcome realization_roundtrip() {
  double worst = 0.0;
  double worst_iso = 0.0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::uint64_t seed = derive_seed(505, t);
    const std::size_t dim_b = in_range(seed, 1, 2);
    const std::size_t dim_a = in_range(seed >> 8, dim_b, 4);
    const SupermapDims d{2, 2, 2, 2};
    const Supermap s = random_deterministic_supermap(d, dim_b, dim_a, seed);
    const CircuitRealization c = realize(s);
    const Supermap rebuilt =
        circuit_to_supermap({c.v, c.w, c.dim_b, c.dim_a, {}}, d).front();
    worst = std::max(worst, action_distance(s, rebuilt));
    worst_iso = std::max({worst_iso, isometry_residual(c.v), isometry_residual(c.w)});
  }
  return {worst <= kTol && worst_iso <= kTol,
          fmt("50 supermaps, max action residual %.3g, max isometry residual %.3g",
              worst, worst_iso)};
}

Outcome delayed_reading() {
  double worst = 0.0;
  double gap = 0.0;
  bool pass = true;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const std::uint64_t seed = derive_seed(606, t);
    const std::size_t n_parts = in_range(seed, 2, 3);
    const SupermapDims d{2, in_range(seed >> 4, 2, 3), 2, 2};
    const std::size_t dim_a = d.h_out == 3 ? 3 : 4;
    const Supermap total = random_deterministic_supermap(d, 2, dim_a, seed);
    std::vector<Supermap> parts;
    const auto& k = total.kraus();
    for (std::size_t j = 0; j < n_parts; ++j) {
      parts.emplace_back(d, std::vector<Matrix>(k.begin() + long(j * k.size() / n_parts),
                                                k.begin() + long((j + 1) * k.size() / n_parts)));
    }
    const auto report = delayed_reading_check(parts, 10, derive_seed(seed, 1));
    pass = pass && report.pass;
    worst = std::max(worst, report.max_residual);
    gap = std::max(gap, report.max_probability_gap);
  }
  return {pass && worst <= kTol && gap <= kTol,
          fmt("20 decompositions, max part residual %.3g, max probability gap %.3g",
              worst, gap)};
}

Outcome tester_evaluation() {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::uint64_t seed = derive_seed(707, t);
    const std::size_t din = in_range(seed, 2, 3);
    const std::size_t dout = in_range(seed >> 8, 2, 3);
    const Matrix rho = random_density_matrix(din, derive_seed(seed, 1));
    const Matrix u = random_unitary(dout, derive_seed(seed, 2));
    std::vector<Matrix> povm;
    for (const auto& p : computational_povm(dout)) povm.push_back(u * p * u.adjoint());
    const Tester tester = prepare_measure_tester(rho, povm);
    const auto e = random_channel(din, dout, 2, derive_seed(seed, 3));
    worst = std::max(worst, std::abs(evaluate(tester, e).total() - 1.0));
  }
  const std::vector<Matrix> computational = computational_povm(2);
  const Tester t = prepare_measure_tester(matrix_unit(2, 0, 0), computational);
  const QuantumOperation ops[] = {identity_channel(2),
                                  QuantumOperation(2, 2, identity(4) / 2.0)};
  const double priors[] = {0.5, 0.5};
  const double success = discrimination_probability(t, ops, priors);
  return {worst <= kTol && std::abs(success - 0.75) <= kTol,
          fmt("50 testers, max |sum p - 1| %.3g, discrimination %.12f", worst,
              success)};
}

Outcome tomography() {
  const Vector phi = max_entangled(2) / std::sqrt(2.0);
  const TomographySetup bell(phi * phi.adjoint(), 2, 2);
  const Matrix rho = random_density_matrix(2, 808, 1);
  const TomographySetup product(kron(rho, rho), 2, 2);
  const Tester t = informationally_complete_tester_for(bell, pauli_product_povm(2));
  const std::size_t rank = effect_span_rank(t.effects());
  const bool pass = is_faithful(bell) && !is_faithful(product) && rank == 16 &&
                    is_informationally_complete(t);
  return {pass, fmt("entangled probe rank %.0f, product probe rank %.0f",
                    double(tomography_rank(bell)), double(tomography_rank(product))) +
                    fmt(", tester span rank %.0f", double(rank))};
}

Outcome programmable_devices() {
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  double worst_swap = 0.0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const Matrix sigma = random_density_matrix(2, derive_seed(909, t));
    const auto e = programmable_channel(ProgrammableDevice(swap, 2, 2), sigma);
    // Constant channel: Choi sigma (x) I in (out, in) order.
    worst_swap = std::max(worst_swap, (e.choi() - kron(sigma, identity(2))).norm());
  }
  Matrix dephasing = Matrix::Zero(4, 4);
  dephasing(0, 0) = dephasing(3, 3) = 1.0;
  const auto d = programmable_channel(ProgrammableDevice(cnot, 2, 2),
                                      matrix_unit(2, 0, 0));
  const double dephase = (d.choi() - dephasing).norm();
  return {worst_swap <= kTol && dephase <= kTol,
          fmt("swap residual %.3g, controlled-not residual %.3g", worst_swap, dephase)};
}

Outcome negative_controls() {
  const auto code = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    return supermap::cli::run_cli(args, out, err);
  };
  const int clean = code({"selftest", "--seed", "0", "--trials", "10"});
  const int isometry =
      code({"selftest", "--seed", "0", "--trials", "10", "--corrupt", "isometry"});
  const int tester =
      code({"selftest", "--seed", "0", "--trials", "10", "--corrupt", "tester"});
  return {clean == 0 && isometry == 1 && tester == 1,
          fmt("clean exit %.0f, corrupted isometry exit %.0f", clean, isometry) +
              fmt(", corrupted tester exit %.0f", tester)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"choi-kraus roundtrip", choi_kraus_roundtrip},
      {"kraus and choi actions agree", kraus_vs_choi_action},
      {"normalization functional", normalization_functional},
      {"determinism tests agree", determinism_tests_agree},
      {"circuit realization roundtrip", realization_roundtrip},
      {"delayed reading of probabilistic parts", delayed_reading},
      {"tester normalization and evaluation", tester_evaluation},
      {"tomography faithfulness", tomography},
      {"programmable devices", programmable_devices},
      {"selftest negative controls", negative_controls},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name,
                o.summary.c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
