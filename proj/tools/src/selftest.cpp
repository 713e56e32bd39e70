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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "supermap_cli/cli.hpp"

namespace supermap::cli {
namespace {

struct Suite {
  double max_residual = 0.0;
  std::size_t failures = 0;
  std::string first_error;

  void record(double residual, double tol) {
    if (!std::isfinite(residual)) residual = std::numeric_limits<double>::max();
    max_residual = std::max(max_residual, residual);
    if (residual > tol) ++failures;
  }
  void fail(const std::string& why, double residual) {
    ++failures;
    max_residual = std::max(max_residual, residual);
    if (first_error.empty()) first_error = why;
  }
};

// Runs body(trial, seed) for every trial, converting library errors into
// recorded failures.
Suite run_suite(const SelftestOptions& opt, std::uint64_t stream,
                const std::function<void(Suite&, std::uint64_t)>& body) {
  Suite s;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = derive_seed(derive_seed(opt.seed, stream), t);
    try {
      body(s, seed);
    } catch (const ValidationError& e) {
      s.fail(e.what(), e.residual());
    } catch (const Error& e) {
      s.fail(e.what(), 0.0);
    }
  }
  return s;
}

std::size_t pick(std::uint64_t seed, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(seed % (hi - lo + 1));
}

Supermap perturb(const Supermap& s, std::uint64_t seed) {
  std::vector<Matrix> kraus = s.kraus();
  kraus[0] += 0.05 * random_gaussian(kraus[0].rows(), kraus[0].cols(), seed);
  return Supermap(s.dims(), std::move(kraus));
}

}  // namespace

Report run_selftest(const SelftestOptions& opt) {
  Report r{"selftest", true, 0.0};
  if (opt.trials == 0) return r;
  const Tolerances& tol = opt.tol;
  std::vector<std::pair<std::string, Suite>> suites;

  suites.emplace_back("choi_kraus_roundtrip", run_suite(opt, 1, [&](Suite& s, std::uint64_t seed) {
    const std::size_t din = pick(seed, 2, 3);
    const std::size_t dout = pick(seed >> 8, 2, 3);
    const std::size_t rank = std::max(pick(seed >> 16, 1, 4), (din + dout - 1) / dout);
    const KrausSet k = random_kraus(din, dout, rank, seed);
    const QuantumOperation op = kraus_to_choi(k, tol);
    s.record(relative_distance(kraus_to_choi(choi_to_kraus(op, tol), tol).choi(),
                               op.choi()), tol.eq);
    const Matrix rho = random_density_matrix(din, derive_seed(seed, 1));
    Matrix direct = Matrix::Zero(Eigen::Index(dout), Eigen::Index(dout));
    for (const auto& e : k.operators) direct += e * rho * e.adjoint();
    s.record((apply_operation(op, rho, tol) - direct).norm(), tol.eq);
  }));

  suites.emplace_back("normalization", run_suite(opt, 2, [&](Suite& s, std::uint64_t seed) {
    const std::size_t din = pick(seed, 2, 3);
    const std::size_t dout = pick(seed >> 8, 2, 3);
    const Matrix rho = random_density_matrix(din, derive_seed(seed, 1));
    const Matrix functional = kron(identity(dout), rho);
    const QuantumOperation e = random_channel(din, dout, 2, derive_seed(seed, 2));
    s.record(std::abs((functional * e.choi()).trace() - 1.0), tol.eq);
    const auto nf = is_normalization_functional(functional, dout, din, tol);
    if (!nf.valid) s.fail("normalization functional rejected", nf.residual);
    s.record((nf.rho - rho).norm(), tol.eq);
  }));

  suites.emplace_back("determinism_agreement", run_suite(opt, 3, [&](Suite& s, std::uint64_t seed) {
    const std::size_t dim_b = pick(seed, 1, 2);
    const Supermap fixture = random_deterministic_supermap(
        {2, 2, 2, 2}, dim_b, pick(seed >> 8, dim_b, 4), seed);
    const Supermap broken = perturb(fixture, derive_seed(seed, 1));
    const auto a = check_determinism(fixture, tol);
    const auto b = check_determinism_via_effects(fixture, tol);
    if (!a.deterministic || !b.deterministic) {
      s.fail("fixture classified as non-deterministic", a.residual);
    }
    if (check_determinism(broken, tol).deterministic !=
        check_determinism_via_effects(broken, tol).deterministic) {
      s.fail("determinism tests disagree on a perturbed fixture", 0.0);
    }
    s.record(std::max(a.residual, a.trace_preservation_residual), tol.eq);
  }));

  suites.emplace_back("realization_roundtrip", run_suite(opt, 4, [&](Suite& s, std::uint64_t seed) {
    const std::size_t dim_b = pick(seed, 1, 2);
    const Supermap fixture = random_deterministic_supermap(
        {2, 2, 2, 2}, dim_b, pick(seed >> 8, dim_b, 4), seed);
    CircuitRealization c = realize(fixture, tol);
    if (opt.corrupt == Corruption::kIsometry) c.v *= 1.05;
    const double v = isometry_residual(c.v);
    const double w = isometry_residual(c.w);
    s.record(v, tol.eq);
    s.record(w, tol.eq);
    if (v <= tol.eq && w <= tol.eq) s.record(roundtrip_residual(fixture, c, tol), tol.eq);
  }));

  suites.emplace_back("delayed_reading", run_suite(opt, 5, [&](Suite& s, std::uint64_t seed) {
    const std::size_t parts_count = pick(seed, 2, 3);
    const Supermap total = random_deterministic_supermap({2, 2, 2, 2}, 2, 4, seed);
    std::vector<Supermap> parts;
    const auto& k = total.kraus();
    for (std::size_t j = 0; j < parts_count; ++j) {
      const std::size_t begin = j * k.size() / parts_count;
      const std::size_t end = (j + 1) * k.size() / parts_count;
      parts.emplace_back(total.dims(),
                         std::vector<Matrix>(k.begin() + long(begin), k.begin() + long(end)));
    }
    const auto report = delayed_reading_check(parts, 2, derive_seed(seed, 1), tol);
    s.record(report.max_residual, tol.eq);
    s.record(report.max_probability_gap, tol.eq);
  }));

  suites.emplace_back("tester_normalization", run_suite(opt, 6, [&](Suite& s, std::uint64_t seed) {
    const std::size_t din = pick(seed, 2, 3);
    const std::size_t dout = pick(seed >> 8, 2, 3);
    const Matrix rho = random_density_matrix(din, derive_seed(seed, 1));
    const Matrix u = random_unitary(dout, derive_seed(seed, 2));
    std::vector<Matrix> effects;
    for (const auto& p : computational_povm(dout)) {
      effects.push_back(kron(u * p * u.adjoint(), rho.transpose()));
    }
    if (opt.corrupt == Corruption::kTester) effects[0] *= 1.5;
    const Tester t = make_tester(std::move(effects), din, dout, tol);
    const auto e = random_channel(din, dout, 2, derive_seed(seed, 3));
    s.record(std::abs(evaluate(t, e, tol).total() - 1.0), tol.eq);
  }));

  for (const auto& [name, suite] : suites) {
    const bool pass = suite.failures == 0;
    Json d{{"pass", pass},
           {"trials", opt.trials},
           {"failures", suite.failures},
           {"max_residual", suite.max_residual}};
    if (!suite.first_error.empty()) d["first_error"] = suite.first_error;
    r.details[name] = std::move(d);
    r.pass = r.pass && pass;
    r.residual = std::max(r.residual, suite.max_residual);
  }
  return r;
}

}  // namespace supermap::cli
