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

#include "supermap/tester.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "supermap/error.hpp"

namespace supermap {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

void require_effect_shapes(std::span<const Matrix> effects, std::size_t dim) {
  if (effects.empty()) throw DimensionError("tester needs at least one effect");
  for (const auto& p : effects) {
    if (p.rows() != idx(dim) || p.cols() != idx(dim)) {
      std::ostringstream os;
      os << "effect must be " << dim << "x" << dim << ", got " << p.rows()
         << "x" << p.cols();
      throw DimensionError(os.str());
    }
  }
}

}  // namespace

TesterDiagnostics diagnose_tester(std::span<const Matrix> effects,
                                  std::size_t h_in, std::size_t h_out,
                                  const Tolerances& tol) {
  require_effect_shapes(effects, h_in * h_out);
  TesterDiagnostics d;
  Matrix sum = Matrix::Zero(idx(h_in * h_out), idx(h_in * h_out));
  d.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& p : effects) {
    if (!is_finite(p) || !is_hermitian(p, tol.herm)) {
      d.positive = false;
    }
    const double lo = min_eigenvalue(p);
    d.min_eigenvalue = std::min(d.min_eigenvalue, lo);
    if (!is_positive_semidefinite(p, tol)) d.positive = false;
    sum += p;
  }
  d.sigma = partial_trace(sum, TensorShape{h_out, h_in}, {1}) / double(h_out);
  d.normalization_residual =
      relative_distance(sum, kron(identity(h_out), d.sigma));
  d.trace_gap = std::abs(d.sigma.trace() - Complex(1.0, 0.0));
  d.normalized = d.normalization_residual <= tol.eq && d.trace_gap <= tol.eq &&
                 is_positive_semidefinite(d.sigma, tol);
  return d;
}

Tester::Tester(std::size_t h_in, std::size_t h_out, std::vector<Matrix> effects,
               Matrix sigma)
    : h_in_(h_in), h_out_(h_out), effects_(std::move(effects)),
      sigma_(std::move(sigma)) {
  require_effect_shapes(effects_, h_in_ * h_out_);
  if (sigma_.rows() != idx(h_in_) || sigma_.cols() != idx(h_in_)) {
    throw DimensionError("sigma does not live on H_in");
  }
}

double OutcomeDistribution::total() const {
  return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

Tester make_tester(std::vector<Matrix> effects, std::size_t h_in,
                   std::size_t h_out, const Tolerances& tol) {
  auto d = diagnose_tester(effects, h_in, h_out, tol);
  if (!d.positive) {
    throw ValidationError("tester effect is not positive semidefinite",
                          -d.min_eigenvalue);
  }
  if (!d.normalized) {
    throw ValidationError(
        "tester normalization sum_j P_j = I (x) sigma violated",
        std::max(d.normalization_residual, d.trace_gap));
  }
  return Tester(h_in, h_out, std::move(effects), std::move(d.sigma));
}

OutcomeDistribution evaluate(const Tester& t, const QuantumOperation& op,
                             const Tolerances& tol) {
  if (op.dim_in() != t.h_in() || op.dim_out() != t.h_out()) {
    throw DimensionError("operation dimensions do not match the tester");
  }
  OutcomeDistribution out;
  for (const auto& p : t.effects()) {
    double prob = (op.choi() * p).trace().real();
    // Clamp round-off only; anything further out is reported as is.
    if (prob < 0.0 && prob >= -tol.eq) prob = 0.0;
    if (prob > 1.0 && prob <= 1.0 + tol.eq) prob = 1.0;
    out.probabilities.push_back(prob);
  }
  return out;
}

double discrimination_probability(const Tester& t,
                                  std::span<const QuantumOperation> ops,
                                  std::span<const double> priors,
                                  const Tolerances& tol) {
  if (ops.size() != t.effects().size() || priors.size() != ops.size()) {
    throw DimensionError(
        "discrimination needs one channel and one prior per outcome");
  }
  const double prior_sum = std::accumulate(priors.begin(), priors.end(), 0.0);
  if (std::abs(prior_sum - 1.0) > tol.eq ||
      std::any_of(priors.begin(), priors.end(),
                  [](double p) { return p < 0.0; })) {
    throw ValidationError("priors must be a probability distribution");
  }
  double success = 0.0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    success += priors[j] * evaluate(t, ops[j], tol).probabilities[j];
  }
  return success;
}

std::size_t effect_span_rank(std::span<const Matrix> effects,
                             double rel_cutoff) {
  const auto n = idx(effects.size());
  if (n == 0) return 0;
  Matrix gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      gram(j, k) = (effects[std::size_t(j)].adjoint() * effects[std::size_t(k)])
                       .trace();
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double top = ev(n - 1);
  if (top <= 0.0) return 0;
  return static_cast<std::size_t>(
      (ev.array() > rel_cutoff * top).count());
}

bool is_informationally_complete(const Tester& t, double rel_cutoff) {
  const std::size_t d = t.h_in() * t.h_out();
  return effect_span_rank(t.effects(), rel_cutoff) == d * d;
}

void validate_povm(std::span<const Matrix> povm, const Tolerances& tol) {
  if (povm.empty()) throw ValidationError("POVM has no effects");
  const auto d = povm.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& m : povm) {
    if (m.rows() != d || m.cols() != d) {
      throw DimensionError("POVM effects have inconsistent shapes");
    }
    if (!is_finite(m) || !is_positive_semidefinite(m, tol)) {
      throw ValidationError("POVM effect is not positive semidefinite",
                            is_finite(m) ? -min_eigenvalue(m) : 0.0);
    }
    sum += m;
  }
  const double residual = relative_distance(sum, identity(std::size_t(d)));
  if (residual > tol.eq) {
    throw ValidationError("POVM effects do not sum to the identity", residual);
  }
}

Tester tester_from_circuit(const Matrix& input_state,
                           std::span<const Matrix> povm, std::size_t h_in,
                           std::size_t h_out, const Tolerances& tol) {
  validate_povm(povm, tol);
  if (input_state.rows() != input_state.cols() ||
      input_state.rows() % idx(h_in) != 0) {
    throw DimensionError("input state does not live on H_in (x) B");
  }
  const auto hin = idx(h_in);
  const auto hout = idx(h_out);
  const auto db = input_state.rows() / hin;
  if (povm.front().rows() != hout * db) {
    throw DimensionError("POVM does not live on H_out (x) B");
  }
  if (!is_positive_semidefinite(input_state, tol) ||
      std::abs(input_state.trace() - Complex(1.0)) > tol.eq) {
    throw ValidationError("input state is not a density matrix");
  }

  std::vector<Matrix> effects;
  effects.reserve(povm.size());
  for (const auto& m : povm) {
    // P[(o', y), (o, x)] = sum_{b, b'} state[(x, b), (y, b')] M[(o', b'), (o, b)]
    Matrix p = Matrix::Zero(hout * hin, hout * hin);
    for (Eigen::Index op = 0; op < hout; ++op) {
      for (Eigen::Index y = 0; y < hin; ++y) {
        for (Eigen::Index o = 0; o < hout; ++o) {
          for (Eigen::Index x = 0; x < hin; ++x) {
            Complex acc = 0.0;
            for (Eigen::Index b = 0; b < db; ++b) {
              for (Eigen::Index bp = 0; bp < db; ++bp) {
                acc += input_state(x * db + b, y * db + bp) *
                       m(op * db + bp, o * db + b);
              }
            }
            p(op * hin + y, o * hin + x) = acc;
          }
        }
      }
    }
    effects.push_back(std::move(p));
  }
  return make_tester(std::move(effects), h_in, h_out, tol);
}

Tester prepare_measure_tester(const Matrix& rho, std::span<const Matrix> povm,
                              const Tolerances& tol) {
  if (povm.empty()) throw ValidationError("POVM has no effects");
  return tester_from_circuit(rho, povm, static_cast<std::size_t>(rho.rows()),
                             static_cast<std::size_t>(povm.front().rows()),
                             tol);
}

std::vector<Supermap> tester_as_supermaps(const Tester& t,
                                          const Tolerances& tol) {
  const SupermapDims dims{t.h_in(), t.h_out(), 1, 1};
  std::vector<Supermap> out;
  for (const auto& p : t.effects()) {
    const auto eig = eigh(p, tol.herm);
    std::vector<Matrix> kraus;
    const double top = eig.values.empty() ? 0.0 : eig.values.front();
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
      if (eig.values[k] <= tol.pos * std::max(1.0, top)) break;
      kraus.push_back(std::sqrt(eig.values[k]) *
                      eig.vectors.col(idx(k)).adjoint());
    }
    if (kraus.empty()) kraus.push_back(Matrix::Zero(1, p.cols()));
    out.emplace_back(dims, std::move(kraus));
  }
  return out;
}

}  // namespace supermap
