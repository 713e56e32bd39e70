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

#pragma once

// Testers (process POVMs): positive operators P_j on H_out (x) H_in with
//     sum_j P_j = I_{H_out} (x) sigma,   sigma >= 0, Tr[sigma] = 1,
// assigning probability p_j = Tr[E P_j] to an operation with Choi operator E.
//
// For a prepare-and-measure experiment with input state rho and POVM {M_j},
// P_j = M_j (x) rho^T, so sigma = rho^T; the constructors below take care of
// that transpose and evaluate() works on Choi operators directly.

#include <cstddef>
#include <span>
#include <vector>

#include "supermap/operation.hpp"
#include "supermap/supermap.hpp"

namespace supermap {

struct TesterDiagnostics {
  double normalization_residual = 0.0;  // relative ||sum P_j - I (x) sigma||
  double trace_gap = 0.0;               // |Tr[sigma] - 1|
  double min_eigenvalue = 0.0;          // over all effects
  bool positive = true;
  bool normalized = true;
  Matrix sigma;
};

TesterDiagnostics diagnose_tester(std::span<const Matrix> effects,
                                  std::size_t h_in, std::size_t h_out,
                                  const Tolerances& tol = {});

class Tester {
 public:
  Tester(std::size_t h_in, std::size_t h_out, std::vector<Matrix> effects,
         Matrix sigma);

  std::size_t h_in() const noexcept { return h_in_; }
  std::size_t h_out() const noexcept { return h_out_; }
  const std::vector<Matrix>& effects() const noexcept { return effects_; }
  const Matrix& sigma() const noexcept { return sigma_; }

 private:
  std::size_t h_in_;
  std::size_t h_out_;
  std::vector<Matrix> effects_;
  Matrix sigma_;
};

struct OutcomeDistribution {
  std::vector<double> probabilities;
  double total() const;
};

// Validates positivity and normalization; sigma = Tr_out[sum P_j] / h_out.
Tester make_tester(std::vector<Matrix> effects, std::size_t h_in,
                   std::size_t h_out, const Tolerances& tol = {});

OutcomeDistribution evaluate(const Tester& t, const QuantumOperation& op,
                             const Tolerances& tol = {});

// sum_j prior_j * p(outcome j | ops[j]).
double discrimination_probability(const Tester& t,
                                  std::span<const QuantumOperation> ops,
                                  std::span<const double> priors,
                                  const Tolerances& tol = {});

// Rank of the Hilbert-Schmidt Gram matrix of the effects, with a relative
// singular-value cutoff.
std::size_t effect_span_rank(std::span<const Matrix> effects,
                             double rel_cutoff = 1e-8);
bool is_informationally_complete(const Tester& t, double rel_cutoff = 1e-8);

// Input state on H_in (x) B, POVM on H_out (x) B:
//     Tr[(E (x) I_B)(state) M_j] = Tr[E P_j].
Tester tester_from_circuit(const Matrix& input_state,
                           std::span<const Matrix> povm, std::size_t h_in,
                           std::size_t h_out, const Tolerances& tol = {});
// Prepare rho on H_in, measure {M_j} on H_out: P_j = M_j (x) rho^T.
Tester prepare_measure_tester(const Matrix& rho, std::span<const Matrix> povm,
                              const Tolerances& tol = {});

// Checks positivity and completeness of a POVM; throws ValidationError.
void validate_povm(std::span<const Matrix> povm, const Tolerances& tol = {});

// One probabilistic supermap per effect, with one-dimensional K_in, K_out
// and Kraus operators <v_k| with P_j = sum_k |v_k><v_k|.
std::vector<Supermap> tester_as_supermaps(const Tester& t,
                                          const Tolerances& tol = {});

}  // namespace supermap
