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

// Supermaps: completely positive maps acting on Choi operators,
//     S(E) = sum_i S_i E S_i^dagger,
// with S_i : H_out (x) H_in -> K_out (x) K_in. A supermap transforms an
// operation H_in -> H_out into an operation K_in -> K_out.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "supermap/operation.hpp"
#include "supermap/tensor.hpp"

namespace supermap {

struct SupermapDims {
  std::size_t h_in = 1;
  std::size_t h_out = 1;
  std::size_t k_in = 1;
  std::size_t k_out = 1;

  std::size_t input_dim() const noexcept { return h_out * h_in; }
  std::size_t output_dim() const noexcept { return k_out * k_in; }
  friend bool operator==(const SupermapDims&, const SupermapDims&) = default;
};

struct DeterminismReport {
  bool deterministic = false;
  // Largest product-form residual ||S_*(I (x) rho_k) - I (x) N_*(rho_k)||
  // (relative), or ||Tr_out S(E) - N(Tr_out E)|| for the effect route.
  double residual = 0.0;
  double trace_preservation_residual = 0.0;
  double min_eigenvalue = 0.0;  // of the Choi operator of N_*
  // Choi operator of N_* on H_in (x) K_in, when the extraction succeeded.
  std::optional<Matrix> n_star_choi;
};

class Supermap {
 public:
  Supermap(SupermapDims dims, std::vector<Matrix> kraus);

  const SupermapDims& dims() const noexcept { return dims_; }
  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }

  // Determinism test through the dual map; computed once and shared by
  // copies. Uses the default tolerances.
  const DeterminismReport& determinism() const;

 private:
  struct Cache;
  SupermapDims dims_;
  std::vector<Matrix> kraus_;
  std::shared_ptr<Cache> cache_;
};

// Maps effects on H_in to effects on K_in, N(P) = sum_l N_l^dagger P N_l.
// Its predual N_*(rho) = sum_l N_l rho N_l^dagger maps states on K_in to
// states on H_in.
struct EffectMap {
  std::size_t h_in = 1;
  std::size_t k_in = 1;
  std::vector<Matrix> kraus;  // each h_in x k_in

  Matrix apply(const Matrix& effect) const;
  Matrix apply_predual(const Matrix& rho) const;
};

Supermap identity_supermap(std::size_t h_in, std::size_t h_out);

// S(E) for an arbitrary operator E on H_out (x) H_in.
Matrix apply_to_choi(const Supermap& s, const Matrix& e);
QuantumOperation apply_supermap(const Supermap& s, const QuantumOperation& op,
                                const Tolerances& tol = {});
// S_*(O) = sum_i S_i^dagger O S_i.
Matrix dual_supermap(const Supermap& s, const Matrix& o);

struct NormalizationFunctional {
  bool valid = false;
  double residual = 0.0;  // relative ||C - I (x) rho||
  Matrix rho;             // Tr_out[C] / h_out
};

// Decides whether C has the form I_{H_out} (x) rho with Tr[rho] = 1.
NormalizationFunctional is_normalization_functional(const Matrix& c,
                                                    std::size_t h_out,
                                                    std::size_t h_in,
                                                    const Tolerances& tol = {});

// Dual-map test: S_*(I (x) |a><b|) must factor as I (x) N_*(|a><b|) for
// every matrix unit on K_in, with N_* completely positive and trace
// preserving.
DeterminismReport check_determinism(const Supermap& s,
                                    const Tolerances& tol = {});
// Independent effect-map test: Tr_{K_out}[S(E)] must depend on E only
// through Tr_{H_out}[E], via a CP identity-preserving map N. Evaluated on
// the matrix-unit basis of H_out (x) H_in.
DeterminismReport check_determinism_via_effects(const Supermap& s,
                                                const Tolerances& tol = {});
bool is_deterministic(const Supermap& s);
bool is_deterministic(const Supermap& s, const Tolerances& tol);

// Canonical Kraus form of the effect-map. Throws NotDeterministicError.
EffectMap effect_map_of(const Supermap& s, const Tolerances& tol = {});
// Requires a deterministic supermap with h_in == k_in.
bool is_probability_preserving(const Supermap& s, const Tolerances& tol = {});

// a (x) b with spaces ordered (out_a out_b, in_a in_b) on both sides.
Supermap tensor_supermaps(const Supermap& a, const Supermap& b);
// Concatenates Kraus lists; the action is the sum of the actions.
Supermap sum_supermaps(std::span<const Supermap> parts);

// max over matrix units E of ||S_a(E) - S_b(E)||_F.
double action_distance(const Supermap& a, const Supermap& b);
bool extensionally_equal(const Supermap& a, const Supermap& b,
                         double tol = 1e-8);

}  // namespace supermap
