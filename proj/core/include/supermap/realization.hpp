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

// Circuit realization of supermaps.
//
// A deterministic supermap is realized by two isometries
//     V : K_in -> B (x) H_in          (rows ordered (B, H_in))
//     W : H_out (x) B -> K_out (x) A  (rows (K_out, A), columns (H_out, B))
// with the input operation E inserted on H_in in between:
//     S(E)(rho) = Tr_A[ W (E (x) I_B)(V rho V^dagger) W^dagger ].
// Projecting A onto a subspace before the trace post-selects a
// probabilistic part of the supermap.
//
// The supermap Kraus operators are recovered as
//     S_i = (I (x) <a_i|) W (I (x) Z),   Z = sum_j |b_j> (x) N_j^dagger,
// where V = sum_j |b_j> (x) conj(N_j) is Z partially transposed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "supermap/supermap.hpp"

namespace supermap {

struct CircuitRealization {
  Matrix v;                         // (dim_b * h_in) x k_in
  Matrix w;                         // (k_out * dim_a) x (h_out * dim_b)
  std::size_t dim_b = 1;
  std::size_t dim_a = 1;
  std::vector<Matrix> projectors;   // on A; empty for a deterministic circuit
};

// Throws DimensionError / ValidationError when shapes, isometries or
// projectors are inconsistent with `dims`.
void validate_circuit(const CircuitRealization& c, const SupermapDims& dims,
                      const Tolerances& tol = {});

// Factors a deterministic supermap. dim_a is the Kraus count of s and dim_b
// the canonical Kraus count of its effect-map. Throws NotDeterministicError.
CircuitRealization realize(const Supermap& s, const Tolerances& tol = {});

// Realizes the deterministic sum of `parts`; projector j selects the ancilla
// indices belonging to the Kraus operators of part j.
CircuitRealization realize_probabilistic(std::span<const Supermap> parts,
                                         const Tolerances& tol = {});

// One supermap per projector, or a single supermap when there are none.
std::vector<Supermap> circuit_to_supermap(const CircuitRealization& c,
                                          const SupermapDims& dims,
                                          const Tolerances& tol = {});

// Simulates the circuit: Tr_A[(I (x) P) W (E (x) I_B)(V rho V^dagger) W^dagger]
// for the operation with Choi operator `e_choi` (any operator on
// H_out (x) H_in; the map is linear). P is projectors[*projector] or I_A.
Matrix circuit_output(const CircuitRealization& c, const SupermapDims& dims,
                      const Matrix& e_choi, const Matrix& rho,
                      std::optional<std::size_t> projector = std::nullopt);
// Choi operator on K_out (x) K_in of the operation the circuit produces.
Matrix circuit_choi(const CircuitRealization& c, const SupermapDims& dims,
                    const Matrix& e_choi,
                    std::optional<std::size_t> projector = std::nullopt);

// Worst action distance between s and the supermap of its realization.
double roundtrip_residual(const Supermap& s, const CircuitRealization& c,
                          const Tolerances& tol = {});

struct DelayedReadingReport {
  bool pass = true;
  std::size_t trials = 0;
  // max ||direct part action - post-selected circuit output||_F
  double max_residual = 0.0;
  // max |sum_j p_j - 1| on channels
  double max_probability_gap = 0.0;
  std::vector<double> last_probabilities;
};

// Builds the single-measurement realization of `parts` and compares each
// outcome against the direct action of its part on random channels and
// input states.
DelayedReadingReport delayed_reading_check(std::span<const Supermap> parts,
                                           std::size_t trials,
                                           std::uint64_t seed,
                                           const Tolerances& tol = {});

// Random circuit with Haar isometries; needs dim_b * h_in >= k_in and
// k_out * dim_a >= h_out * dim_b.
CircuitRealization random_circuit(const SupermapDims& dims, std::size_t dim_b,
                                  std::size_t dim_a, std::uint64_t seed);
// The (deterministic) supermap of a random circuit.
Supermap random_deterministic_supermap(const SupermapDims& dims,
                                       std::size_t dim_b, std::size_t dim_a,
                                       std::uint64_t seed);

}  // namespace supermap
