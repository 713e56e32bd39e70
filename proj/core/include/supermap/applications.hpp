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

// Constructions built on supermaps: coding/decoding sandwiches, programmable
// channels and measurements, tomography supermaps and quantum-to-classical
// channels.

#include <cstddef>
#include <span>
#include <vector>

#include "supermap/operation.hpp"
#include "supermap/supermap.hpp"
#include "supermap/tester.hpp"

namespace supermap {

// E -> post o E o pre, with Kraus operators D_k (x) C_j^T on
// H_out (x) H_in. Both arguments must be channels.
Supermap sandwich_supermap(const QuantumOperation& pre,
                           const QuantumOperation& post,
                           const Tolerances& tol = {});

// Fixed interaction U on H_sys (x) H_prog. The program state selects the
// channel rho -> Tr_prog[U (rho (x) sigma) U^dagger].
class ProgrammableDevice {
 public:
  ProgrammableDevice(Matrix unitary, std::size_t dim_sys, std::size_t dim_prog,
                     const Tolerances& tol = {});

  const Matrix& unitary() const noexcept { return unitary_; }
  std::size_t dim_sys() const noexcept { return dim_sys_; }
  std::size_t dim_prog() const noexcept { return dim_prog_; }

 private:
  Matrix unitary_;
  std::size_t dim_sys_;
  std::size_t dim_prog_;
};

QuantumOperation programmable_channel(const ProgrammableDevice& dev,
                                      const Matrix& program,
                                      const Tolerances& tol = {});

// P_{sigma,j} = Tr_prog[E_j (I (x) sigma)] for a joint POVM {E_j} on
// H_sys (x) H_prog.
std::vector<Matrix> programmable_povm(std::span<const Matrix> joint_povm,
                                      const Matrix& program,
                                      std::size_t dim_sys,
                                      const Tolerances& tol = {});

// A bipartite state F on H_in (x) H_anc used as the probe of a tomography
// experiment on operations H_in -> H_out.
class TomographySetup {
 public:
  TomographySetup(Matrix faithful_state, std::size_t dim_in,
                  std::size_t dim_out, const Tolerances& tol = {});

  const Matrix& state() const noexcept { return state_; }
  std::size_t dim_in() const noexcept { return dim_in_; }
  std::size_t dim_anc() const noexcept { return dim_anc_; }
  std::size_t dim_out() const noexcept { return dim_out_; }

 private:
  Matrix state_;
  std::size_t dim_in_;
  std::size_t dim_anc_;
  std::size_t dim_out_;
};

// E -> (E (x) I)(F), a deterministic supermap with k_in = 1 and
// k_out = dim_out * dim_anc. Kraus operators are I (x) A_k where the columns
// of sqrt(F) are read as (I (x) A_k)|I>.
Supermap tomography_supermap(const TomographySetup& setup);

// (E (x) I)(F) by direct block contraction.
Matrix probe_output(const TomographySetup& setup, const QuantumOperation& op);

// Rank of E -> (E (x) I)(F) on the full operator space of H_out (x) H_in.
std::size_t tomography_rank(const TomographySetup& setup,
                            double rel_cutoff = 1e-8);
bool is_faithful(const TomographySetup& setup, double rel_cutoff = 1e-8);

// Tester measuring `povm` on H_out (x) H_anc after probing with F.
// Throws ValidationError("not faithful") or
// ValidationError("POVM not informationally complete").
Tester informationally_complete_tester_for(const TomographySetup& setup,
                                           std::span<const Matrix> povm,
                                           const Tolerances& tol = {});

// rho -> sum_n Tr[P_n rho] |n><n| on a classical register of dimension
// povm.size().
QuantumOperation povm_as_channel(std::span<const Matrix> povm,
                                 const Tolerances& tol = {});

// Single-qubit Pauli-eigenbasis POVM: the six projectors onto the X, Y, Z
// eigenstates, each weighted 1/3.
std::vector<Matrix> pauli_povm();
// Tensor products of single-qubit Pauli POVMs on `qubits` qubits.
std::vector<Matrix> pauli_product_povm(std::size_t qubits);
// Projectors |k><k| in dimension d.
std::vector<Matrix> computational_povm(std::size_t d);

}  // namespace supermap
