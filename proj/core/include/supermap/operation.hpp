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

// Quantum operations in the Choi representation.
//
// The Choi operator of a CP map E from H_in to H_out is
//     E = (E (x) I)(|I><I|),   |I> = sum_n |n>|n>  (unnormalized),
// living on H_out (x) H_in (output factor first). The map is recovered as
//     E(rho) = Tr_in[(I (x) rho^T) E],
// and the effect of the operation is P = Tr_out[E], so that the
// probability of E occurring on rho is Tr[rho^T P] = Tr[E(rho)].

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "supermap/tensor.hpp"

namespace supermap {

// Residuals describing how far a candidate Choi operator is from a valid
// quantum operation. Produced without throwing, for reporting.
struct OperationDiagnostics {
  double hermiticity = 0.0;      // relative ||E - E^dagger||
  double min_eigenvalue = 0.0;   // of the Choi operator
  double max_eigenvalue = 0.0;
  double effect_max_eigenvalue = 0.0;  // of P = Tr_out[E]
  double channel_residual = 0.0;      // ||Tr_out[E] - I||_F
  bool finite = true;
  bool hermitian = true;
  bool completely_positive = true;
  bool trace_non_increasing = true;
  bool channel = true;
};

OperationDiagnostics diagnose_choi(std::size_t dim_in, std::size_t dim_out,
                                   const Matrix& choi,
                                   const Tolerances& tol = {});

// A completely positive trace-non-increasing map stored by its Choi
// operator. Invariants are checked on construction.
class QuantumOperation {
 public:
  QuantumOperation(std::size_t dim_in, std::size_t dim_out, Matrix choi,
                   const Tolerances& tol = {});

  std::size_t dim_in() const noexcept { return dim_in_; }
  std::size_t dim_out() const noexcept { return dim_out_; }
  const Matrix& choi() const noexcept { return choi_; }
  // Factor order (out, in).
  TensorShape shape() const { return TensorShape{dim_out_, dim_in_}; }

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  Matrix choi_;
};

struct KrausSet {
  std::size_t dim_in = 1;
  std::size_t dim_out = 1;
  std::vector<Matrix> operators;  // each dim_out x dim_in
};

// sum_j E_j^dagger E_j.
Matrix kraus_effect(const KrausSet& k);
// Checks shapes and the bound sum_j E_j^dagger E_j <= I.
void validate_kraus(const KrausSet& k, const Tolerances& tol = {});

// vec(A) = (A (x) I)|I>, i.e. the row-major flattening of A.
Vector vectorize(const Matrix& a);
Matrix unvectorize(const Vector& v, std::size_t rows, std::size_t cols);

QuantumOperation kraus_to_choi(const KrausSet& k, const Tolerances& tol = {});
// Canonical (Hilbert-Schmidt orthogonal) Kraus form from the eigenvectors of
// the Choi operator with eigenvalues above tol.pos * lambda_max.
KrausSet choi_to_kraus(const QuantumOperation& op, const Tolerances& tol = {});

// Linear extension of Tr_in[(I (x) x^T) choi] to arbitrary operators x.
Matrix apply_choi(const Matrix& choi, std::size_t dim_in, std::size_t dim_out,
                  const Matrix& x);
// (E (x) I_anc)(x) for x on H_in (x) H_anc; result on H_out (x) H_anc.
Matrix apply_choi_local(const Matrix& choi, std::size_t dim_in,
                        std::size_t dim_out, std::size_t dim_anc,
                        const Matrix& x);
// Choi operator sum_{mn} f(|m><n|) (x) |m><n| of a linear map given by its
// action.
Matrix choi_from_action(std::size_t dim_in, std::size_t dim_out,
                        const std::function<Matrix(const Matrix&)>& f);

// Unnormalized output state E(rho); its trace is the probability of E.
Matrix apply_operation(const QuantumOperation& op, const Matrix& rho,
                       const Tolerances& tol = {});
// P = Tr_out[E].
Matrix effect_of(const QuantumOperation& op);
// ||Tr_out[E] - I||_F <= tol.eq * sqrt(dim_in).
bool is_channel(const QuantumOperation& op, const Tolerances& tol = {});
double channel_residual(const QuantumOperation& op);

// second o first.
QuantumOperation compose(const QuantumOperation& second,
                         const QuantumOperation& first,
                         const Tolerances& tol = {});
// a (x) b with Choi factor order (out_a, out_b, in_a, in_b).
QuantumOperation tensor(const QuantumOperation& a, const QuantumOperation& b,
                        const Tolerances& tol = {});

QuantumOperation identity_channel(std::size_t d);
QuantumOperation unitary_channel(const Matrix& u);
// rho -> Tr[rho] sigma.
QuantumOperation replacement_channel(std::size_t dim_in, const Matrix& sigma);
// Channel from a random Stinespring isometry H_in -> C^rank (x) H_out.
QuantumOperation random_channel(std::size_t dim_in, std::size_t dim_out,
                                std::size_t kraus_rank, std::uint64_t seed);
KrausSet random_kraus(std::size_t dim_in, std::size_t dim_out,
                      std::size_t kraus_rank, std::uint64_t seed);

}  // namespace supermap
