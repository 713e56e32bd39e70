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

// Dense complex linear algebra with tensor-factor bookkeeping.
//
// Composite indices follow one fixed convention throughout the library: for
// a space with factors (d_0, d_1, ..., d_{k-1}) the basis vector
// |i_0> (x) |i_1> (x) ... has index ((i_0 * d_1 + i_1) * d_2 + i_2) ..., i.e.
// the leftmost factor is the most significant digit. This matches
// Eigen's kroneckerProduct and row-major vectorization.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace supermap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Numerical tolerances. Equality and Hermiticity are relative Frobenius
// tests; positivity accepts eigenvalues >= -pos * max(1, lambda_max).
struct Tolerances {
  double eq = 1e-8;
  double herm = 1e-8;
  double pos = 1e-9;
};

// Ordered list of tensor-factor dimensions annotating a matrix dimension.
class TensorShape {
 public:
  TensorShape() = default;
  TensorShape(std::initializer_list<std::size_t> factors);
  explicit TensorShape(std::vector<std::size_t> factors);

  const std::vector<std::size_t>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  std::size_t operator[](std::size_t i) const { return factors_.at(i); }
  // Product of all factors.
  std::size_t total() const noexcept;

  friend bool operator==(const TensorShape&, const TensorShape&) = default;

 private:
  std::vector<std::size_t> factors_;
};

// Frobenius distance ||a - b|| relative to max(1, ||a||, ||b||).
double relative_distance(const Matrix& a, const Matrix& b);
bool approx_equal(const Matrix& a, const Matrix& b, double tol = 1e-8);

bool is_finite(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = 1e-8);
// ||m^dagger m - I||_F.
double isometry_residual(const Matrix& m);

Matrix identity(std::size_t d);
// |i><j| in dimension d.
Matrix matrix_unit(std::size_t d, std::size_t i, std::size_t j);
// Unnormalized maximally entangled vector sum_n |n>|n> in C^d (x) C^d.
Vector max_entangled(std::size_t d);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron(std::initializer_list<Matrix> factors);

// Traces out every factor of `shape` not listed in `keep`. The kept factors
// retain their relative order.
Matrix partial_trace(const Matrix& m, const TensorShape& shape,
                     std::span<const std::size_t> keep);
Matrix partial_trace(const Matrix& m, const TensorShape& shape,
                     std::initializer_list<std::size_t> keep);

// Transposes the indices of factor `which` in the computational basis.
Matrix partial_transpose(const Matrix& m, const TensorShape& shape,
                         std::size_t which);

// Reorders tensor factors. Factor k of the result is factor perm[k] of the
// input, on rows and columns alike (conjugation by the permutation unitary).
Matrix permute_systems(const Matrix& m, const TensorShape& shape,
                       std::span<const std::size_t> perm);
Matrix permute_systems(const Matrix& m, const TensorShape& shape,
                       std::initializer_list<std::size_t> perm);

// Rectangular variant: rows and columns carry independent factorizations
// and permutations.
Matrix permute_factors(const Matrix& m, const TensorShape& row_shape,
                       std::span<const std::size_t> row_perm,
                       const TensorShape& col_shape,
                       std::span<const std::size_t> col_perm);

// Permutation unitary P with P (|x_0>...|x_{k-1}>) = |x_perm[0]>...|x_perm[k-1]>,
// so that permute_systems(m) == P m P^dagger.
Matrix permutation_matrix(const TensorShape& shape,
                          std::span<const std::size_t> perm);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns, orthonormal
};

// Hermitian eigendecomposition. Eigenvalues are sorted descending and each
// eigenvector's first entry with modulus above 1e-10 is made real positive.
// Throws ValidationError when m is not Hermitian within tol.
EigenDecomposition eigh(const Matrix& m, double tol = 1e-8);

// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const Matrix& m);
bool is_positive_semidefinite(const Matrix& m, const Tolerances& tol = {});

// Extends a matrix with orthonormal columns to `target_cols` orthonormal
// columns. Existing columns are kept verbatim; new ones come from
// Gram-Schmidt over the computational basis, so the result is deterministic.
Matrix complete_isometry(const Matrix& partial, std::size_t target_cols,
                         double tol = 1e-8);
// Same, completing to a square unitary.
Matrix complete_unitary(const Matrix& partial, double tol = 1e-8);
// Columns whose `determined` flag is false are ignored on input and replaced
// by orthonormal complement vectors; the column count is preserved.
Matrix complete_isometry(const Matrix& partial,
                         const std::vector<bool>& determined,
                         double tol = 1e-8);

// Mixes a base seed with a stream index (splitmix64), for deriving
// independent fixture seeds from one user-provided seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Haar-random isometry from the QR factorization of a seeded complex
// Gaussian matrix. Bit-identical for identical (rows, cols, seed).
Matrix random_isometry(std::size_t rows, std::size_t cols, std::uint64_t seed);
Matrix random_unitary(std::size_t d, std::uint64_t seed);
// Complex Gaussian (Ginibre) matrix with unit-variance entries.
Matrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed);
Matrix random_hermitian(std::size_t d, std::uint64_t seed);
// Density matrix G G^dagger / Tr[G G^dagger] with G of the given rank.
Matrix random_density_matrix(std::size_t d, std::uint64_t seed,
                             std::size_t rank = 0);

}  // namespace supermap
