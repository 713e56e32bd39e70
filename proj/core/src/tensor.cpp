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

#include "supermap/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "supermap/error.hpp"

namespace supermap {

namespace {

constexpr double kPhaseThreshold = 1e-10;

void require_shape(const Matrix& m, const TensorShape& shape) {
  if (m.rows() != m.cols()) {
    throw DimensionError("matrix is not square");
  }
  if (static_cast<std::size_t>(m.rows()) != shape.total()) {
    std::ostringstream os;
    os << "tensor shape of total dimension " << shape.total()
       << " does not match matrix dimension " << m.rows();
    throw DimensionError(os.str());
  }
}

void require_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) {
    throw DimensionError("permutation length does not match factor count");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) {
      throw DimensionError("invalid permutation");
    }
    seen[p] = true;
  }
}

// Digits of a composite index, most significant factor first.
std::vector<std::size_t> digits_of(std::size_t index,
                                   const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

// For every composite index of `shape`, the index it maps to after the
// factor reordering `perm`.
std::vector<Eigen::Index> permuted_indices(const TensorShape& shape,
                                           std::span<const std::size_t> perm) {
  const auto& dims = shape.factors();
  require_permutation(perm, dims.size());
  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) new_dims[k] = dims[perm[k]];

  std::vector<Eigen::Index> map(shape.total());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto d = digits_of(i, dims);
    std::size_t out = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      out = out * new_dims[k] + d[perm[k]];
    }
    map[i] = static_cast<Eigen::Index>(out);
  }
  return map;
}

void fix_phase(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > kPhaseThreshold) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

}  // namespace

TensorShape::TensorShape(std::initializer_list<std::size_t> factors)
    : TensorShape(std::vector<std::size_t>(factors)) {}

TensorShape::TensorShape(std::vector<std::size_t> factors)
    : factors_(std::move(factors)) {
  for (std::size_t f : factors_) {
    if (f == 0) throw DimensionError("tensor factor of dimension zero");
  }
}

std::size_t TensorShape::total() const noexcept {
  return std::accumulate(factors_.begin(), factors_.end(), std::size_t{1},
                         std::multiplies<>());
}

double relative_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("relative_distance: shape mismatch");
  }
  const double scale = std::max({1.0, a.norm(), b.norm()});
  return (a - b).norm() / scale;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         relative_distance(a, b) <= tol;
}

bool is_finite(const Matrix& m) { return m.allFinite(); }

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return relative_distance(m, m.adjoint()) <= tol;
}

double isometry_residual(const Matrix& m) {
  return (m.adjoint() * m - Matrix::Identity(m.cols(), m.cols())).norm();
}

Matrix identity(std::size_t d) {
  return Matrix::Identity(static_cast<Eigen::Index>(d),
                          static_cast<Eigen::Index>(d));
}

Matrix matrix_unit(std::size_t d, std::size_t i, std::size_t j) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d),
                          static_cast<Eigen::Index>(d));
  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return m;
}

Vector max_entangled(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Vector v = Vector::Zero(n * n);
  for (Eigen::Index k = 0; k < n; ++k) v(k * n + k) = 1.0;
  return v;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron(std::initializer_list<Matrix> factors) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Matrix partial_trace(const Matrix& m, const TensorShape& shape,
                     std::span<const std::size_t> keep) {
  require_shape(m, shape);
  const auto& dims = shape.factors();
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size() || kept[k]) {
      throw DimensionError("partial_trace: invalid keep index");
    }
    kept[k] = true;
  }

  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    (kept[k] ? kept_dim : traced_dim) *= dims[k];
  }

  // Split every composite index into (kept index, traced index).
  const std::size_t n = shape.total();
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> groups(
      traced_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = digits_of(i, dims);
    std::size_t ki = 0;
    std::size_t ti = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (kept[k]) {
        ki = ki * dims[k] + d[k];
      } else {
        ti = ti * dims[k] + d[k];
      }
    }
    groups[ti].emplace_back(static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(ki));
  }

  const auto kd = static_cast<Eigen::Index>(kept_dim);
  Matrix out = Matrix::Zero(kd, kd);
  for (const auto& group : groups) {
    for (const auto& [i, ki] : group) {
      for (const auto& [j, kj] : group) out(ki, kj) += m(i, j);
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& m, const TensorShape& shape,
                     std::initializer_list<std::size_t> keep) {
  return partial_trace(m, shape,
                       std::span<const std::size_t>(keep.begin(), keep.size()));
}

Matrix partial_transpose(const Matrix& m, const TensorShape& shape,
                         std::size_t which) {
  require_shape(m, shape);
  const auto& dims = shape.factors();
  if (which >= dims.size()) {
    throw DimensionError("partial_transpose: factor index out of range");
  }
  std::size_t stride = 1;
  for (std::size_t k = which + 1; k < dims.size(); ++k) stride *= dims[k];
  const std::size_t d = dims[which];

  const auto n = m.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t di = (static_cast<std::size_t>(i) / stride) % d;
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::size_t dj = (static_cast<std::size_t>(j) / stride) % d;
      const auto shift = (static_cast<Eigen::Index>(dj) -
                          static_cast<Eigen::Index>(di)) *
                         static_cast<Eigen::Index>(stride);
      out(i + shift, j - shift) = m(i, j);
    }
  }
  return out;
}

Matrix permute_systems(const Matrix& m, const TensorShape& shape,
                       std::span<const std::size_t> perm) {
  require_shape(m, shape);
  return permute_factors(m, shape, perm, shape, perm);
}

Matrix permute_systems(const Matrix& m, const TensorShape& shape,
                       std::initializer_list<std::size_t> perm) {
  return permute_systems(
      m, shape, std::span<const std::size_t>(perm.begin(), perm.size()));
}

Matrix permute_factors(const Matrix& m, const TensorShape& row_shape,
                       std::span<const std::size_t> row_perm,
                       const TensorShape& col_shape,
                       std::span<const std::size_t> col_perm) {
  if (static_cast<std::size_t>(m.rows()) != row_shape.total() ||
      static_cast<std::size_t>(m.cols()) != col_shape.total()) {
    throw DimensionError("permute_factors: shape does not match matrix");
  }
  const auto rmap = permuted_indices(row_shape, row_perm);
  const auto cmap = permuted_indices(col_shape, col_perm);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(rmap[i], cmap[j]) = m(i, j);
    }
  }
  return out;
}

Matrix permutation_matrix(const TensorShape& shape,
                          std::span<const std::size_t> perm) {
  const auto map = permuted_indices(shape, perm);
  const auto n = static_cast<Eigen::Index>(shape.total());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(map[i], i) = 1.0;
  return p;
}

EigenDecomposition eigh(const Matrix& m, double tol) {
  if (!is_hermitian(m, tol)) {
    throw ValidationError("eigh: matrix is not Hermitian",
                          m.rows() == m.cols()
                              ? relative_distance(m, m.adjoint())
                              : 0.0);
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw Error("eigh: eigensolver did not converge");
  }
  const auto n = herm.rows();
  EigenDecomposition out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    // Eigen returns ascending order.
    const Eigen::Index src = n - 1 - k;
    out.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(src);
    out.vectors.col(k) = solver.eigenvectors().col(src);
    fix_phase(out.vectors.col(k));
  }
  return out;
}

double min_eigenvalue(const Matrix& m) {
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool is_positive_semidefinite(const Matrix& m, const Tolerances& tol) {
  if (!is_hermitian(m, tol.herm)) return false;
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double lmax = ev(ev.size() - 1);
  return ev(0) >= -tol.pos * std::max(1.0, lmax);
}

Matrix complete_isometry(const Matrix& partial, std::size_t target_cols,
                         double tol) {
  const auto rows = partial.rows();
  const auto cols = partial.cols();
  if (cols > rows) {
    throw DimensionError("complete_isometry: more columns than rows");
  }
  if (static_cast<Eigen::Index>(target_cols) < cols ||
      static_cast<Eigen::Index>(target_cols) > rows) {
    throw DimensionError("complete_isometry: target column count out of range");
  }
  std::vector<bool> determined(target_cols, false);
  std::fill(determined.begin(), determined.begin() + cols, true);
  Matrix padded = Matrix::Zero(rows, static_cast<Eigen::Index>(target_cols));
  padded.leftCols(cols) = partial;
  return complete_isometry(padded, determined, tol);
}

Matrix complete_unitary(const Matrix& partial, double tol) {
  return complete_isometry(partial, static_cast<std::size_t>(partial.rows()),
                           tol);
}

Matrix complete_isometry(const Matrix& partial,
                         const std::vector<bool>& determined, double tol) {
  const auto rows = partial.rows();
  const auto cols = partial.cols();
  if (cols > rows) {
    throw DimensionError("complete_isometry: more columns than rows");
  }
  if (determined.size() != static_cast<std::size_t>(cols)) {
    throw DimensionError("complete_isometry: mask length mismatch");
  }

  std::vector<Eigen::Index> fixed;
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (determined[static_cast<std::size_t>(j)]) fixed.push_back(j);
  }
  Matrix known(rows, static_cast<Eigen::Index>(fixed.size()));
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    known.col(static_cast<Eigen::Index>(k)) = partial.col(fixed[k]);
  }
  const double residual = isometry_residual(known);
  if (residual > tol * std::max<double>(1.0, std::sqrt(known.cols()))) {
    throw ValidationError("complete_isometry: columns are not orthonormal",
                          residual);
  }

  Matrix out = partial;
  // Orthonormal basis built so far (determined columns first).
  Matrix basis = known;
  Eigen::Index next_candidate = 0;
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (determined[static_cast<std::size_t>(j)]) continue;
    bool placed = false;
    while (!placed && next_candidate < rows) {
      Vector v = Vector::Zero(rows);
      v(next_candidate++) = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        v -= basis * (basis.adjoint() * v);
      }
      const double nrm = v.norm();
      if (nrm > 1e-6) {
        v /= nrm;
        out.col(j) = v;
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = v;
        placed = true;
      }
    }
    if (!placed) {
      throw Error("complete_isometry: could not find a complement vector");
    }
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix random_gaussian(std::size_t rows, std::size_t cols,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

Matrix random_isometry(std::size_t rows, std::size_t cols,
                       std::uint64_t seed) {
  if (cols > rows) {
    throw DimensionError("random_isometry: cols > rows");
  }
  if (cols == 0) throw DimensionError("random_isometry: zero columns");
  const Matrix g = random_gaussian(rows, cols, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() *
             Matrix::Identity(g.rows(), static_cast<Eigen::Index>(cols));
  const Matrix r = qr.matrixQR().topRows(static_cast<Eigen::Index>(cols))
                       .triangularView<Eigen::Upper>();
  // Absorb the phases of diag(R) so the distribution is Haar.
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

Matrix random_unitary(std::size_t d, std::uint64_t seed) {
  return random_isometry(d, d, seed);
}

Matrix random_hermitian(std::size_t d, std::uint64_t seed) {
  const Matrix g = random_gaussian(d, d, seed);
  return 0.5 * (g + g.adjoint());
}

Matrix random_density_matrix(std::size_t d, std::uint64_t seed,
                             std::size_t rank) {
  if (rank == 0) rank = d;
  const Matrix g = random_gaussian(d, rank, seed);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace supermap
