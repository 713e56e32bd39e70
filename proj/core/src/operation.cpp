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

#include "supermap/operation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "supermap/error.hpp"

namespace supermap {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

void require_choi_shape(std::size_t dim_in, std::size_t dim_out,
                        const Matrix& choi) {
  if (dim_in == 0 || dim_out == 0) {
    throw DimensionError("operation dimensions must be positive");
  }
  const auto n = idx(dim_in * dim_out);
  if (choi.rows() != n || choi.cols() != n) {
    std::ostringstream os;
    os << "Choi operator must be " << n << "x" << n << ", got " << choi.rows()
       << "x" << choi.cols();
    throw DimensionError(os.str());
  }
}

std::pair<double, double> eigen_range(const Matrix& m) {
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

}  // namespace

OperationDiagnostics diagnose_choi(std::size_t dim_in, std::size_t dim_out,
                                   const Matrix& choi, const Tolerances& tol) {
  require_choi_shape(dim_in, dim_out, choi);
  OperationDiagnostics d;
  d.finite = is_finite(choi);
  if (!d.finite) {
    d.hermitian = d.completely_positive = d.trace_non_increasing = false;
    d.channel = false;
    return d;
  }
  d.hermiticity = relative_distance(choi, choi.adjoint());
  d.hermitian = d.hermiticity <= tol.herm;

  const auto [lo, hi] = eigen_range(choi);
  d.min_eigenvalue = lo;
  d.max_eigenvalue = hi;
  d.completely_positive = d.hermitian && lo >= -tol.pos * std::max(1.0, hi);

  const Matrix effect = partial_trace(choi, TensorShape{dim_out, dim_in}, {1});
  const auto [elo, ehi] = eigen_range(effect);
  (void)elo;
  d.effect_max_eigenvalue = ehi;
  d.trace_non_increasing = ehi <= 1.0 + tol.pos * std::max(1.0, ehi);

  d.channel_residual = (effect - identity(dim_in)).norm();
  d.channel = d.completely_positive &&
              d.channel_residual <= tol.eq * std::sqrt(double(dim_in));
  return d;
}

QuantumOperation::QuantumOperation(std::size_t dim_in, std::size_t dim_out,
                                   Matrix choi, const Tolerances& tol)
    : dim_in_(dim_in), dim_out_(dim_out), choi_(std::move(choi)) {
  const auto d = diagnose_choi(dim_in_, dim_out_, choi_, tol);
  if (!d.finite) {
    throw ValidationError("Choi operator has non-finite entries");
  }
  if (!d.hermitian) {
    throw ValidationError("Choi operator is not Hermitian", d.hermiticity);
  }
  if (!d.completely_positive) {
    throw ValidationError("Choi operator is not positive semidefinite",
                          -d.min_eigenvalue);
  }
  if (!d.trace_non_increasing) {
    throw ValidationError("operation is not trace non-increasing",
                          d.effect_max_eigenvalue - 1.0);
  }
}

Matrix kraus_effect(const KrausSet& k) {
  Matrix sum = Matrix::Zero(idx(k.dim_in), idx(k.dim_in));
  for (const auto& e : k.operators) sum += e.adjoint() * e;
  return sum;
}

void validate_kraus(const KrausSet& k, const Tolerances& tol) {
  if (k.dim_in == 0 || k.dim_out == 0) {
    throw DimensionError("Kraus set dimensions must be positive");
  }
  for (const auto& e : k.operators) {
    if (e.rows() != idx(k.dim_out) || e.cols() != idx(k.dim_in)) {
      throw DimensionError("Kraus operator has the wrong shape");
    }
    if (!is_finite(e)) {
      throw ValidationError("Kraus operator has non-finite entries");
    }
  }
  const Matrix effect = kraus_effect(k);
  const auto [lo, hi] = eigen_range(effect);
  (void)lo;
  if (hi > 1.0 + tol.pos * std::max(1.0, hi)) {
    throw ValidationError("Kraus bound sum E^dagger E <= I violated", hi - 1.0);
  }
}

Vector vectorize(const Matrix& a) {
  Vector v(a.rows() * a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  }
  return v;
}

Matrix unvectorize(const Vector& v, std::size_t rows, std::size_t cols) {
  if (v.size() != idx(rows * cols)) {
    throw DimensionError("unvectorize: length mismatch");
  }
  Matrix a(idx(rows), idx(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = v(i * a.cols() + j);
  }
  return a;
}

QuantumOperation kraus_to_choi(const KrausSet& k, const Tolerances& tol) {
  validate_kraus(k, tol);
  const auto n = idx(k.dim_in * k.dim_out);
  Matrix choi = Matrix::Zero(n, n);
  for (const auto& e : k.operators) {
    const Vector v = vectorize(e);
    choi += v * v.adjoint();
  }
  return QuantumOperation(k.dim_in, k.dim_out, std::move(choi), tol);
}

KrausSet choi_to_kraus(const QuantumOperation& op, const Tolerances& tol) {
  const auto eig = eigh(op.choi(), tol.herm);
  KrausSet k{op.dim_in(), op.dim_out(), {}};
  const double lmax = eig.values.empty() ? 0.0 : eig.values.front();
  if (lmax <= 0.0) return k;
  const double cutoff = tol.pos * lmax;
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    const double lambda = eig.values[j];
    if (lambda <= cutoff) break;
    const Vector v = std::sqrt(lambda) * eig.vectors.col(idx(j));
    k.operators.push_back(unvectorize(v, op.dim_out(), op.dim_in()));
  }
  return k;
}

Matrix apply_choi(const Matrix& choi, std::size_t dim_in, std::size_t dim_out,
                  const Matrix& x) {
  require_choi_shape(dim_in, dim_out, choi);
  if (x.rows() != idx(dim_in) || x.cols() != idx(dim_in)) {
    throw DimensionError("input operator does not match dim_in");
  }
  const auto din = idx(dim_in);
  const auto dout = idx(dim_out);
  Matrix out = Matrix::Zero(dout, dout);
  for (Eigen::Index o = 0; o < dout; ++o) {
    for (Eigen::Index p = 0; p < dout; ++p) {
      Complex acc = 0.0;
      for (Eigen::Index a = 0; a < din; ++a) {
        for (Eigen::Index b = 0; b < din; ++b) {
          acc += choi(o * din + a, p * din + b) * x(a, b);
        }
      }
      out(o, p) = acc;
    }
  }
  return out;
}

Matrix apply_choi_local(const Matrix& choi, std::size_t dim_in,
                        std::size_t dim_out, std::size_t dim_anc,
                        const Matrix& x) {
  require_choi_shape(dim_in, dim_out, choi);
  const auto din = idx(dim_in);
  const auto dout = idx(dim_out);
  const auto da = idx(dim_anc);
  if (x.rows() != din * da || x.cols() != din * da) {
    throw DimensionError("input operator does not match dim_in * dim_anc");
  }
  Matrix out = Matrix::Zero(dout * da, dout * da);
  for (Eigen::Index a = 0; a < din; ++a) {
    for (Eigen::Index b = 0; b < din; ++b) {
      // Block <a|x|b> on the ancilla, tensored with E(|a><b|).
      const Matrix block = x.block(a * da, b * da, da, da);
      Matrix image(dout, dout);
      for (Eigen::Index o = 0; o < dout; ++o) {
        for (Eigen::Index p = 0; p < dout; ++p) {
          image(o, p) = choi(o * din + a, p * din + b);
        }
      }
      out += kron(image, block);
    }
  }
  return out;
}

Matrix choi_from_action(std::size_t dim_in, std::size_t dim_out,
                        const std::function<Matrix(const Matrix&)>& f) {
  const auto din = idx(dim_in);
  const auto dout = idx(dim_out);
  Matrix choi = Matrix::Zero(din * dout, din * dout);
  for (Eigen::Index m = 0; m < din; ++m) {
    for (Eigen::Index n = 0; n < din; ++n) {
      const Matrix image = f(matrix_unit(dim_in, std::size_t(m), std::size_t(n)));
      if (image.rows() != dout || image.cols() != dout) {
        throw DimensionError("choi_from_action: image has the wrong shape");
      }
      for (Eigen::Index o = 0; o < dout; ++o) {
        for (Eigen::Index p = 0; p < dout; ++p) {
          choi(o * din + m, p * din + n) = image(o, p);
        }
      }
    }
  }
  return choi;
}

Matrix apply_operation(const QuantumOperation& op, const Matrix& rho,
                       const Tolerances& tol) {
  if (rho.rows() != idx(op.dim_in()) || rho.cols() != idx(op.dim_in())) {
    throw DimensionError("state dimension does not match dim_in");
  }
  if (!is_hermitian(rho, tol.herm)) {
    throw ValidationError("input state is not Hermitian");
  }
  return apply_choi(op.choi(), op.dim_in(), op.dim_out(), rho);
}

Matrix effect_of(const QuantumOperation& op) {
  return partial_trace(op.choi(), op.shape(), {1});
}

double channel_residual(const QuantumOperation& op) {
  return (effect_of(op) - identity(op.dim_in())).norm();
}

bool is_channel(const QuantumOperation& op, const Tolerances& tol) {
  return channel_residual(op) <= tol.eq * std::sqrt(double(op.dim_in()));
}

QuantumOperation compose(const QuantumOperation& second,
                         const QuantumOperation& first, const Tolerances& tol) {
  if (first.dim_out() != second.dim_in()) {
    throw DimensionError("compose: first.dim_out != second.dim_in");
  }
  Matrix choi = choi_from_action(
      first.dim_in(), second.dim_out(), [&](const Matrix& x) {
        const Matrix mid =
            apply_choi(first.choi(), first.dim_in(), first.dim_out(), x);
        return apply_choi(second.choi(), second.dim_in(), second.dim_out(),
                          mid);
      });
  return QuantumOperation(first.dim_in(), second.dim_out(), std::move(choi),
                          tol);
}

QuantumOperation tensor(const QuantumOperation& a, const QuantumOperation& b,
                        const Tolerances& tol) {
  const TensorShape shape{a.dim_out(), a.dim_in(), b.dim_out(), b.dim_in()};
  Matrix choi = permute_systems(kron(a.choi(), b.choi()), shape, {0, 2, 1, 3});
  return QuantumOperation(a.dim_in() * b.dim_in(), a.dim_out() * b.dim_out(),
                          std::move(choi), tol);
}

QuantumOperation identity_channel(std::size_t d) {
  const Vector v = max_entangled(d);
  return QuantumOperation(d, d, v * v.adjoint());
}

QuantumOperation unitary_channel(const Matrix& u) {
  if (u.rows() == 0 || u.cols() == 0) {
    throw DimensionError("unitary_channel: empty matrix");
  }
  KrausSet k{static_cast<std::size_t>(u.cols()),
             static_cast<std::size_t>(u.rows()),
             {u}};
  return kraus_to_choi(k);
}

QuantumOperation replacement_channel(std::size_t dim_in, const Matrix& sigma) {
  return QuantumOperation(dim_in, static_cast<std::size_t>(sigma.rows()),
                          kron(sigma, identity(dim_in)));
}

KrausSet random_kraus(std::size_t dim_in, std::size_t dim_out,
                      std::size_t kraus_rank, std::uint64_t seed) {
  if (kraus_rank == 0) throw DimensionError("kraus_rank must be >= 1");
  // Stinespring isometry H_in -> C^rank (x) H_out; block k is E_k.
  const Matrix v = random_isometry(kraus_rank * dim_out, dim_in, seed);
  KrausSet k{dim_in, dim_out, {}};
  for (std::size_t r = 0; r < kraus_rank; ++r) {
    k.operators.push_back(v.middleRows(idx(r * dim_out), idx(dim_out)));
  }
  return k;
}

QuantumOperation random_channel(std::size_t dim_in, std::size_t dim_out,
                                std::size_t kraus_rank, std::uint64_t seed) {
  return kraus_to_choi(random_kraus(dim_in, dim_out, kraus_rank, seed));
}

}  // namespace supermap
