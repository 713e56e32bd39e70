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

#include "supermap/supermap.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "supermap/error.hpp"

namespace supermap {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

std::pair<double, double> eigen_range(const Matrix& m) {
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

// Finishes a determinism report from the extracted Choi operator of N_*
// (on H_in (x) K_in) or of N (on K_in (x) H_in, when `effect_side`).
void assess_induced_map(DeterminismReport& r, const Matrix& choi,
                        std::size_t traced_dim, std::size_t kept_dim,
                        bool effect_side, const Tolerances& tol) {
  // N_* must be trace preserving: Tr_{H_in}[J] = I_{K_in}.
  // N must be identity preserving: sum_m N(|m><m|) = I_{K_in}, which is
  // Tr_{H_in} of its Choi operator taken on the second factor.
  const Matrix reduced =
      effect_side
          ? partial_trace(choi, TensorShape{kept_dim, traced_dim}, {0})
          : partial_trace(choi, TensorShape{traced_dim, kept_dim}, {1});
  r.trace_preservation_residual = (reduced - identity(kept_dim)).norm();
  const auto [lo, hi] = eigen_range(choi);
  r.min_eigenvalue = lo;
  const bool hermitian = is_hermitian(choi, tol.herm);
  const bool cp = hermitian && lo >= -tol.pos * std::max(1.0, hi);
  const bool tp = r.trace_preservation_residual <=
                  tol.eq * std::sqrt(double(kept_dim));
  r.deterministic = r.residual <= tol.eq && cp && tp;
}

}  // namespace

struct Supermap::Cache {
  std::once_flag once;
  DeterminismReport report;
};

Supermap::Supermap(SupermapDims dims, std::vector<Matrix> kraus)
    : dims_(dims), kraus_(std::move(kraus)), cache_(std::make_shared<Cache>()) {
  if (dims_.h_in == 0 || dims_.h_out == 0 || dims_.k_in == 0 ||
      dims_.k_out == 0) {
    throw DimensionError("supermap dimensions must be positive");
  }
  if (kraus_.empty()) {
    throw ValidationError("supermap needs at least one Kraus operator");
  }
  for (const auto& s : kraus_) {
    if (s.rows() != idx(dims_.output_dim()) ||
        s.cols() != idx(dims_.input_dim())) {
      std::ostringstream os;
      os << "supermap Kraus operator must be " << dims_.output_dim() << "x"
         << dims_.input_dim() << ", got " << s.rows() << "x" << s.cols();
      throw DimensionError(os.str());
    }
    if (!is_finite(s)) {
      throw ValidationError("supermap Kraus operator has non-finite entries");
    }
  }
}

const DeterminismReport& Supermap::determinism() const {
  std::call_once(cache_->once,
                 [this] { cache_->report = check_determinism(*this); });
  return cache_->report;
}

Matrix EffectMap::apply(const Matrix& effect) const {
  Matrix out = Matrix::Zero(idx(k_in), idx(k_in));
  for (const auto& n : kraus) out += n.adjoint() * effect * n;
  return out;
}

Matrix EffectMap::apply_predual(const Matrix& rho) const {
  Matrix out = Matrix::Zero(idx(h_in), idx(h_in));
  for (const auto& n : kraus) out += n * rho * n.adjoint();
  return out;
}

Supermap identity_supermap(std::size_t h_in, std::size_t h_out) {
  return Supermap({h_in, h_out, h_in, h_out}, {identity(h_in * h_out)});
}

Matrix apply_to_choi(const Supermap& s, const Matrix& e) {
  const auto n = idx(s.dims().input_dim());
  if (e.rows() != n || e.cols() != n) {
    throw DimensionError("operator does not live on H_out (x) H_in");
  }
  const auto m = idx(s.dims().output_dim());
  Matrix out = Matrix::Zero(m, m);
  for (const auto& k : s.kraus()) out += k * e * k.adjoint();
  return out;
}

QuantumOperation apply_supermap(const Supermap& s, const QuantumOperation& op,
                                const Tolerances& tol) {
  if (op.dim_in() != s.dims().h_in || op.dim_out() != s.dims().h_out) {
    throw DimensionError("operation dimensions do not match the supermap");
  }
  Matrix out = apply_to_choi(s, op.choi());
  return QuantumOperation(s.dims().k_in, s.dims().k_out, std::move(out), tol);
}

Matrix dual_supermap(const Supermap& s, const Matrix& o) {
  const auto m = idx(s.dims().output_dim());
  if (o.rows() != m || o.cols() != m) {
    throw DimensionError("operator does not live on K_out (x) K_in");
  }
  const auto n = idx(s.dims().input_dim());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& k : s.kraus()) out += k.adjoint() * o * k;
  return out;
}

NormalizationFunctional is_normalization_functional(const Matrix& c,
                                                    std::size_t h_out,
                                                    std::size_t h_in,
                                                    const Tolerances& tol) {
  const TensorShape shape{h_out, h_in};
  if (c.rows() != c.cols() ||
      static_cast<std::size_t>(c.rows()) != shape.total()) {
    throw DimensionError("normalization functional has the wrong size");
  }
  NormalizationFunctional r;
  r.rho = partial_trace(c, shape, {1}) / double(h_out);
  r.residual = relative_distance(c, kron(identity(h_out), r.rho));
  const double trace_gap = std::abs(r.rho.trace() - Complex(1.0, 0.0));
  r.valid = r.residual <= tol.eq && trace_gap <= tol.eq;
  return r;
}

DeterminismReport check_determinism(const Supermap& s, const Tolerances& tol) {
  const auto& d = s.dims();
  const TensorShape hshape{d.h_out, d.h_in};
  const auto hin = idx(d.h_in);
  const auto kin = idx(d.k_in);

  DeterminismReport r;
  Matrix n_star = Matrix::Zero(hin * kin, hin * kin);
  const Matrix id_kout = identity(d.k_out);
  const Matrix id_hout = identity(d.h_out);
  for (Eigen::Index a = 0; a < kin; ++a) {
    for (Eigen::Index b = 0; b < kin; ++b) {
      const Matrix unit = matrix_unit(d.k_in, std::size_t(a), std::size_t(b));
      const Matrix x = dual_supermap(s, kron(id_kout, unit));
      const Matrix image = partial_trace(x, hshape, {1}) / double(d.h_out);
      r.residual =
          std::max(r.residual, relative_distance(x, kron(id_hout, image)));
      // J = sum_ab N_*(|a><b|) (x) |a><b| on H_in (x) K_in.
      for (Eigen::Index i = 0; i < hin; ++i) {
        for (Eigen::Index j = 0; j < hin; ++j) {
          n_star(i * kin + a, j * kin + b) = image(i, j);
        }
      }
    }
  }
  assess_induced_map(r, n_star, d.h_in, d.k_in, false, tol);
  r.n_star_choi = std::move(n_star);
  return r;
}

DeterminismReport check_determinism_via_effects(const Supermap& s,
                                                const Tolerances& tol) {
  const auto& d = s.dims();
  const TensorShape kshape{d.k_out, d.k_in};
  const auto hin = idx(d.h_in);
  const auto hout = idx(d.h_out);
  const auto kin = idx(d.k_in);
  const auto dim = idx(d.input_dim());

  auto output_effect = [&](Eigen::Index row, Eigen::Index col) {
    Matrix e = Matrix::Zero(dim, dim);
    e(row, col) = 1.0;
    return partial_trace(apply_to_choi(s, e), kshape, {1});
  };

  DeterminismReport r;
  // N(|m><n|) read off with H_out in state |0><0|.
  std::vector<Matrix> images(static_cast<std::size_t>(hin * hin));
  for (Eigen::Index m = 0; m < hin; ++m) {
    for (Eigen::Index n = 0; n < hin; ++n) {
      images[static_cast<std::size_t>(m * hin + n)] = output_effect(m, n);
    }
  }
  const Matrix zero = Matrix::Zero(kin, kin);
  for (Eigen::Index x = 0; x < hout; ++x) {
    for (Eigen::Index y = 0; y < hout; ++y) {
      if (x == 0 && y == 0) continue;
      for (Eigen::Index m = 0; m < hin; ++m) {
        for (Eigen::Index n = 0; n < hin; ++n) {
          const Matrix t = output_effect(x * hin + m, y * hin + n);
          const Matrix& expected =
              x == y ? images[static_cast<std::size_t>(m * hin + n)] : zero;
          r.residual = std::max(r.residual, relative_distance(t, expected));
        }
      }
    }
  }

  // Choi operator of N on K_in (x) H_in.
  Matrix n_choi = Matrix::Zero(kin * hin, kin * hin);
  for (Eigen::Index m = 0; m < hin; ++m) {
    for (Eigen::Index n = 0; n < hin; ++n) {
      const Matrix& image = images[static_cast<std::size_t>(m * hin + n)];
      for (Eigen::Index i = 0; i < kin; ++i) {
        for (Eigen::Index j = 0; j < kin; ++j) {
          n_choi(i * hin + m, j * hin + n) = image(i, j);
        }
      }
    }
  }
  assess_induced_map(r, n_choi, d.h_in, d.k_in, true, tol);
  return r;
}

bool is_deterministic(const Supermap& s) { return s.determinism().deterministic; }

bool is_deterministic(const Supermap& s, const Tolerances& tol) {
  return check_determinism(s, tol).deterministic;
}

EffectMap effect_map_of(const Supermap& s, const Tolerances& tol) {
  const DeterminismReport report = check_determinism(s, tol);
  if (!report.deterministic) {
    throw NotDeterministicError("supermap is not deterministic",
                                report.residual);
  }
  const auto& d = s.dims();
  // Loosen only the trace bound: N_* is trace preserving up to tol.eq.
  Tolerances relaxed = tol;
  relaxed.pos = std::max(tol.pos, tol.eq);
  const QuantumOperation n_star(d.k_in, d.h_in, *report.n_star_choi, relaxed);
  KrausSet k = choi_to_kraus(n_star, tol);
  return EffectMap{d.h_in, d.k_in, std::move(k.operators)};
}

bool is_probability_preserving(const Supermap& s, const Tolerances& tol) {
  const auto& d = s.dims();
  if (d.h_in != d.k_in) {
    throw DimensionError("probability preservation needs h_in == k_in");
  }
  const EffectMap n = effect_map_of(s, tol);
  for (std::size_t m = 0; m < d.h_in; ++m) {
    for (std::size_t k = 0; k < d.h_in; ++k) {
      const Matrix unit = matrix_unit(d.h_in, m, k);
      if (relative_distance(n.apply(unit), unit) > tol.eq) return false;
    }
  }
  return true;
}

Supermap tensor_supermaps(const Supermap& a, const Supermap& b) {
  const auto& da = a.dims();
  const auto& db = b.dims();
  const TensorShape rows{da.k_out, da.k_in, db.k_out, db.k_in};
  const TensorShape cols{da.h_out, da.h_in, db.h_out, db.h_in};
  const std::size_t perm[] = {0, 2, 1, 3};
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) {
      kraus.push_back(permute_factors(kron(ka, kb), rows, perm, cols, perm));
    }
  }
  return Supermap({da.h_in * db.h_in, da.h_out * db.h_out, da.k_in * db.k_in,
                   da.k_out * db.k_out},
                  std::move(kraus));
}

Supermap sum_supermaps(std::span<const Supermap> parts) {
  if (parts.empty()) throw DimensionError("sum_supermaps: no parts");
  const SupermapDims dims = parts.front().dims();
  std::vector<Matrix> kraus;
  for (const auto& p : parts) {
    if (!(p.dims() == dims)) {
      throw DimensionError("sum_supermaps: parts have different dimensions");
    }
    kraus.insert(kraus.end(), p.kraus().begin(), p.kraus().end());
  }
  return Supermap(dims, std::move(kraus));
}

double action_distance(const Supermap& a, const Supermap& b) {
  if (!(a.dims() == b.dims())) {
    throw DimensionError("action_distance: dimension mismatch");
  }
  const auto n = idx(a.dims().input_dim());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      worst = std::max(worst, (apply_to_choi(a, e) - apply_to_choi(b, e)).norm());
    }
  }
  return worst;
}

bool extensionally_equal(const Supermap& a, const Supermap& b, double tol) {
  return action_distance(a, b) <= tol;
}

}  // namespace supermap
