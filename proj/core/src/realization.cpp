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

#include "supermap/realization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "supermap/error.hpp"

namespace supermap {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

// S_i = (I (x) <a|) W (I (x) Z) for an arbitrary ancilla vector |a>.
// Entry [(n, c), (m, x)] = sum_j <n, a| W |m, j> V[(j, x), c].
Matrix kraus_for_ancilla(const CircuitRealization& c, const SupermapDims& d,
                         const Vector& a) {
  const auto kout = idx(d.k_out);
  const auto kin = idx(d.k_in);
  const auto hout = idx(d.h_out);
  const auto hin = idx(d.h_in);
  const auto da = idx(c.dim_a);
  const auto db = idx(c.dim_b);

  // (I (x) <a|) W : H_out (x) B -> K_out.
  Matrix wa = Matrix::Zero(kout, hout * db);
  for (Eigen::Index n = 0; n < kout; ++n) {
    for (Eigen::Index i = 0; i < da; ++i) {
      if (a(i) == Complex(0.0)) continue;
      wa.row(n) += std::conj(a(i)) * c.w.row(n * da + i);
    }
  }

  Matrix s = Matrix::Zero(kout * kin, hout * hin);
  for (Eigen::Index n = 0; n < kout; ++n) {
    for (Eigen::Index m = 0; m < hout; ++m) {
      for (Eigen::Index j = 0; j < db; ++j) {
        const Complex coeff = wa(n, m * db + j);
        if (coeff == Complex(0.0)) continue;
        for (Eigen::Index cc = 0; cc < kin; ++cc) {
          for (Eigen::Index x = 0; x < hin; ++x) {
            s(n * kin + cc, m * hin + x) += coeff * c.v(j * hin + x, cc);
          }
        }
      }
    }
  }
  return s;
}

// Orthonormal vectors spanning the range of a projector.
std::vector<Vector> projector_range(const Matrix& p) {
  const auto eig = eigh(p);
  std::vector<Vector> out;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (eig.values[k] > 0.5) out.emplace_back(eig.vectors.col(idx(k)));
  }
  return out;
}

}  // namespace

void validate_circuit(const CircuitRealization& c, const SupermapDims& d,
                      const Tolerances& tol) {
  if (c.dim_a == 0 || c.dim_b == 0) {
    throw DimensionError("ancilla dimensions must be positive");
  }
  if (c.v.rows() != idx(c.dim_b * d.h_in) || c.v.cols() != idx(d.k_in)) {
    std::ostringstream os;
    os << "V must be " << c.dim_b * d.h_in << "x" << d.k_in << ", got "
       << c.v.rows() << "x" << c.v.cols();
    throw DimensionError(os.str());
  }
  if (c.w.rows() != idx(d.k_out * c.dim_a) ||
      c.w.cols() != idx(d.h_out * c.dim_b)) {
    std::ostringstream os;
    os << "W must be " << d.k_out * c.dim_a << "x" << d.h_out * c.dim_b
       << ", got " << c.w.rows() << "x" << c.w.cols();
    throw DimensionError(os.str());
  }
  if (!is_finite(c.v) || !is_finite(c.w)) {
    throw ValidationError("circuit has non-finite entries");
  }
  const double rv = isometry_residual(c.v);
  if (rv > tol.eq) throw ValidationError("V is not an isometry", rv);
  const double rw = isometry_residual(c.w);
  if (rw > tol.eq) throw ValidationError("W is not an isometry", rw);

  if (c.projectors.empty()) return;
  const auto da = idx(c.dim_a);
  Matrix sum = Matrix::Zero(da, da);
  for (std::size_t j = 0; j < c.projectors.size(); ++j) {
    const Matrix& p = c.projectors[j];
    if (p.rows() != da || p.cols() != da) {
      throw DimensionError("projector does not act on the ancilla A");
    }
    if (!is_hermitian(p, tol.herm)) {
      throw ValidationError("projector is not Hermitian");
    }
    const double idem = relative_distance(p * p, p);
    if (idem > tol.eq) throw ValidationError("projector is not idempotent", idem);
    for (std::size_t k = j + 1; k < c.projectors.size(); ++k) {
      const double overlap = (p * c.projectors[k]).norm();
      if (overlap > tol.eq) {
        throw ValidationError("projectors are not mutually orthogonal",
                              overlap);
      }
    }
    sum += p;
  }
  const double completeness = (sum - identity(c.dim_a)).norm();
  if (completeness > tol.eq) {
    throw ValidationError("projectors do not sum to the identity",
                          completeness);
  }
}

CircuitRealization realize(const Supermap& s, const Tolerances& tol) {
  const EffectMap n = effect_map_of(s, tol);
  const auto& d = s.dims();
  const auto kout = idx(d.k_out);
  const auto kin = idx(d.k_in);
  const auto hout = idx(d.h_out);
  const auto hin = idx(d.h_in);

  CircuitRealization c;
  c.dim_b = n.kraus.size();
  c.dim_a = s.kraus().size();
  const auto db = idx(c.dim_b);
  const auto da = idx(c.dim_a);

  // V = sum_j |b_j> (x) conj(N_j).
  c.v = Matrix::Zero(db * hin, kin);
  for (Eigen::Index j = 0; j < db; ++j) {
    c.v.middleRows(j * hin, hin) = n.kraus[std::size_t(j)].conjugate();
  }

  // W_{ni,mj} = <R_mj, L_ni>_HS / <R_mj, R_mj>_HS with
  // L_ni = (<k_n| (x) I) S_i and R_mj = <h_m| (x) N_j^dagger. The right set
  // is Hilbert-Schmidt orthogonal because {N_j} is canonical.
  c.w = Matrix::Zero(kout * da, hout * db);
  std::vector<double> weight(static_cast<std::size_t>(db));
  for (Eigen::Index j = 0; j < db; ++j) {
    weight[std::size_t(j)] = n.kraus[std::size_t(j)].squaredNorm();
  }
  for (Eigen::Index i = 0; i < da; ++i) {
    const Matrix& si = s.kraus()[std::size_t(i)];
    for (Eigen::Index nn = 0; nn < kout; ++nn) {
      for (Eigen::Index m = 0; m < hout; ++m) {
        // Block of L_ni acting on |h_m> (x) H_in: a k_in x h_in matrix.
        const Matrix block = si.block(nn * kin, m * hin, kin, hin);
        for (Eigen::Index j = 0; j < db; ++j) {
          // Tr[R^dagger L] = sum_{c,x} N_j[x, c] L[c, (m, x)].
          const Complex overlap =
              (n.kraus[std::size_t(j)].transpose().cwiseProduct(block)).sum();
          c.w(nn * da + i, m * db + j) = overlap / weight[std::size_t(j)];
        }
      }
    }
  }

  // Every column is fixed by the expansion; completion only validates.
  const std::vector<bool> determined(std::size_t(c.w.cols()), true);
  try {
    c.w = complete_isometry(c.w, determined, tol.eq);
  } catch (const ValidationError& e) {
    throw ValidationError(
        "W is not an isometry; the supermap Kraus operators are numerically "
        "inconsistent with its effect-map",
        e.residual());
  }
  validate_circuit(c, d, tol);
  return c;
}

CircuitRealization realize_probabilistic(std::span<const Supermap> parts,
                                         const Tolerances& tol) {
  const Supermap total = sum_supermaps(parts);
  CircuitRealization c = realize(total, tol);
  std::size_t offset = 0;
  for (const auto& part : parts) {
    Matrix p = Matrix::Zero(idx(c.dim_a), idx(c.dim_a));
    for (std::size_t k = 0; k < part.kraus().size(); ++k) {
      p(idx(offset + k), idx(offset + k)) = 1.0;
    }
    offset += part.kraus().size();
    c.projectors.push_back(std::move(p));
  }
  return c;
}

std::vector<Supermap> circuit_to_supermap(const CircuitRealization& c,
                                          const SupermapDims& dims,
                                          const Tolerances& tol) {
  validate_circuit(c, dims, tol);
  std::vector<Supermap> out;
  if (c.projectors.empty()) {
    std::vector<Matrix> kraus;
    for (std::size_t i = 0; i < c.dim_a; ++i) {
      Vector a = Vector::Zero(idx(c.dim_a));
      a(idx(i)) = 1.0;
      kraus.push_back(kraus_for_ancilla(c, dims, a));
    }
    out.emplace_back(dims, std::move(kraus));
    return out;
  }
  for (const auto& p : c.projectors) {
    std::vector<Matrix> kraus;
    for (const auto& a : projector_range(p)) {
      kraus.push_back(kraus_for_ancilla(c, dims, a));
    }
    if (kraus.empty()) {
      // A zero projector selects the null supermap.
      kraus.push_back(Matrix::Zero(idx(dims.output_dim()),
                                   idx(dims.input_dim())));
    }
    out.emplace_back(dims, std::move(kraus));
  }
  return out;
}

Matrix circuit_output(const CircuitRealization& c, const SupermapDims& d,
                      const Matrix& e_choi, const Matrix& rho,
                      std::optional<std::size_t> projector) {
  if (rho.rows() != idx(d.k_in) || rho.cols() != idx(d.k_in)) {
    throw DimensionError("input state does not live on K_in");
  }
  // rho on K_in -> V rho V^dagger on (B, H_in) -> reorder to (H_in, B).
  const Matrix prepared = permute_systems(c.v * rho * c.v.adjoint(),
                                          TensorShape{c.dim_b, d.h_in}, {1, 0});
  const Matrix processed =
      apply_choi_local(e_choi, d.h_in, d.h_out, c.dim_b, prepared);
  Matrix joint = c.w * processed * c.w.adjoint();  // on (K_out, A)
  if (projector) {
    if (*projector >= c.projectors.size()) {
      throw DimensionError("projector index out of range");
    }
    joint = kron(identity(d.k_out), c.projectors[*projector]) * joint;
  }
  return partial_trace(joint, TensorShape{d.k_out, c.dim_a}, {0});
}

Matrix circuit_choi(const CircuitRealization& c, const SupermapDims& d,
                    const Matrix& e_choi, std::optional<std::size_t> projector) {
  return choi_from_action(d.k_in, d.k_out, [&](const Matrix& x) {
    return circuit_output(c, d, e_choi, x, projector);
  });
}

double roundtrip_residual(const Supermap& s, const CircuitRealization& c,
                          const Tolerances& tol) {
  const auto rebuilt = circuit_to_supermap(
      CircuitRealization{c.v, c.w, c.dim_b, c.dim_a, {}}, s.dims(), tol);
  return action_distance(s, rebuilt.front());
}

DelayedReadingReport delayed_reading_check(std::span<const Supermap> parts,
                                           std::size_t trials,
                                           std::uint64_t seed,
                                           const Tolerances& tol) {
  DelayedReadingReport r;
  r.trials = trials;
  if (trials == 0) return r;
  const CircuitRealization c = realize_probabilistic(parts, tol);
  const SupermapDims d = parts.front().dims();

  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s0 = derive_seed(seed, 2 * t);
    const std::size_t rank = 1 + s0 % 3;
    const std::size_t safe_rank =
        std::max(rank, (d.h_in + d.h_out - 1) / d.h_out);
    const QuantumOperation e =
        random_channel(d.h_in, d.h_out, safe_rank, s0);
    const Matrix rho = random_density_matrix(d.k_in, derive_seed(seed, 2 * t + 1));

    double total = 0.0;
    r.last_probabilities.clear();
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const Matrix direct = apply_choi(apply_to_choi(parts[j], e.choi()),
                                       d.k_in, d.k_out, rho);
      const Matrix via_circuit = circuit_output(c, d, e.choi(), rho, j);
      r.max_residual =
          std::max(r.max_residual, (direct - via_circuit).norm());
      const double p = via_circuit.trace().real();
      r.last_probabilities.push_back(p);
      total += p;
    }
    r.max_probability_gap = std::max(r.max_probability_gap, std::abs(total - 1.0));
  }
  r.pass = r.max_residual <= tol.eq && r.max_probability_gap <= tol.eq;
  return r;
}

CircuitRealization random_circuit(const SupermapDims& dims, std::size_t dim_b,
                                  std::size_t dim_a, std::uint64_t seed) {
  CircuitRealization c;
  c.dim_b = dim_b;
  c.dim_a = dim_a;
  c.v = random_isometry(dim_b * dims.h_in, dims.k_in, derive_seed(seed, 0));
  c.w = random_isometry(dims.k_out * dim_a, dims.h_out * dim_b,
                        derive_seed(seed, 1));
  return c;
}

Supermap random_deterministic_supermap(const SupermapDims& dims,
                                       std::size_t dim_b, std::size_t dim_a,
                                       std::uint64_t seed) {
  return circuit_to_supermap(random_circuit(dims, dim_b, dim_a, seed), dims)
      .front();
}

}  // namespace supermap
