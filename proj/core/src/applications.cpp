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

#include "supermap/applications.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "supermap/error.hpp"

namespace supermap {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

void require_density_matrix(const Matrix& rho, std::size_t dim,
                            const Tolerances& tol, const char* what) {
  if (rho.rows() != idx(dim) || rho.cols() != idx(dim)) {
    throw DimensionError(std::string(what) + " has the wrong dimension");
  }
  if (!is_finite(rho) || !is_positive_semidefinite(rho, tol) ||
      std::abs(rho.trace() - Complex(1.0)) > tol.eq) {
    throw ValidationError(std::string(what) + " is not a density matrix");
  }
}

std::size_t numerical_rank(const Matrix& m, double rel_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  return static_cast<std::size_t>((sv.array() > rel_cutoff * sv(0)).count());
}

}  // namespace

Supermap sandwich_supermap(const QuantumOperation& pre,
                           const QuantumOperation& post,
                           const Tolerances& tol) {
  if (!is_channel(pre, tol) || !is_channel(post, tol)) {
    throw ValidationError("sandwich_supermap needs channels on both sides");
  }
  const KrausSet c = choi_to_kraus(pre, tol);
  const KrausSet d = choi_to_kraus(post, tol);
  std::vector<Matrix> kraus;
  for (const auto& dk : d.operators) {
    for (const auto& cj : c.operators) {
      kraus.push_back(kron(dk, cj.transpose()));
    }
  }
  return Supermap({pre.dim_out(), post.dim_in(), pre.dim_in(), post.dim_out()},
                  std::move(kraus));
}

ProgrammableDevice::ProgrammableDevice(Matrix unitary, std::size_t dim_sys,
                                       std::size_t dim_prog,
                                       const Tolerances& tol)
    : unitary_(std::move(unitary)), dim_sys_(dim_sys), dim_prog_(dim_prog) {
  const auto n = idx(dim_sys_ * dim_prog_);
  if (unitary_.rows() != n || unitary_.cols() != n) {
    throw DimensionError("interaction must act on H_sys (x) H_prog");
  }
  const double r = isometry_residual(unitary_);
  if (!is_finite(unitary_) || r > tol.eq) {
    throw ValidationError("interaction is not unitary", r);
  }
}

QuantumOperation programmable_channel(const ProgrammableDevice& dev,
                                      const Matrix& program,
                                      const Tolerances& tol) {
  require_density_matrix(program, dev.dim_prog(), tol, "program state");
  const TensorShape joint{dev.dim_sys(), dev.dim_prog()};
  const Matrix& u = dev.unitary();
  Matrix choi =
      choi_from_action(dev.dim_sys(), dev.dim_sys(), [&](const Matrix& x) {
        return partial_trace(u * kron(x, program) * u.adjoint(), joint, {0});
      });
  return QuantumOperation(dev.dim_sys(), dev.dim_sys(), std::move(choi), tol);
}

std::vector<Matrix> programmable_povm(std::span<const Matrix> joint_povm,
                                      const Matrix& program,
                                      std::size_t dim_sys,
                                      const Tolerances& tol) {
  validate_povm(joint_povm, tol);
  const auto joint_dim = static_cast<std::size_t>(joint_povm.front().rows());
  if (dim_sys == 0 || joint_dim % dim_sys != 0) {
    throw DimensionError("joint POVM does not live on H_sys (x) H_prog");
  }
  const std::size_t dim_prog = joint_dim / dim_sys;
  require_density_matrix(program, dim_prog, tol, "program state");
  const TensorShape joint{dim_sys, dim_prog};
  const Matrix lift = kron(identity(dim_sys), program);
  std::vector<Matrix> out;
  out.reserve(joint_povm.size());
  for (const auto& e : joint_povm) {
    out.push_back(partial_trace(e * lift, joint, {0}));
  }
  return out;
}

TomographySetup::TomographySetup(Matrix faithful_state, std::size_t dim_in,
                                 std::size_t dim_out, const Tolerances& tol)
    : state_(std::move(faithful_state)), dim_in_(dim_in), dim_anc_(0),
      dim_out_(dim_out) {
  if (dim_in_ == 0 || dim_out_ == 0 || state_.rows() != state_.cols() ||
      state_.rows() % idx(dim_in_) != 0 || state_.rows() == 0) {
    throw DimensionError("probe state does not live on H_in (x) H_anc");
  }
  dim_anc_ = static_cast<std::size_t>(state_.rows()) / dim_in_;
  require_density_matrix(state_, dim_in_ * dim_anc_, tol, "probe state");
}

Supermap tomography_supermap(const TomographySetup& setup) {
  const auto eig = eigh(setup.state());
  const auto n = idx(setup.dim_in() * setup.dim_anc());
  Matrix root = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = std::max(0.0, eig.values[std::size_t(k)]);
    root += std::sqrt(lambda) * eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }

  const auto din = idx(setup.dim_in());
  const auto danc = idx(setup.dim_anc());
  const Matrix id_out = identity(setup.dim_out());
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (root.col(k).norm() <= 1e-14) continue;
    // Column k of sqrt(F) is sum_{x,z} f[(x, z)] |x>|z> = (I (x) A)|I>.
    Matrix a(danc, din);
    for (Eigen::Index x = 0; x < din; ++x) {
      for (Eigen::Index z = 0; z < danc; ++z) a(z, x) = root(x * danc + z, k);
    }
    kraus.push_back(kron(id_out, a));
  }
  return Supermap({setup.dim_in(), setup.dim_out(), 1,
                   setup.dim_out() * setup.dim_anc()},
                  std::move(kraus));
}

Matrix probe_output(const TomographySetup& setup, const QuantumOperation& op) {
  if (op.dim_in() != setup.dim_in() || op.dim_out() != setup.dim_out()) {
    throw DimensionError("operation does not match the tomography setup");
  }
  return apply_choi_local(op.choi(), op.dim_in(), op.dim_out(),
                          setup.dim_anc(), setup.state());
}

std::size_t tomography_rank(const TomographySetup& setup, double rel_cutoff) {
  const Supermap s = tomography_supermap(setup);
  const auto in_dim = idx(s.dims().input_dim());
  const auto out_dim = idx(s.dims().output_dim());
  Matrix map(out_dim * out_dim, in_dim * in_dim);
  for (Eigen::Index i = 0; i < in_dim; ++i) {
    for (Eigen::Index j = 0; j < in_dim; ++j) {
      Matrix e = Matrix::Zero(in_dim, in_dim);
      e(i, j) = 1.0;
      const Matrix image = apply_to_choi(s, e);
      map.col(i * in_dim + j) = vectorize(image);
    }
  }
  return numerical_rank(map, rel_cutoff);
}

bool is_faithful(const TomographySetup& setup, double rel_cutoff) {
  const std::size_t d = setup.dim_in() * setup.dim_out();
  return tomography_rank(setup, rel_cutoff) == d * d;
}

Tester informationally_complete_tester_for(const TomographySetup& setup,
                                           std::span<const Matrix> povm,
                                           const Tolerances& tol) {
  if (!is_faithful(setup, tol.eq)) {
    throw ValidationError("not faithful");
  }
  validate_povm(povm, tol);
  const std::size_t out = setup.dim_out() * setup.dim_anc();
  if (static_cast<std::size_t>(povm.front().rows()) != out) {
    throw DimensionError("POVM does not live on H_out (x) H_anc");
  }
  if (effect_span_rank(povm, tol.eq) != out * out) {
    throw ValidationError("POVM not informationally complete");
  }
  return tester_from_circuit(setup.state(), povm, setup.dim_in(),
                             setup.dim_out(), tol);
}

QuantumOperation povm_as_channel(std::span<const Matrix> povm,
                                 const Tolerances& tol) {
  validate_povm(povm, tol);
  const std::size_t d = static_cast<std::size_t>(povm.front().rows());
  const std::size_t outcomes = povm.size();
  Matrix choi = Matrix::Zero(idx(outcomes * d), idx(outcomes * d));
  for (std::size_t k = 0; k < outcomes; ++k) {
    choi += kron(matrix_unit(outcomes, k, k), povm[k].transpose());
  }
  return QuantumOperation(d, outcomes, std::move(choi), tol);
}

std::vector<Matrix> pauli_povm() {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  std::vector<Vector> kets;
  kets.push_back((Vector(2) << 1.0, 0.0).finished());
  kets.push_back((Vector(2) << 0.0, 1.0).finished());
  kets.push_back((Vector(2) << r, r).finished());
  kets.push_back((Vector(2) << r, -r).finished());
  kets.push_back((Vector(2) << r, i * r).finished());
  kets.push_back((Vector(2) << r, -i * r).finished());
  std::vector<Matrix> out;
  for (const auto& k : kets) out.push_back(k * k.adjoint() / 3.0);
  return out;
}

std::vector<Matrix> pauli_product_povm(std::size_t qubits) {
  std::vector<Matrix> out{Matrix::Ones(1, 1)};
  const auto single = pauli_povm();
  for (std::size_t q = 0; q < qubits; ++q) {
    std::vector<Matrix> next;
    for (const auto& a : out) {
      for (const auto& b : single) next.push_back(kron(a, b));
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Matrix> computational_povm(std::size_t d) {
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < d; ++k) out.push_back(matrix_unit(d, k, k));
  return out;
}

}  // namespace supermap
