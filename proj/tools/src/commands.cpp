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

#include <algorithm>
#include <cmath>

#include "supermap_cli/cli.hpp"

namespace supermap::cli {
namespace {

namespace fs = std::filesystem;

Json doubles(const std::vector<double>& v) { return Json(v); }

void maybe_write(const CommonOptions& opt, const char* name, const Json& j) {
  if (!opt.out_dir) return;
  fs::create_directories(*opt.out_dir);
  write_json(*opt.out_dir / name, j);
}

QuantumOperation load_operation(const fs::path& path, const Tolerances& tol) {
  OperationData d = operation_from_json(read_json(path));
  return QuantumOperation(d.dim_in, d.dim_out, std::move(d.choi), tol);
}

std::vector<Matrix> named_povm(const std::string& name, std::size_t dim) {
  if (name == "computational") return computational_povm(dim);
  if (name == "pauli") {
    std::size_t qubits = 0;
    while ((std::size_t{1} << qubits) < dim) ++qubits;
    if ((std::size_t{1} << qubits) != dim) {
      throw DimensionError("Pauli-product POVM needs a power-of-two dimension");
    }
    return pauli_product_povm(qubits);
  }
  return povm_from_json(read_json(name));
}

Json circuit_meta(const Supermap& s, const CircuitRealization& c,
                  double roundtrip) {
  const auto& d = s.dims();
  return Json{{"h_in", d.h_in},
              {"h_out", d.h_out},
              {"k_in", d.k_in},
              {"k_out", d.k_out},
              {"dim_a", c.dim_a},
              {"dim_b", c.dim_b},
              {"roundtrip_residual", roundtrip},
              {"v_isometry_residual", isometry_residual(c.v)},
              {"w_isometry_residual", isometry_residual(c.w)}};
}

}  // namespace

Json Report::to_json() const {
  return Json{{"check", check}, {"pass", pass}, {"residual", residual},
              {"details", details}};
}

Report cmd_check_op(const fs::path& path, bool require_channel,
                    const CommonOptions& opt) {
  const OperationData op = operation_from_json(read_json(path));
  const auto d = diagnose_choi(op.dim_in, op.dim_out, op.choi, opt.tol);
  Report r{"check-op"};
  r.pass = d.hermitian && d.completely_positive && d.trace_non_increasing &&
           (!require_channel || d.channel);
  r.residual = std::max({d.hermiticity, std::max(0.0, -d.min_eigenvalue),
                         std::max(0.0, d.effect_max_eigenvalue - 1.0)});
  if (require_channel) r.residual = std::max(r.residual, d.channel_residual);
  r.details = Json{{"dim_in", op.dim_in},
                   {"dim_out", op.dim_out},
                   {"hermitian", d.hermitian},
                   {"cp", d.completely_positive},
                   {"trace_non_increasing", d.trace_non_increasing},
                   {"channel", d.channel},
                   {"hermiticity_residual", d.hermiticity},
                   {"min_eigenvalue", d.min_eigenvalue},
                   {"max_eigenvalue", d.max_eigenvalue},
                   {"effect_max_eigenvalue", d.effect_max_eigenvalue},
                   {"channel_residual", d.channel_residual}};
  return r;
}

Report cmd_kraus2choi(const fs::path& path, const CommonOptions& opt) {
  const KrausSet k = kraus_from_json(read_json(path));
  const QuantumOperation op = kraus_to_choi(k, opt.tol);
  const Json file = operation_to_json(op.dim_in(), op.dim_out(), op.choi());
  maybe_write(opt, "operation.json", file);
  Report r{"kraus2choi", true, 0.0};
  r.details = Json{{"kraus_count", k.operators.size()},
                   {"channel", is_channel(op, opt.tol)},
                   {"channel_residual", channel_residual(op)},
                   {"operation", file}};
  return r;
}

Report cmd_choi2kraus(const fs::path& path, const CommonOptions& opt) {
  const QuantumOperation op = load_operation(path, opt.tol);
  const KrausSet k = choi_to_kraus(op, opt.tol);
  const Json file = kraus_to_json(k);
  maybe_write(opt, "kraus.json", file);
  Report r{"choi2kraus"};
  r.residual = relative_distance(kraus_to_choi(k, opt.tol).choi(), op.choi());
  r.pass = r.residual <= opt.tol.eq;
  r.details = Json{{"kraus_count", k.operators.size()}, {"kraus", file}};
  return r;
}

Report cmd_apply(const fs::path& op_path, const fs::path& state_path,
                 const CommonOptions& opt) {
  const QuantumOperation op = load_operation(op_path, opt.tol);
  const Matrix rho = matrix_from_json(read_json(state_path));
  const Matrix out = apply_operation(op, rho, opt.tol);
  maybe_write(opt, "output.json", matrix_to_json(out));
  Report r{"apply", true, 0.0};
  r.details = Json{{"trace", out.trace().real()}, {"output", matrix_to_json(out)}};
  return r;
}

Report cmd_supermap(const fs::path& path, const std::string& check,
                    const CommonOptions& opt) {
  const Supermap s = supermap_from_json(read_json(path));
  const DeterminismReport dual = check_determinism(s, opt.tol);
  Report r{"supermap:" + check};
  r.details = Json{{"deterministic", dual.deterministic},
                   {"determinism_residual", dual.residual},
                   {"trace_preservation_residual",
                    dual.trace_preservation_residual},
                   {"min_eigenvalue", dual.min_eigenvalue}};

  if (check == "deterministic") {
    const DeterminismReport effects = check_determinism_via_effects(s, opt.tol);
    r.pass = dual.deterministic;
    r.residual = std::max(dual.residual, dual.trace_preservation_residual);
    r.details["effect_route_deterministic"] = effects.deterministic;
    r.details["effect_route_residual"] = effects.residual;
    return r;
  }
  if (check == "prob-preserving") {
    const auto& d = s.dims();
    if (!dual.deterministic) {
      r.residual = std::max(dual.residual, dual.trace_preservation_residual);
      r.details["error"] = "supermap is not deterministic";
      return r;
    }
    if (d.h_in != d.k_in) {
      r.details["error"] = "input spaces H_in and K_in differ";
      return r;
    }
    const EffectMap n = effect_map_of(s, opt.tol);
    for (std::size_t a = 0; a < d.h_in; ++a) {
      for (std::size_t b = 0; b < d.h_in; ++b) {
        const Matrix unit = matrix_unit(d.h_in, a, b);
        r.residual = std::max(r.residual, (n.apply(unit) - unit).norm());
      }
    }
    r.pass = is_probability_preserving(s, opt.tol);
    return r;
  }
  if (check == "effect-map") {
    const EffectMap n = effect_map_of(s, opt.tol);
    Json kraus = Json::array();
    for (const auto& k : n.kraus) kraus.push_back(matrix_to_json(k));
    r.pass = true;
    r.residual = (n.apply(identity(n.h_in)) - identity(n.k_in)).norm();
    r.details["h_in"] = n.h_in;
    r.details["k_in"] = n.k_in;
    r.details["kraus"] = std::move(kraus);
    maybe_write(opt, "effect_map.json", r.details);
    return r;
  }
  throw FormatError("unknown supermap check \"" + check + "\"");
}

Report cmd_realize(const fs::path& path, const CommonOptions& opt) {
  const Supermap s = supermap_from_json(read_json(path));
  const DeterminismReport det = check_determinism(s, opt.tol);
  if (!det.deterministic) {
    throw NotDeterministicError("supermap is not deterministic",
                                std::max(det.residual,
                                         det.trace_preservation_residual));
  }
  const CircuitRealization c = realize(s, opt.tol);
  const double roundtrip = roundtrip_residual(s, c, opt.tol);
  Report r{"realize"};
  r.details = circuit_meta(s, c, roundtrip);
  r.residual = std::max({roundtrip, isometry_residual(c.v), isometry_residual(c.w)});
  r.pass = r.residual <= opt.tol.eq;
  maybe_write(opt, "v.json", matrix_to_json(c.v));
  maybe_write(opt, "w.json", matrix_to_json(c.w));
  maybe_write(opt, "meta.json", r.details);
  return r;
}

Report cmd_verify(const fs::path& supermap_path, const fs::path& circuit_dir,
                  const CommonOptions& opt) {
  const Supermap s = supermap_from_json(read_json(supermap_path));
  const Json meta = read_json(circuit_dir / "meta.json");
  CircuitRealization c;
  c.v = matrix_from_json(read_json(circuit_dir / "v.json"));
  c.w = matrix_from_json(read_json(circuit_dir / "w.json"));
  try {
    c.dim_a = meta.at("dim_a").get<std::size_t>();
    c.dim_b = meta.at("dim_b").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("meta.json: ") + e.what());
  }
  validate_circuit(c, s.dims(), opt.tol);
  Report r{"verify"};
  r.residual = roundtrip_residual(s, c, opt.tol);
  r.pass = r.residual <= opt.tol.eq;
  r.details = circuit_meta(s, c, r.residual);
  return r;
}

Report cmd_realize_prob(const std::vector<fs::path>& parts_paths,
                        const CommonOptions& opt) {
  if (parts_paths.empty()) throw FormatError("no supermap parts given");
  std::vector<Supermap> parts;
  for (const auto& p : parts_paths) parts.push_back(supermap_from_json(read_json(p)));
  const CircuitRealization c = realize_probabilistic(parts, opt.tol);
  const auto rebuilt = circuit_to_supermap(c, parts.front().dims(), opt.tol);
  Report r{"realize-prob"};
  std::vector<double> per_part;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    per_part.push_back(action_distance(parts[j], rebuilt[j]));
  }
  r.residual = std::max({*std::max_element(per_part.begin(), per_part.end()),
                         isometry_residual(c.v), isometry_residual(c.w)});
  r.pass = r.residual <= opt.tol.eq;
  r.details = circuit_meta(parts.front(), c, r.residual);
  r.details["part_residuals"] = doubles(per_part);
  Json projectors = Json::array();
  for (const auto& p : c.projectors) projectors.push_back(matrix_to_json(p));
  maybe_write(opt, "v.json", matrix_to_json(c.v));
  maybe_write(opt, "w.json", matrix_to_json(c.w));
  maybe_write(opt, "projectors.json", Json{{"projectors", projectors}});
  maybe_write(opt, "meta.json", r.details);
  return r;
}

Report cmd_tester_eval(const fs::path& tester_path, const fs::path& op_path,
                       const CommonOptions& opt) {
  TesterData data = tester_from_json(read_json(tester_path));
  const QuantumOperation op = load_operation(op_path, opt.tol);
  const auto diag = diagnose_tester(data.effects, data.h_in, data.h_out, opt.tol);
  const Tester t = make_tester(std::move(data.effects), data.h_in, data.h_out,
                               opt.tol);
  const auto dist = evaluate(t, op, opt.tol);
  Report r{"tester-eval", true, diag.normalization_residual};
  r.details = Json{{"probabilities", doubles(dist.probabilities)},
                   {"total", dist.total()},
                   {"normalization_residual", diag.normalization_residual},
                   {"informationally_complete", is_informationally_complete(t)}};
  return r;
}

Report cmd_tester_check(const fs::path& tester_path, const CommonOptions& opt) {
  const TesterData data = tester_from_json(read_json(tester_path));
  const auto diag = diagnose_tester(data.effects, data.h_in, data.h_out, opt.tol);
  Report r{"tester-check"};
  r.pass = diag.positive && diag.normalized;
  r.residual = std::max({diag.normalization_residual, diag.trace_gap,
                         std::max(0.0, -diag.min_eigenvalue)});
  r.details = Json{{"positive", diag.positive},
                   {"normalized", diag.normalized},
                   {"normalization_residual", diag.normalization_residual},
                   {"trace_gap", diag.trace_gap},
                   {"min_eigenvalue", diag.min_eigenvalue},
                   {"effect_span_rank", effect_span_rank(data.effects, opt.tol.eq)},
                   {"sigma", matrix_to_json(diag.sigma)}};
  return r;
}

Report cmd_tomography_check(const fs::path& state_path, std::size_t dim_in,
                            std::size_t dim_out, const std::string& povm,
                            const CommonOptions& opt) {
  const Matrix state = matrix_from_json(read_json(state_path));
  const TomographySetup setup(state, dim_in, dim_out, opt.tol);
  const std::size_t rank = tomography_rank(setup, opt.tol.eq);
  const bool faithful = is_faithful(setup, opt.tol.eq);
  Report r{"tomography-check", faithful, 0.0};
  r.details = Json{{"dim_in", dim_in},
                   {"dim_out", dim_out},
                   {"dim_anc", setup.dim_anc()},
                   {"rank", rank},
                   {"full_rank", dim_in * dim_in * dim_out * dim_out},
                   {"faithful", faithful}};
  if (!povm.empty()) {
    const auto effects = named_povm(povm, dim_out * setup.dim_anc());
    try {
      const Tester t = informationally_complete_tester_for(setup, effects, opt.tol);
      r.details["tester_effects"] = t.effects().size();
      r.details["tester_rank"] = effect_span_rank(t.effects(), opt.tol.eq);
      r.details["informationally_complete"] = is_informationally_complete(t);
      r.pass = r.pass && is_informationally_complete(t);
      maybe_write(opt, "tester.json",
                  tester_to_json(t.h_in(), t.h_out(), t.effects()));
    } catch (const ValidationError& e) {
      r.pass = false;
      r.details["informationally_complete"] = false;
      r.details["error"] = e.what();
    }
  }
  return r;
}

Report cmd_program_channel(const fs::path& unitary_path,
                           const fs::path& program_path,
                           const std::optional<fs::path>& expect,
                           const CommonOptions& opt) {
  const Matrix u = matrix_from_json(read_json(unitary_path));
  const Matrix program = matrix_from_json(read_json(program_path));
  const auto dim_prog = std::size_t(program.rows());
  if (dim_prog == 0 || u.rows() % program.rows() != 0) {
    throw DimensionError("interaction dimension is not a multiple of the program");
  }
  const ProgrammableDevice dev(u, std::size_t(u.rows()) / dim_prog, dim_prog, opt.tol);
  const QuantumOperation e = programmable_channel(dev, program, opt.tol);
  const Json file = operation_to_json(e.dim_in(), e.dim_out(), e.choi());
  maybe_write(opt, "operation.json", file);
  Report r{"program-channel"};
  r.details = Json{{"dim_sys", dev.dim_sys()},
                   {"dim_prog", dev.dim_prog()},
                   {"channel", is_channel(e, opt.tol)},
                   {"operation", file}};
  if (expect) {
    const OperationData target = operation_from_json(read_json(*expect));
    if (target.dim_in != e.dim_in() || target.dim_out != e.dim_out()) {
      throw DimensionError("expected operation has different dimensions");
    }
    r.residual = relative_distance(e.choi(), target.choi);
    r.pass = r.residual <= opt.tol.eq;
  } else {
    r.residual = channel_residual(e);
    r.pass = is_channel(e, opt.tol);
  }
  return r;
}

}  // namespace supermap::cli
