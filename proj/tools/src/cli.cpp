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

#include <cmath>
#include <functional>

#include "CLI11.hpp"
#include "supermap_cli/cli.hpp"

namespace supermap::cli {
namespace {

namespace fs = std::filesystem;

int emit(const Report& r, std::ostream& out) {
  out << r.to_json().dump(2) << '\n';
  return r.pass ? kExitPass : kExitFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Numerical toolkit for quantum supermaps", "supermap"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  double tol = 1e-8;
  std::string out_dir;
  app.add_option("--seed", common.seed, "Seed for randomized commands");
  app.add_option("--tol", tol, "Numerical tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Directory for emitted files");

  std::string path, path2;
  std::vector<std::string> paths;
  std::string expect;
  std::string check, povm;
  bool require_channel = false;
  std::size_t dim_in = 0, dim_out = 0, trials = 50;
  std::string corrupt = "none";
  std::function<Report()> action;

  auto* check_op = app.add_subcommand("check-op", "Validate an operation file");
  check_op->add_option("operation", path)->required();
  check_op->add_flag("--require-channel", require_channel,
                     "Also require trace preservation");
  check_op->callback([&] {
    action = [&] { return cmd_check_op(path, require_channel, common); };
  });

  auto* k2c = app.add_subcommand("kraus2choi", "Convert a Kraus file to Choi form");
  k2c->add_option("kraus", path)->required();
  k2c->callback([&] { action = [&] { return cmd_kraus2choi(path, common); }; });

  auto* c2k = app.add_subcommand("choi2kraus", "Canonical Kraus operators of an operation");
  c2k->add_option("operation", path)->required();
  c2k->callback([&] { action = [&] { return cmd_choi2kraus(path, common); }; });

  auto* apply = app.add_subcommand("apply", "Apply an operation to a state");
  apply->add_option("operation", path)->required();
  apply->add_option("state", path2)->required();
  apply->callback([&] { action = [&] { return cmd_apply(path, path2, common); }; });

  auto* sm = app.add_subcommand("supermap", "Determinism and effect-map checks");
  sm->add_option("supermap", path)->required();
  sm->add_option("--check", check, "Check to run")
      ->required()
      ->check(CLI::IsMember({"deterministic", "prob-preserving", "effect-map"}));
  sm->callback([&] { action = [&] { return cmd_supermap(path, check, common); }; });

  auto* real = app.add_subcommand("realize", "Realize a deterministic supermap as a circuit");
  real->add_option("supermap", path)->required();
  real->callback([&] { action = [&] { return cmd_realize(path, common); }; });

  auto* verify = app.add_subcommand("verify", "Check a realization against its supermap");
  verify->add_option("supermap", path)->required();
  verify->add_option("circuit_dir", path2)->required();
  verify->callback([&] { action = [&] { return cmd_verify(path, path2, common); }; });

  auto* real_prob = app.add_subcommand("realize-prob",
                                       "Realize probabilistic parts with one circuit");
  real_prob->add_option("parts", paths)->required();
  real_prob->callback([&] {
    action = [&] {
      return cmd_realize_prob(std::vector<fs::path>(paths.begin(), paths.end()),
                              common);
    };
  });

  auto* t_eval = app.add_subcommand("tester-eval", "Outcome probabilities of a tester");
  t_eval->add_option("tester", path)->required();
  t_eval->add_option("operation", path2)->required();
  t_eval->callback([&] { action = [&] { return cmd_tester_eval(path, path2, common); }; });

  auto* t_check = app.add_subcommand("tester-check", "Validate a tester file");
  t_check->add_option("tester", path)->required();
  t_check->callback([&] { action = [&] { return cmd_tester_check(path, common); }; });

  auto* tomo = app.add_subcommand("tomography-check", "Faithfulness of a probe state");
  tomo->add_option("state", path)->required();
  tomo->add_option("--dim-in", dim_in)->required()->check(CLI::PositiveNumber);
  tomo->add_option("--dim-out", dim_out, "Defaults to --dim-in");
  tomo->add_option("--povm", povm,
                   "pauli, computational or a POVM file; builds the tester");
  tomo->callback([&] {
    action = [&] {
      return cmd_tomography_check(path, dim_in, dim_out == 0 ? dim_in : dim_out,
                                  povm, common);
    };
  });

  auto* prog = app.add_subcommand("program-channel",
                                  "Channel implemented by a programmable device");
  prog->add_option("unitary", path)->required();
  prog->add_option("program", path2)->required();
  prog->add_option("--expect", expect, "Operation file to compare with");
  prog->callback([&] {
    action = [&] {
      std::optional<fs::path> e;
      if (!expect.empty()) e = expect;
      return cmd_program_channel(path, path2, e, common);
    };
  });

  auto* self = app.add_subcommand("selftest", "Randomized invariant suites");
  self->add_option("--trials", trials, "Trials per suite");
  self->add_option("--corrupt", corrupt, "Deliberately break a fixture")
      ->check(CLI::IsMember({"none", "isometry", "tester"}));
  self->callback([&] {
    action = [&] {
      SelftestOptions o;
      o.seed = common.seed;
      o.trials = trials;
      o.tol = common.tol;
      o.corrupt = corrupt == "isometry" ? Corruption::kIsometry
                  : corrupt == "tester" ? Corruption::kTester
                                        : Corruption::kNone;
      return run_selftest(o);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitMalformed;
  }

  common.tol = Tolerances{tol, tol, tol / 10.0};
  if (!out_dir.empty()) common.out_dir = out_dir;

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return emit(action(), out);
  } catch (const ValidationError& e) {
    err << "supermap " << name << ": " << e.what() << '\n';
    Report r{name, false, std::isfinite(e.residual()) ? std::abs(e.residual()) : 0.0};
    r.details = Json{{"error", e.what()}};
    return emit(r, out);
  } catch (const FormatError& e) {
    err << "supermap " << name << ": malformed input: " << e.what() << '\n';
  } catch (const DimensionError& e) {
    err << "supermap " << name << ": dimension mismatch: " << e.what() << '\n';
  } catch (const Json::exception& e) {
    err << "supermap " << name << ": malformed input: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "supermap " << name << ": " << e.what() << '\n';
  }
  return kExitMalformed;
}

}  // namespace supermap::cli
