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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "supermap_cli/io.hpp"

namespace supermap::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitMalformed = 2;

struct Report {
  std::string check;
  bool pass = false;
  double residual = 0.0;
  Json details = Json::object();

  Json to_json() const;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  Tolerances tol;
  std::optional<std::filesystem::path> out_dir;
};

Report cmd_check_op(const std::filesystem::path& path, bool require_channel,
                    const CommonOptions& opt);
Report cmd_kraus2choi(const std::filesystem::path& path, const CommonOptions& opt);
Report cmd_choi2kraus(const std::filesystem::path& path, const CommonOptions& opt);
Report cmd_apply(const std::filesystem::path& op_path,
                 const std::filesystem::path& state_path,
                 const CommonOptions& opt);
Report cmd_supermap(const std::filesystem::path& path, const std::string& check,
                    const CommonOptions& opt);
Report cmd_realize(const std::filesystem::path& path, const CommonOptions& opt);
Report cmd_verify(const std::filesystem::path& supermap_path,
                  const std::filesystem::path& circuit_dir,
                  const CommonOptions& opt);
Report cmd_realize_prob(const std::vector<std::filesystem::path>& parts,
                        const CommonOptions& opt);
Report cmd_tester_eval(const std::filesystem::path& tester_path,
                       const std::filesystem::path& op_path,
                       const CommonOptions& opt);
Report cmd_tester_check(const std::filesystem::path& tester_path,
                        const CommonOptions& opt);
Report cmd_tomography_check(const std::filesystem::path& state_path,
                            std::size_t dim_in, std::size_t dim_out,
                            const std::string& povm, const CommonOptions& opt);
Report cmd_program_channel(const std::filesystem::path& unitary_path,
                           const std::filesystem::path& program_path,
                           const std::optional<std::filesystem::path>& expect,
                           const CommonOptions& opt);

enum class Corruption { kNone, kIsometry, kTester };

struct SelftestOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 50;
  Corruption corrupt = Corruption::kNone;
  Tolerances tol;
};

Report run_selftest(const SelftestOptions& opt);

// Parses `args` (without the program name), runs one subcommand, prints the
// JSON report to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace supermap::cli
