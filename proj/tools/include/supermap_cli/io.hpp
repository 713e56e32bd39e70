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

// JSON file formats used by the command-line tool.
//
//   matrix     {"rows", "cols", "data": [[re, im], ...]}  (row-major)
//   operation  {"dim_in", "dim_out", "choi": matrix}
//   kraus      {"dim_in", "dim_out", "kraus": [matrix, ...]}
//   supermap   {"h_in", "h_out", "k_in", "k_out", "kraus": [matrix, ...]}
//   tester     {"h_in", "h_out", "effects": [matrix, ...]}
//   povm       {"effects": [matrix, ...]}

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "supermap/supermap_all.hpp"

namespace supermap::cli {

using Json = nlohmann::json;

// Raised for unreadable or structurally invalid input; maps to exit code 2.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OperationData {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  Matrix choi;
};

struct TesterData {
  std::size_t h_in = 0;
  std::size_t h_out = 0;
  std::vector<Matrix> effects;
};

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json operation_to_json(std::size_t dim_in, std::size_t dim_out,
                       const Matrix& choi);
OperationData operation_from_json(const Json& j);

Json kraus_to_json(const KrausSet& k);
KrausSet kraus_from_json(const Json& j);

Json supermap_to_json(const Supermap& s);
Supermap supermap_from_json(const Json& j);

Json tester_to_json(std::size_t h_in, std::size_t h_out,
                    const std::vector<Matrix>& effects);
TesterData tester_from_json(const Json& j);

Json povm_to_json(const std::vector<Matrix>& effects);
std::vector<Matrix> povm_from_json(const Json& j);

}  // namespace supermap::cli
