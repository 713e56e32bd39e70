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

#include "supermap_cli/io.hpp"

#include <cmath>
#include <fstream>

namespace supermap::cli {
namespace {

std::size_t positive_size(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field \"") + key + "\"");
  }
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw FormatError(std::string("field \"") + key +
                      "\" must be a positive integer");
  }
  return v.get<std::size_t>();
}

const Json& array_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    throw FormatError(std::string("missing array field \"") + key + "\"");
  }
  return j.at(key);
}

std::vector<Matrix> matrices_from(const Json& arr) {
  std::vector<Matrix> out;
  out.reserve(arr.size());
  for (const auto& m : arr) out.push_back(matrix_from_json(m));
  return out;
}

Json matrices_to(const std::vector<Matrix>& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols,
                   const std::string& what) {
  if (m.rows() != Eigen::Index(rows) || m.cols() != Eigen::Index(cols)) {
    throw FormatError(what + " has shape " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + ", expected " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  const std::size_t rows = positive_size(j, "rows");
  const std::size_t cols = positive_size(j, "cols");
  const Json& data = array_field(j, "data");
  if (data.size() != rows * cols) {
    throw FormatError("matrix data has " + std::to_string(data.size()) +
                      " entries, expected " + std::to_string(rows * cols));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Json& e = data[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number()) {
      throw FormatError("matrix entry " + std::to_string(k) +
                        " is not a [re, im] pair");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw FormatError("matrix entry " + std::to_string(k) + " is not finite");
    }
    m(Eigen::Index(k / cols), Eigen::Index(k % cols)) = Complex(re, im);
  }
  return m;
}

Json operation_to_json(std::size_t dim_in, std::size_t dim_out,
                       const Matrix& choi) {
  return Json{{"dim_in", dim_in}, {"dim_out", dim_out},
              {"choi", matrix_to_json(choi)}};
}

OperationData operation_from_json(const Json& j) {
  OperationData op;
  op.dim_in = positive_size(j, "dim_in");
  op.dim_out = positive_size(j, "dim_out");
  if (!j.contains("choi")) throw FormatError("missing field \"choi\"");
  op.choi = matrix_from_json(j.at("choi"));
  const std::size_t n = op.dim_in * op.dim_out;
  require_shape(op.choi, n, n, "Choi matrix");
  return op;
}

Json kraus_to_json(const KrausSet& k) {
  return Json{{"dim_in", k.dim_in}, {"dim_out", k.dim_out},
              {"kraus", matrices_to(k.operators)}};
}

KrausSet kraus_from_json(const Json& j) {
  KrausSet k;
  k.dim_in = positive_size(j, "dim_in");
  k.dim_out = positive_size(j, "dim_out");
  k.operators = matrices_from(array_field(j, "kraus"));
  if (k.operators.empty()) throw FormatError("Kraus list is empty");
  for (const auto& e : k.operators) {
    require_shape(e, k.dim_out, k.dim_in, "Kraus operator");
  }
  return k;
}

Json supermap_to_json(const Supermap& s) {
  const auto& d = s.dims();
  return Json{{"h_in", d.h_in},   {"h_out", d.h_out},
              {"k_in", d.k_in},   {"k_out", d.k_out},
              {"kraus", matrices_to(s.kraus())}};
}

Supermap supermap_from_json(const Json& j) {
  const SupermapDims d{positive_size(j, "h_in"), positive_size(j, "h_out"),
                       positive_size(j, "k_in"), positive_size(j, "k_out")};
  auto kraus = matrices_from(array_field(j, "kraus"));
  if (kraus.empty()) throw FormatError("Kraus list is empty");
  for (const auto& s : kraus) {
    require_shape(s, d.output_dim(), d.input_dim(), "supermap Kraus operator");
  }
  return Supermap(d, std::move(kraus));
}

Json tester_to_json(std::size_t h_in, std::size_t h_out,
                    const std::vector<Matrix>& effects) {
  return Json{{"h_in", h_in}, {"h_out", h_out}, {"effects", matrices_to(effects)}};
}

TesterData tester_from_json(const Json& j) {
  TesterData t;
  t.h_in = positive_size(j, "h_in");
  t.h_out = positive_size(j, "h_out");
  t.effects = matrices_from(array_field(j, "effects"));
  if (t.effects.empty()) throw FormatError("tester has no effects");
  const std::size_t n = t.h_in * t.h_out;
  for (const auto& p : t.effects) require_shape(p, n, n, "tester effect");
  return t;
}

Json povm_to_json(const std::vector<Matrix>& effects) {
  return Json{{"effects", matrices_to(effects)}};
}

std::vector<Matrix> povm_from_json(const Json& j) {
  auto effects = matrices_from(array_field(j, "effects"));
  if (effects.empty()) throw FormatError("POVM has no effects");
  for (const auto& p : effects) {
    require_shape(p, std::size_t(effects.front().rows()),
                  std::size_t(effects.front().rows()), "POVM effect");
  }
  return effects;
}

}  // namespace supermap::cli
