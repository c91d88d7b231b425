// Copyright 2026 The steinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "steinlab/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace steinlab {

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(child(path, key), "missing field");
  return *it;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path, "expected a number");
  return j.get<double>();
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InputError(path, "expected an integer");
  return j.get<int>();
}

Complex as_complex(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InputError(path, "expected a number or a [re, im] pair");
}

Matrix parse_matrix(const Json& j, const std::string& path, std::optional<std::size_t> dim) {
  if (!j.is_array() || j.empty()) throw InputError(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (dim && rows != *dim) throw InputError(path, "row count does not match dim");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != rows) {
      throw InputError(child(path, r), "expected a row of length " + std::to_string(rows));
    }
    for (std::size_t c = 0; c < rows; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_complex(row[c], child(child(path, r), c));
    }
  }
  return m;
}

template <typename F>
auto rethrow_at(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const ValidationError& e) {
    throw InputError(path, e.what());
  } catch (const DimensionError& e) {
    throw InputError(path, e.what());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void dump_into(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_into(it.value(), indent + 2, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        dump_into(j[i], indent + 2, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("", "cannot open input file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("", std::string("malformed JSON: ") + e.what());
  }
}

DensityOperator parse_state(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "expected a state object");
  if (j.contains("preset")) {
    const Json& name = j["preset"];
    if (!name.is_string()) throw InputError(child(path, "preset"), "expected a string");
    int d = j.contains("d") ? as_int(j["d"], child(path, "d")) : 2;
    std::vector<double> params;
    if (j.contains("p")) params.push_back(as_number(j["p"], child(path, "p")));
    if (j.contains("probs")) {
      const Json& probs = j["probs"];
      if (!probs.is_array()) throw InputError(child(path, "probs"), "expected an array");
      for (std::size_t i = 0; i < probs.size(); ++i) {
        params.push_back(as_number(probs[i], child(child(path, "probs"), i)));
      }
    }
    return rethrow_at(path, [&] { return preset(name.get<std::string>(), params, d); });
  }
  std::optional<std::size_t> dim;
  if (j.contains("dim")) {
    int n = as_int(j["dim"], child(path, "dim"));
    if (n < 1) throw InputError(child(path, "dim"), "dim must be positive");
    dim = static_cast<std::size_t>(n);
  }
  Matrix m = parse_matrix(require(j, "matrix", path), child(path, "matrix"), dim);
  return rethrow_at(child(path, "matrix"), [&] { return DensityOperator(m); });
}

JointPmf parse_pmf(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw InputError(path, "expected a 2-D array");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].empty()) throw InputError(child(path, r), "expected a row");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) throw InputError(child(path, r), "ragged table");
  }
  RealMatrix t(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      t(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_number(j[r][c], child(child(path, r), c));
    }
  }
  return rethrow_at(path, [&] { return JointPmf(t); });
}

BipartitePair parse_pair(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "expected a pair object");
  if (j.contains("preset_pair")) {
    const Json& name = j["preset_pair"];
    if (!name.is_string()) throw InputError(child(path, "preset_pair"), "expected a string");
    return rethrow_at(child(path, "preset_pair"),
                      [&] { return preset_pair(name.get<std::string>()); });
  }
  DensityOperator null = parse_state(require(j, "null", path), child(path, "null"));
  DensityOperator alt = parse_state(require(j, "alt", path), child(path, "alt"));
  int d_a = as_int(require(j, "d_A", path), child(path, "d_A"));
  int d_b = as_int(require(j, "d_B", path), child(path, "d_B"));
  if (d_a < 1 || d_b < 1) throw InputError(path, "local dimensions must be positive");
  return rethrow_at(path, [&] {
    return BipartitePair(null, alt, static_cast<std::size_t>(d_a), static_cast<std::size_t>(d_b));
  });
}

LocalPVM parse_pvm(const Json& j, std::size_t d_A, std::size_t d_B, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() != "computational") {
      throw InputError(path, "unknown measurement name");
    }
    return LocalPVM::computational(d_A, d_B);
  }
  if (!j.is_object()) throw InputError(path, "expected a measurement object");
  int m = j.contains("block_size") ? as_int(j["block_size"], child(path, "block_size")) : 1;
  if (m < 1) throw InputError(child(path, "block_size"), "block size must be positive");
  if (!j.contains("basis_A") && !j.contains("basis_B")) {
    return LocalPVM::computational(d_A, d_B, m);
  }
  Matrix ua = parse_matrix(require(j, "basis_A", path), child(path, "basis_A"), std::nullopt);
  Matrix ub = parse_matrix(require(j, "basis_B", path), child(path, "basis_B"), std::nullopt);
  PVMBasis ba = rethrow_at(child(path, "basis_A"), [&] { return PVMBasis(ua); });
  PVMBasis bb = rethrow_at(child(path, "basis_B"), [&] { return PVMBasis(ub); });
  return rethrow_at(path, [&] { return LocalPVM(ba, bb, d_A, d_B, m); });
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

Json real_matrix_to_json(const RealMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(ExtendedReal x, double scale) {
  if (x.is_infinite()) return "inf";
  return x.value() * scale;
}

Json to_json(const SolverDiagnostics& d) {
  Json out;
  out["iterations"] = d.iterations;
  out["marginal_residual"] = d.marginal_residual;
  out["objective"] = d.objective;
  out["converged"] = d.converged;
  if (d.dual_bound) out["dual_bound"] = *d.dual_bound;
  if (d.gap) out["gap"] = *d.gap;
  return out;
}

Json to_json(const ExponentReport& r, double scale) {
  Json out;
  out["name"] = r.name;
  out["value"] = to_json(r.value, scale);
  out["bound_kind"] = to_string(r.bound_kind);
  out["method"] = r.method;
  if (r.diagnostics) out["diagnostics"] = to_json(*r.diagnostics);
  return out;
}

std::string dump_canonical(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  out += "\n";
  return out;
}

Json make_report(const std::string& command, Json inputs, Json results) {
  Json out;
  out["schema"] = kSchemaId;
  out["command"] = command;
  out["inputs"] = std::move(inputs);
  out["results"] = std::move(results);
  return out;
}

Json error_json(const std::string& kind, const std::string& message,
                const std::string& field_path) {
  Json err;
  err["kind"] = kind;
  err["message"] = message;
  if (!field_path.empty()) err["field"] = field_path;
  Json out;
  out["error"] = std::move(err);
  return out;
}

}  // namespace steinlab
