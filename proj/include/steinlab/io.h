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

#ifndef STEINLAB_IO_H
#define STEINLAB_IO_H

#include <string>

#include <nlohmann/json.hpp>

#include "steinlab/common.h"
#include "steinlab/entropy.h"
#include "steinlab/exponents.h"
#include "steinlab/marginal_opt.h"
#include "steinlab/qstate.h"

namespace steinlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaId = "steinlab.report.v1";

/// Malformed or invalid input. `field_path` points at the offending JSON field, e.g.
/// "/null/matrix/1/0".
class InputError : public Error {
 public:
  InputError(std::string field_path, const std::string& message)
      : Error(message), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

Json read_json_file(const std::string& path);

/// Parses {"dim": n, "matrix": [[[re, im], ...], ...]} or {"preset": name, ...}. Entries may
/// also be plain real numbers.
DensityOperator parse_state(const Json& j, const std::string& path = "");

/// Parses a 2-D array of probabilities.
JointPmf parse_pmf(const Json& j, const std::string& path = "");

/// Parses {"preset_pair": name} or {"null": state, "alt": state, "d_A": a, "d_B": b}.
BipartitePair parse_pair(const Json& j, const std::string& path = "");

/// Parses {"basis_A": matrix, "basis_B": matrix, "block_size": m} or "computational".
LocalPVM parse_pvm(const Json& j, std::size_t d_A, std::size_t d_B, const std::string& path = "");

Json matrix_to_json(const Matrix& m);
Json real_matrix_to_json(const RealMatrix& m);

/// Finite values become numbers, +inf becomes the string "inf". `scale` converts units.
Json to_json(ExtendedReal x, double scale = 1.0);
Json to_json(const SolverDiagnostics& d);
Json to_json(const ExponentReport& r, double scale = 1.0);

/// Deterministic text form: keys in insertion order, floats with 17 significant digits,
/// two-space indentation, trailing newline.
std::string dump_canonical(const Json& j);

/// Wraps `body` with the schema id and the command name.
Json make_report(const std::string& command, Json inputs, Json results);

/// Error object written to stderr on failures.
Json error_json(const std::string& kind, const std::string& message,
                const std::string& field_path = "");

}  // namespace steinlab

#endif  // STEINLAB_IO_H
