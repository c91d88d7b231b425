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

#ifndef STEINLAB_TESTS_TEST_UTIL_H
#define STEINLAB_TESTS_TEST_UTIL_H

#include <cmath>

#include "steinlab/common.h"
#include "steinlab/qstate.h"
#include "steinlab/sampling.h"

namespace steinlab::testing {

inline double trace_distance(const Matrix& a, const Matrix& b) {
  Spectrum s = hermitian_spectrum(Matrix(0.5 * ((a - b) + (a - b).adjoint())));
  double acc = 0.0;
  for (double x : s.eigenvalues) acc += std::abs(x);
  return 0.5 * acc;
}

inline double min_eigenvalue(const Matrix& h) {
  return hermitian_spectrum(Matrix(0.5 * (h + h.adjoint()))).eigenvalues.back();
}

inline DensityOperator diag_state(std::initializer_list<double> probs) {
  std::vector<double> v(probs);
  return presets::diagonal(v);
}

inline Matrix hadamard() {
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

}  // namespace steinlab::testing

#endif  // STEINLAB_TESTS_TEST_UTIL_H
