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

#ifndef STEINLAB_SAMPLING_H
#define STEINLAB_SAMPLING_H

#include <random>
#include <vector>

#include "steinlab/common.h"
#include "steinlab/qstate.h"

namespace steinlab {

using Rng = std::mt19937_64;

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
Matrix haar_unitary(Eigen::Index d, Rng& rng);

/// Full-rank state W W^dag / tr with W Ginibre, mixed with `floor` * I/d.
DensityOperator random_density(std::size_t d, Rng& rng, double floor = 0.0);

DensityOperator random_pure(std::size_t d, Rng& rng);

/// Hermitian 0 <= M <= I with Haar eigenvectors and uniform eigenvalues.
Matrix random_contraction(std::size_t d, Rng& rng);

/// Uniform draw from the probability simplex, entries at least `floor` before renormalizing.
std::vector<double> random_pmf(std::size_t n, Rng& rng, double floor = 0.0);

}  // namespace steinlab

#endif  // STEINLAB_SAMPLING_H
