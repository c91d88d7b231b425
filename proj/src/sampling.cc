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

#include "steinlab/sampling.h"

#include <cmath>

namespace steinlab {

namespace {

Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

}  // namespace

Matrix haar_unitary(Eigen::Index d, Rng& rng) {
  Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    Complex diag = r(i, i);
    q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

DensityOperator random_density(std::size_t d, Rng& rng, double floor) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix w = ginibre(n, n, rng);
  Matrix m = w * w.adjoint();
  m /= m.trace().real();
  m = (1.0 - floor) * m + floor * Matrix::Identity(n, n) / static_cast<double>(d);
  return DensityOperator(Matrix(0.5 * (m + m.adjoint())));
}

DensityOperator random_pure(std::size_t d, Rng& rng) {
  Vector v = ginibre(static_cast<Eigen::Index>(d), 1, rng).col(0);
  return presets::pure(v / v.norm());
}

Matrix random_contraction(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix u = haar_unitary(n, rng);
  RealVector lam(n);
  for (Eigen::Index i = 0; i < n; ++i) lam(i) = unif(rng);
  Matrix m = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (m + m.adjoint());
}

std::vector<double> random_pmf(std::size_t n, Rng& rng, double floor) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = expo(rng) + floor;
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace steinlab
