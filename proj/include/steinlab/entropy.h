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

#ifndef STEINLAB_ENTROPY_H
#define STEINLAB_ENTROPY_H

#include <functional>
#include <span>
#include <vector>

#include "steinlab/common.h"
#include "steinlab/qstate.h"

namespace steinlab {

/// A probability mass function on a finite product alphabet X x Y.
class JointPmf {
 public:
  /// Entries must be nonnegative and sum to 1 within `tol`.
  explicit JointPmf(RealMatrix table, double tol = 1e-12);
  static JointPmf product(std::span<const double> px, std::span<const double> py);

  std::size_t rows() const { return static_cast<std::size_t>(table_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(table_.cols()); }
  double operator()(std::size_t x, std::size_t y) const {
    return table_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  }
  const RealMatrix& table() const { return table_; }
  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y() const;
  /// Row-major flattening, index x * cols + y.
  std::vector<double> flat() const;

 private:
  RealMatrix table_;
};

/// Checks that `p` is a pmf (nonnegative, sum 1 within `tol`); throws ValidationError.
void validate_pmf(std::span<const double> p, double tol = 1e-12);

/// Kullback-Leibler divergence sum p log(p/q) in nats; +inf when p is not dominated by q.
/// `q` need not be normalized.
ExtendedReal kl(std::span<const double> p, std::span<const double> q);
ExtendedReal kl(const JointPmf& p, const JointPmf& q);

/// Umegaki relative entropy tr rho (log rho - log sigma) for PSD sigma (not necessarily
/// normalized); +inf when supp(rho) is not inside supp(sigma).
ExtendedReal umegaki(const DensityOperator& rho, const Matrix& sigma,
                     double cutoff = kDefaultEigCutoff);

/// Outcome distribution of measuring `state` in `basis`, small negative roundoff clamped.
std::vector<double> measured_distribution(const Matrix& state, const PVMBasis& basis);

/// KL divergence between the outcome distributions of rho and sigma in a basis.
ExtendedReal measured_re(const Matrix& rho, const Matrix& sigma, const PVMBasis& basis);
ExtendedReal measured_re(const Matrix& rho, const Matrix& sigma, const LocalPVM& pvm);

/// Kubo-Ando geometric mean s0^{1/2} (s0^{-1/2} s1 s0^{-1/2})^{1/2} s0^{1/2}; s0 must be
/// positive definite and s1 positive semidefinite.
Matrix geometric_mean(const Matrix& s0, const Matrix& s1, double cutoff = kDefaultEigCutoff);

using GeometricMeanFn = std::function<Matrix(const Matrix&, const Matrix&)>;

/// -p ln p - (1-p) ln(1-p).
double binary_entropy(double p);

}  // namespace steinlab

#endif  // STEINLAB_ENTROPY_H
