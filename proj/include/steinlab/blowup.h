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

#ifndef STEINLAB_BLOWUP_H
#define STEINLAB_BLOWUP_H

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "steinlab/common.h"
#include "steinlab/qstate.h"

namespace steinlab {

struct BlowupParams {
  int n = 1;
  /// Lower bound on tr(rho^{(x)n} M); must lie in (0, 1].
  double epsilon_n = 1.0;
  double r_n = 0.0;
};

/// Largest universe d^n an IndexSet will enumerate.
inline constexpr std::uint64_t kMaxStrings = std::uint64_t{1} << 24;

/// A subset of [0, d)^n. Strings are encoded base d with the first symbol most significant,
/// matching the Kronecker ordering of n-fold tensor products.
class IndexSet {
 public:
  IndexSet(int n, std::size_t d);

  int n() const { return n_; }
  std::size_t d() const { return d_; }
  std::uint64_t universe_size() const { return mask_.size(); }
  std::size_t size() const { return count_; }
  bool contains(std::uint64_t index) const { return mask_[index]; }
  void insert(std::uint64_t index);
  std::vector<std::uint64_t> members() const;

  std::vector<int> decode(std::uint64_t index) const;
  std::uint64_t encode(std::span<const int> symbols) const;

 private:
  int n_;
  std::size_t d_;
  std::vector<bool> mask_;
  std::size_t count_ = 0;
};

/// sqrt(n) (sqrt(-ln(epsilon_n / 2) / 2) + r_n).
double l_n_size(const BlowupParams& p);

/// ln sum_{l=1}^{L} C(n, l), evaluated with exact integer arithmetic.
double log_binomial_sum(int n, int L);

/// ln of 2 d^L sum_{l=1}^{L} C(n,l) / (epsilon_n mu_min^L) with L = ceil(l_n); +inf when
/// mu_min is zero.
ExtendedReal log_gamma_factor(const BlowupParams& p, std::size_t d, double mu_min);
/// exp(log_gamma_factor); saturates to +inf beyond the double range.
ExtendedReal gamma_factor(const BlowupParams& p, std::size_t d, double mu_min);

/// min over eigenvectors x of rho with positive eigenvalue of <x|sigma|x>.
/// Zero-rate schedule: fixed epsilon_n, r_n = n^{1/3}, n = 2, 4, ..., 2^max_log2_n.
struct GammaSchedulePoint {
  int n = 0;
  double r_n = 0.0;
  double l_n = 0.0;
  ExtendedReal log_gamma;
  /// log_gamma / n.
  ExtendedReal normalized;
};
std::vector<GammaSchedulePoint> gamma_schedule(int max_log2_n, std::size_t d, double mu_min,
                                               double epsilon_n);

double mu_min(const DensityOperator& rho, const Matrix& sigma);
/// min over products x (x) x' of such eigenvectors of rho_A and rho_B of <x x'|sigma|x x'>.
double mu_min_bipartite(const DensityOperator& rho_A, const DensityOperator& rho_B,
                        const Matrix& sigma_AB);

struct JSet {
  IndexSet members;
  /// tr(rho^{(x)n} M) = sum over strings of lambda_{x^n} <x^n|M|x^n>.
  double trace_rho_M = 0.0;
  bool precondition_ok = false;
};

/// Strings x^n with positive eigenvalue product and <x^n|M|x^n> >= epsilon_n / 2, where
/// `m_diag` lists <x^n|M|x^n> in rho's eigenbasis and `rho_eigenvalues` the single-copy
/// spectrum of rho in the same order.
JSet build_J_set(std::span<const double> m_diag, std::span<const double> rho_eigenvalues,
                 const BlowupParams& p);

/// All strings within Hamming distance ceil(radius) of the set.
IndexSet hamming_blowup(const IndexSet& s, double radius);

/// M = factor^{(x)n}.
struct ProductContraction {
  Matrix factor;
};
/// A general operator on (C^d)^{(x)n}.
struct DenseContraction {
  Matrix op;
};
using Contraction = std::variant<ProductContraction, DenseContraction>;

struct BlowupRecord {
  bool precondition_ok = false;
  double trace_rho_M = 0.0;
  double l_n = 0.0;
  int radius = 0;
  std::size_t j_size = 0;
  std::size_t blown_up_size = 0;
  double mu_min = 0.0;
  ExtendedReal log_gamma;
  /// tr(rho^{(x)n} P+) against 1 - exp(-2 r_n^2).
  double concentration_lhs = 0.0;
  double concentration_rhs = 0.0;
  double concentration_slack = 0.0;
  /// tr(sigma^{(x)n} P+) against gamma tr(M sigma^{(x)n}).
  double sigma_lhs = 0.0;
  ExtendedReal sigma_rhs;
  ExtendedReal sigma_slack;
  bool passed = false;
};

/// Builds P+ from M and checks both inequalities of the single-system blowing-up lemma.
BlowupRecord verify_blowup(const DensityOperator& rho, const Contraction& M,
                           const DensityOperator& sigma, const BlowupParams& p);

struct BipartiteBlowupRecord {
  bool precondition_ok = false;
  double l_n = 0.0;
  int radius = 0;
  double mu_min = 0.0;
  ExtendedReal log_gamma;
  /// min of tr(rho_A^{(x)n} P+_A), tr(rho_B^{(x)n} P+_B) against 1 - exp(-2 r_n^2).
  double concentration_lhs = 0.0;
  double concentration_rhs = 0.0;
  double concentration_slack = 0.0;
  /// tr(sigma^{(x)n} (P+_A (x) P+_B)) against gamma^2 tr((M_A (x) M_B) sigma^{(x)n}).
  double sigma_lhs = 0.0;
  ExtendedReal sigma_rhs;
  ExtendedReal sigma_slack;
  /// tr(rho^{(x)n} (P+_A (x) P+_B)) against 1 - 2 exp(-2 r_n^2).
  double joint_lhs = 0.0;
  double joint_rhs = 0.0;
  double joint_slack = 0.0;
  /// |joint_lhs - (1 - tr rho (I-P_A) - tr rho (I-P_B) + tr rho (I-P_A)(I-P_B))|.
  double identity_residual = 0.0;
  bool passed = false;
};

/// Bipartite version with product-form M_A = m_A^{(x)n}, M_B = m_B^{(x)n}.
BipartiteBlowupRecord verify_blowup_bipartite(const DensityOperator& rho_AB, std::size_t d_A,
                                              std::size_t d_B, const Matrix& m_A,
                                              const Matrix& m_B, const DensityOperator& sigma_AB,
                                              const BlowupParams& p);

struct SchemeResult {
  int n = 0;
  double delta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// -ln(beta) / n.
  ExtendedReal exponent;
  double null_success_A = 0.0;
  double null_success_B = 0.0;
  double beta_A = 0.0;
  double beta_B = 0.0;
};

/// Exact errors of the typical-projector test on qubit pairs with a product alternative.
/// Each side accepts with P(rho,sigma) P(rho,rho) P(rho,sigma), where P(rho,sigma) projects
/// onto eigenstrings of sigma^{(x)n} whose eigenvalue is within exp(+-n delta) of
/// exp(n tr rho log sigma).
SchemeResult typical_projector_scheme(const BipartitePair& pair, int n, double delta);

}  // namespace steinlab

#endif  // STEINLAB_BLOWUP_H
