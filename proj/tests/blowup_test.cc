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

#include "steinlab/blowup.h"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "steinlab/exponents.h"
#include "steinlab/sampling.h"
#include "test_util.h"

namespace steinlab {
namespace {

double log_binomial_sum_oracle(int n, int L) {
  double m = -INFINITY;
  std::vector<double> terms;
  for (int l = 1; l <= std::min(L, n); ++l) {
    terms.push_back(std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0));
    m = std::max(m, terms.back());
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

int hamming(const std::vector<int>& a, const std::vector<int>& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// Projector onto the listed strings of the eigenbasis `v`, as a dense operator.
Matrix string_projector(const Matrix& v, const IndexSet& s) {
  Matrix vn = tensor_power(v, s.n());
  RealVector ind = RealVector::Zero(vn.cols());
  for (std::uint64_t i : s.members()) ind(static_cast<Eigen::Index>(i)) = 1.0;
  return vn * ind.cast<Complex>().asDiagonal() * vn.adjoint();
}

TEST(IndexSet, EncodeDecodeRoundTrip) {
  IndexSet s(4, 3);
  EXPECT_EQ(s.universe_size(), 81u);
  std::vector<int> x = {2, 0, 1, 2};
  std::uint64_t idx = s.encode(x);
  EXPECT_EQ(idx, 2u * 27 + 0 * 9 + 1 * 3 + 2);
  EXPECT_EQ(s.decode(idx), x);
  s.insert(idx);
  s.insert(idx);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_THROW(IndexSet(25, 2), SizeError);
  const int bad[] = {0, 3, 0, 0};
  EXPECT_THROW(s.encode(bad), ValidationError);
}

TEST(Gamma, BinomialSumMatchesLogGamma) {
  EXPECT_NEAR(log_binomial_sum(10, 3), std::log(10.0 + 45.0 + 120.0), 1e-14);
  for (auto [n, L] : {std::pair{50, 10}, {1000, 100}, {4096, 900}, {30, 40}}) {
    EXPECT_NEAR(log_binomial_sum(n, L), log_binomial_sum_oracle(n, L), 1e-9 * std::max(1.0, log_binomial_sum_oracle(n, L)));
  }
}

TEST(Gamma, FormulaAndSentinel) {
  BlowupParams p{16, 0.5, 1.0};
  const double l = 4.0 * (std::sqrt(-0.5 * std::log(0.25)) + 1.0);
  EXPECT_NEAR(l_n_size(p), l, 1e-14);
  const int L = static_cast<int>(std::ceil(l));
  double want = std::log(2.0) + L * std::log(3.0) + log_binomial_sum_oracle(16, L) -
                std::log(0.5) - L * std::log(0.2);
  EXPECT_NEAR(log_gamma_factor(p, 3, 0.2).value(), want, 1e-10);
  EXPECT_TRUE(log_gamma_factor(p, 3, 0.0).is_infinite());
  EXPECT_TRUE(gamma_factor(p, 3, 0.0).is_infinite());
  EXPECT_THROW(l_n_size(BlowupParams{4, 0.0, 1.0}), ValidationError);
  EXPECT_THROW(l_n_size(BlowupParams{4, 0.5, -1.0}), ValidationError);
}

TEST(Gamma, ScheduleDecreases) {
  auto rows = gamma_schedule(12, 2, 0.25, 0.125);
  ASSERT_EQ(rows.size(), 12u);
  for (std::size_t i = 4; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].normalized.value(), rows[i - 1].normalized.value());
  }
}

TEST(HammingBlowup, MatchesBruteForce) {
  Rng rng(51);
  std::uniform_int_distribution<int> coin(0, 9);
  for (int trial = 0; trial < 5; ++trial) {
    IndexSet s(5, 3);
    for (std::uint64_t i = 0; i < s.universe_size(); ++i) {
      if (coin(rng) == 0) s.insert(i);
    }
    for (double radius : {0.0, 0.5, 1.0, 2.3}) {
      IndexSet b = hamming_blowup(s, radius);
      const int r = static_cast<int>(std::ceil(radius));
      for (std::uint64_t i = 0; i < s.universe_size(); ++i) {
        bool near = false;
        for (std::uint64_t j : s.members()) near = near || hamming(s.decode(i), s.decode(j)) <= r;
        EXPECT_EQ(b.contains(i), near);
      }
    }
  }
}

TEST(VerifyBlowup, IdentityContractionPasses) {
  Rng rng(52);
  DensityOperator rho = random_density(2, rng, 0.05);
  DensityOperator sigma = random_density(2, rng, 0.05);
  BlowupRecord r = verify_blowup(rho, ProductContraction{Matrix::Identity(2, 2)}, sigma,
                                 BlowupParams{6, 1.0, 1.0});
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.j_size, 64u);
  EXPECT_NEAR(r.concentration_lhs, 1.0, 1e-12);
}

TEST(VerifyBlowup, ZeroRadiusFirstBoundIsTrivial) {
  Rng rng(53);
  DensityOperator rho = random_density(2, rng, 0.05);
  Matrix m = random_contraction(2, rng);
  double eps = std::pow((rho.matrix() * m).trace().real(), 5);
  BlowupRecord r = verify_blowup(rho, ProductContraction{m}, random_density(2, rng, 0.05),
                                 BlowupParams{5, eps, 0.0});
  EXPECT_EQ(r.concentration_rhs, 0.0);
  EXPECT_GE(r.concentration_slack, 0.0);
}

TEST(VerifyBlowup, ProductMatchesDenseOracle) {
  Rng rng(54);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 4;
    DensityOperator rho = random_density(2, rng, 0.05);
    DensityOperator sigma = random_density(2, rng, 0.05);
    Matrix m = random_contraction(2, rng);
    double eps = std::pow((rho.matrix() * m).trace().real(), n);
    BlowupParams p{n, eps, 0.3};
    BlowupRecord prod = verify_blowup(rho, ProductContraction{m}, sigma, p);
    BlowupRecord dense = verify_blowup(rho, DenseContraction{tensor_power(m, n)}, sigma, p);
    EXPECT_EQ(prod.j_size, dense.j_size);
    EXPECT_EQ(prod.blown_up_size, dense.blown_up_size);
    EXPECT_NEAR(prod.sigma_lhs, dense.sigma_lhs, 1e-12);
    EXPECT_NEAR(prod.trace_rho_M, dense.trace_rho_M, 1e-12);
    EXPECT_TRUE(prod.passed);

    // Dense recomputation of J and both traces.
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    Matrix v = es.eigenvectors().rowwise().reverse();
    Matrix mn = tensor_power(m, n);
    Matrix vn = tensor_power(v, n);
    IndexSet j(n, 2);
    for (Eigen::Index i = 0; i < vn.cols(); ++i) {
      if ((vn.col(i).adjoint() * mn * vn.col(i))(0, 0).real() >= 0.5 * eps) {
        j.insert(static_cast<std::uint64_t>(i));
      }
    }
    ASSERT_EQ(j.size(), prod.j_size);
    Matrix plus = string_projector(v, hamming_blowup(j, prod.l_n));
    EXPECT_NEAR((tensor_power(sigma.matrix(), n) * plus).trace().real(), prod.sigma_lhs, 1e-12);
    EXPECT_NEAR((tensor_power(rho.matrix(), n) * plus).trace().real(), prod.concentration_lhs, 1e-12);
    EXPECT_NEAR((plus * plus - plus).norm(), 0.0, 1e-10);
  }
}

TEST(VerifyBlowup, DenseNonProductContraction) {
  Rng rng(55);
  DensityOperator rho = random_density(2, rng, 0.05);
  DensityOperator sigma = random_density(2, rng, 0.05);
  Matrix m = random_contraction(8, rng);
  double eps = (tensor_power(rho.matrix(), 3) * m).trace().real();
  BlowupRecord r = verify_blowup(rho, DenseContraction{m}, sigma, BlowupParams{3, eps, 0.5});
  EXPECT_NEAR(r.trace_rho_M, eps, 1e-12);
  EXPECT_TRUE(r.passed);
}

TEST(VerifyBlowup, SupportViolationMakesGammaInfinite) {
  DensityOperator rho = presets::maximally_mixed(2);
  DensityOperator sigma = testing::diag_state({1.0, 0.0});
  BlowupRecord r = verify_blowup(rho, ProductContraction{Matrix::Identity(2, 2)}, sigma,
                                 BlowupParams{4, 1.0, 0.5});
  EXPECT_EQ(r.mu_min, 0.0);
  EXPECT_TRUE(r.log_gamma.is_infinite());
  EXPECT_TRUE(r.sigma_rhs.is_infinite());
  EXPECT_TRUE(r.passed);
}

TEST(VerifyBlowup, LargerRadiusNeverShrinksTheSet) {
  Rng rng(56);
  DensityOperator rho = random_density(2, rng, 0.05);
  DensityOperator sigma = random_density(2, rng, 0.05);
  Matrix m = random_contraction(2, rng);
  double eps = std::pow((rho.matrix() * m).trace().real(), 8);
  std::size_t last = 0;
  double last_lhs = 0.0;
  for (double r : {0.0, 0.25, 0.5, 1.0, 1.5}) {
    BlowupRecord rec = verify_blowup(rho, ProductContraction{m}, sigma, BlowupParams{8, eps, r});
    EXPECT_GE(rec.blown_up_size, last);
    EXPECT_GE(rec.concentration_lhs, last_lhs - 1e-15);
    last = rec.blown_up_size;
    last_lhs = rec.concentration_lhs;
  }
}

TEST(VerifyBlowup, PreconditionFlag) {
  DensityOperator rho = testing::diag_state({0.5, 0.5});
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  BlowupRecord r = verify_blowup(rho, ProductContraction{m}, rho, BlowupParams{4, 0.5, 0.5});
  EXPECT_FALSE(r.precondition_ok);
  EXPECT_FALSE(r.passed);
}

TEST(VerifyBlowupBipartite, MatchesDenseOracle) {
  Rng rng(57);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 3;
    DensityOperator rho = random_density(4, rng, 0.05);
    DensityOperator sigma = random_density(4, rng, 0.05);
    Matrix ma = random_contraction(2, rng);
    Matrix mb = random_contraction(2, rng);
    Matrix ra = partial_trace(rho.matrix(), 2, 2, Subsystem::A);
    Matrix rb = partial_trace(rho.matrix(), 2, 2, Subsystem::B);
    double eps = std::min(std::pow((ra * ma).trace().real(), n), std::pow((rb * mb).trace().real(), n));
    BlowupParams p{n, eps, 0.5};
    BipartiteBlowupRecord r = verify_blowup_bipartite(rho, 2, 2, ma, mb, sigma, p);
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.identity_residual, 1e-12);

    auto side_projector = [&](const Matrix& marg, const Matrix& m) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(marg);
      Matrix v = es.eigenvectors().rowwise().reverse();
      RealVector lam = es.eigenvalues().reverse();
      Matrix vn = tensor_power(v, n);
      Matrix mn = tensor_power(m, n);
      Matrix ln = tensor_power(lam.cast<Complex>().asDiagonal().toDenseMatrix(), n);
      IndexSet j(n, 2);
      for (Eigen::Index i = 0; i < vn.cols(); ++i) {
        if (ln(i, i).real() > 0.0 && (vn.col(i).adjoint() * mn * vn.col(i))(0, 0).real() >= 0.5 * eps) {
          j.insert(static_cast<std::uint64_t>(i));
        }
      }
      return string_projector(v, hamming_blowup(j, r.l_n));
    };
    Matrix pp = kron(side_projector(ra, ma), side_projector(rb, mb));
    EXPECT_NEAR((block_power(sigma.matrix(), 2, 2, n) * pp).trace().real(), r.sigma_lhs, 1e-12);
    EXPECT_NEAR((block_power(rho.matrix(), 2, 2, n) * pp).trace().real(), r.joint_lhs, 1e-12);
  }
}

TEST(VerifyBlowupBipartite, IdentityContractionsPass) {
  Rng rng(58);
  DensityOperator rho = random_density(4, rng, 0.05);
  DensityOperator sigma = random_density(4, rng, 0.05);
  Matrix id = Matrix::Identity(2, 2);
  BipartiteBlowupRecord r = verify_blowup_bipartite(rho, 2, 2, id, id, sigma, BlowupParams{4, 1.0, 1.0});
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.joint_lhs, 1.0, 1e-12);
}

// Dense construction of the typical-projector test for one side.
Matrix dense_typical(const Matrix& rho, const Matrix& sigma, int n, double delta) {
  auto projector = [n](const Matrix& basis_state, double lo, double hi) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(basis_state);
    Matrix v = es.eigenvectors();
    RealVector mu = es.eigenvalues();
    Matrix out = Matrix::Zero(1 << n, 1 << n);
    for (int s = 0; s < (1 << n); ++s) {
      double logp = 0.0;
      Matrix ket = Matrix::Ones(1, 1);
      for (int k = n - 1; k >= 0; --k) {
        int a = (s >> k) & 1;
        logp += std::log(mu(a));
        ket = kron(ket, Matrix(v.col(a)));
      }
      if (logp >= lo - 1e-9 && logp <= hi + 1e-9) out += ket * ket.adjoint();
    }
    return out;
  };
  Eigen::SelfAdjointEigenSolver<Matrix> es_s(sigma);
  Matrix log_sigma = es_s.eigenvectors() * es_s.eigenvalues().array().log().matrix().cast<Complex>().asDiagonal() * es_s.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es_r(rho);
  Matrix log_rho = es_r.eigenvectors() * es_r.eigenvalues().array().log().matrix().cast<Complex>().asDiagonal() * es_r.eigenvectors().adjoint();
  double c_sigma = (rho * log_sigma).trace().real();
  double c_rho = (rho * log_rho).trace().real();
  Matrix p1 = projector(sigma, n * (c_sigma - delta), n * (c_sigma + delta));
  Matrix p2 = projector(rho, n * (c_rho - delta), n * (c_rho + delta));
  return p1 * p2 * p1;
}

TEST(TypicalScheme, MatchesDenseOracle) {
  Rng rng(59);
  for (int trial = 0; trial < 3; ++trial) {
    DensityOperator null = random_density(4, rng, 0.05);
    DensityOperator alt = tensor_product(random_density(2, rng, 0.05), random_density(2, rng, 0.05));
    BipartitePair pair(null, alt, 2, 2);
    for (int n : {2, 3}) {
      const double delta = 0.3;
      SchemeResult s = typical_projector_scheme(pair, n, delta);
      Matrix na = pair.null_marginal(Subsystem::A).matrix();
      Matrix nb = pair.null_marginal(Subsystem::B).matrix();
      Matrix aa = pair.alt_marginal(Subsystem::A).matrix();
      Matrix ab = pair.alt_marginal(Subsystem::B).matrix();
      Matrix ma = dense_typical(na, aa, n, delta);
      Matrix mb = dense_typical(nb, ab, n, delta);
      EXPECT_NEAR(s.beta_A, (tensor_power(aa, n) * ma).trace().real(), 1e-10);
      EXPECT_NEAR(s.beta_B, (tensor_power(ab, n) * mb).trace().real(), 1e-10);
      EXPECT_NEAR(s.null_success_A, (tensor_power(na, n) * ma).trace().real(), 1e-10);
      double joint = (block_power(null.matrix(), 2, 2, n) * kron(ma, mb)).trace().real();
      EXPECT_NEAR(s.alpha, std::clamp(1.0 - joint, 0.0, 1.0), 1e-10);
    }
  }
}

TEST(TypicalScheme, IdenticalStatesGiveComplementaryErrors) {
  DensityOperator a = testing::diag_state({0.3, 0.7});
  DensityOperator b = testing::diag_state({0.8, 0.2});
  DensityOperator prod = tensor_product(a, b);
  SchemeResult s = typical_projector_scheme(BipartitePair(prod, prod, 2, 2), 8, 0.2);
  EXPECT_NEAR(s.alpha, 1.0 - s.beta, 1e-12);
  EXPECT_NEAR(s.exponent.value(), -std::log(s.beta) / 8.0, 1e-15);
}

TEST(TypicalScheme, Guards) {
  BipartitePair entangled(presets::isotropic(0.7, 2), presets::isotropic(0.2, 2), 2, 2);
  EXPECT_THROW(typical_projector_scheme(entangled, 4, 0.2), ValidationError);
  BipartitePair pair(presets::isotropic(0.7, 2), presets::maximally_mixed(4), 2, 2);
  EXPECT_THROW(typical_projector_scheme(pair, 13, 0.2), SizeError);
  EXPECT_THROW(typical_projector_scheme(pair, 4, 0.0), ValidationError);
}

}  // namespace
}  // namespace steinlab
