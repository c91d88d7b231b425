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

#include "steinlab/protocol.h"

#include <cmath>

#include <gtest/gtest.h>

#include "steinlab/exponents.h"
#include "steinlab/repro.h"
#include "test_util.h"

namespace steinlab {
namespace {

using testing::diag_state;

JointPmf pmf2(double a, double b, double c, double d) {
  RealMatrix t(2, 2);
  t << a, b, c, d;
  return JointPmf(t);
}

bool oracle_accepts(const std::vector<int>& counts, const std::vector<double>& marginal, int n,
                    double delta) {
  for (std::size_t a = 0; a < counts.size(); ++a) {
    double m = n * marginal[a];
    if (counts[a] < m * (1.0 - delta) - 1e-9 || counts[a] > m * (1.0 + delta) + 1e-9) return false;
  }
  return true;
}

// Sums p^{(x)n} and q^{(x)n} over every accepted sequence.
std::pair<double, double> brute_force(const JointPmf& p, const JointPmf& q, int n, double delta) {
  const std::size_t nx = p.rows();
  const std::size_t ny = p.cols();
  const std::size_t cells = nx * ny;
  auto mx = p.marginal_x();
  auto my = p.marginal_y();
  auto fp = p.flat();
  auto fq = q.flat();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= cells;
  double acc_p = 0.0;
  double acc_q = 0.0;
  for (std::size_t s = 0; s < total; ++s) {
    std::vector<int> cx(nx, 0);
    std::vector<int> cy(ny, 0);
    double wp = 1.0;
    double wq = 1.0;
    std::size_t rest = s;
    for (int i = 0; i < n; ++i) {
      std::size_t k = rest % cells;
      rest /= cells;
      ++cx[k / ny];
      ++cy[k % ny];
      wp *= fp[k];
      wq *= fq[k];
    }
    if (oracle_accepts(cx, mx, n, delta) && oracle_accepts(cy, my, n, delta)) {
      acc_p += wp;
      acc_q += wq;
    }
  }
  return {1.0 - acc_p, acc_q};
}

TEST(OneBitExact, MatchesSequenceEnumeration) {
  Rng rng(71);
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t nx = trial < 2 ? 2 : 3;
    RealMatrix tp(static_cast<Eigen::Index>(nx), 2);
    RealMatrix tq(static_cast<Eigen::Index>(nx), 2);
    auto vp = random_pmf(nx * 2, rng, 0.02);
    auto vq = random_pmf(nx * 2, rng, 0.02);
    for (std::size_t k = 0; k < nx * 2; ++k) {
      tp(static_cast<Eigen::Index>(k / 2), static_cast<Eigen::Index>(k % 2)) = vp[k];
      tq(static_cast<Eigen::Index>(k / 2), static_cast<Eigen::Index>(k % 2)) = vq[k];
    }
    JointPmf p(tp);
    JointPmf q(tq);
    const int n_max = nx == 2 ? 6 : 5;
    std::vector<int> ns;
    for (int n = 1; n <= n_max; ++n) ns.push_back(n);
    for (double delta : {0.3, 0.6}) {
      ErrorCurve curve = one_bit_exact(p, q, TypicalityRule{delta, TypicalityMode::Robust}, ns);
      for (const ErrorPoint& pt : curve.points) {
        auto [alpha, beta] = brute_force(p, q, pt.n, delta);
        EXPECT_NEAR(pt.alpha, alpha, 1e-12) << "n=" << pt.n;
        EXPECT_NEAR(pt.beta, beta, 1e-12) << "n=" << pt.n;
        EXPECT_EQ(pt.copies, pt.n);
      }
    }
  }
}

TEST(OneBitExact, IdenticalHypothesesGiveComplementaryErrors) {
  JointPmf p = pmf2(0.3, 0.2, 0.1, 0.4);
  std::vector<int> ns = {5, 20, 60};
  for (const ErrorPoint& pt : one_bit_exact(p, p, TypicalityRule{0.2}, ns).points) {
    EXPECT_NEAR(pt.alpha + pt.beta, 1.0, 1e-12);
  }
}

TEST(OneBitExact, DisjointSupportsGiveInfiniteExponent) {
  std::vector<int> ns = {4, 30};
  JointPmf p = pmf2(1.0, 0.0, 0.0, 0.0);
  JointPmf q = pmf2(0.0, 0.0, 0.0, 1.0);
  for (auto mode : {TypicalityMode::Robust, TypicalityMode::JointSupport}) {
    for (const ErrorPoint& pt : one_bit_exact(p, q, TypicalityRule{0.1, mode}, ns).points) {
      EXPECT_EQ(pt.beta, 0.0);
      EXPECT_TRUE(pt.minus_log_beta_over_n.is_infinite());
      EXPECT_EQ(pt.alpha, 0.0);
    }
  }
}

TEST(OneBitExact, ExponentStaysBelowZeroRateValuePlusTypeCount) {
  ClassicalInstance inst = convergence_instance();
  const double theta = theta_zrc(inst.p, inst.q).value.value();
  std::vector<int> ns = {10, 20, 40, 60};
  for (double delta : {0.02, 0.1, 0.3}) {
    for (const ErrorPoint& pt : one_bit_exact(inst.p, inst.q, TypicalityRule{delta}, ns).points) {
      EXPECT_LE(pt.minus_log_beta_over_n.value(), theta + 4.0 * std::log(pt.n + 1.0) / pt.n);
    }
  }
}

TEST(OneBitExact, ConvergenceInstanceApproachesZeroRateValue) {
  ClassicalInstance inst = convergence_instance();
  const double theta = theta_zrc(inst.p, inst.q).value.value();
  std::vector<int> ns = {10, 20, 40, 60};
  auto curve = one_bit_exact(inst.p, inst.q, inst.rule, ns);
  double last = INFINITY;
  for (const ErrorPoint& pt : curve.points) {
    double err = std::abs(pt.minus_log_beta_over_n.value() - theta) / theta;
    EXPECT_LT(err, last);
    last = err;
  }
  EXPECT_LT(last, 0.15);
}

TEST(OneBitExact, TypeOneErrorVanishes) {
  JointPmf p = pmf2(0.45, 0.05, 0.05, 0.45);
  JointPmf q = pmf2(0.05, 0.05, 0.05, 0.85);
  std::vector<int> ns = {10, 40, 80};
  auto curve = one_bit_exact(p, q, TypicalityRule{0.3}, ns);
  EXPECT_LT(curve.points[2].alpha, curve.points[0].alpha);
  EXPECT_LT(curve.points[2].alpha, 0.01);
}

TEST(OneBitExact, IntervalModeOnBinaryAlphabets) {
  JointPmf p = pmf2(0.25, 0.25, 0.25, 0.25);
  JointPmf q = pmf2(0.1, 0.1, 0.1, 0.7);
  std::vector<int> ns = {4};
  auto pt = one_bit_exact(p, q, TypicalityRule{0.5, TypicalityMode::Interval}, ns).points[0];
  // Each side accepts N_1 in {1, 2, 3}.
  double bx = 0.0;
  const double q1 = 0.8;
  for (int k = 1; k <= 3; ++k) bx += std::tgamma(5.0) / (std::tgamma(k + 1.0) * std::tgamma(5.0 - k)) * std::pow(q1, k) * std::pow(1 - q1, 4 - k);
  EXPECT_GT(pt.beta, 0.0);
  EXPECT_LE(pt.beta, bx + 1e-12);
  EXPECT_NEAR(pt.alpha, 1.0 - std::pow(14.0 / 16.0, 2), 1e-12);
}

TEST(OneBitExact, Guards) {
  JointPmf p = pmf2(0.25, 0.25, 0.25, 0.25);
  std::vector<int> big = {81};
  EXPECT_THROW(one_bit_exact(p, p, TypicalityRule{}, big), SizeError);
  std::vector<int> ok = {4};
  EXPECT_THROW(one_bit_exact(p, p, TypicalityRule{0.0}, ok), ValidationError);
  EXPECT_THROW(one_bit_exact(p, p, TypicalityRule{1.0}, ok), ValidationError);
  RealMatrix t = RealMatrix::Constant(5, 5, 1.0 / 25.0);
  EXPECT_THROW(one_bit_exact(JointPmf(t), JointPmf(t), TypicalityRule{}, ok), SizeError);
  RealMatrix t3 = RealMatrix::Constant(3, 2, 1.0 / 6.0);
  EXPECT_THROW(one_bit_exact(JointPmf(t3), JointPmf(t3), TypicalityRule{0.5, TypicalityMode::Interval}, ok),
               ValidationError);
  EXPECT_THROW(one_bit_exact(p, JointPmf(t3), TypicalityRule{}, ok), DimensionError);
  EXPECT_EQ(typicality_mode_from_string("joint_support"), TypicalityMode::JointSupport);
  EXPECT_THROW(typicality_mode_from_string("loose"), ValidationError);
}

TEST(Wilson, KnownValues) {
  auto [lo, hi] = wilson_interval(0, 10);
  EXPECT_EQ(lo, 0.0);
  EXPECT_NEAR(hi, 0.27753279986288, 1e-10);
  auto [lo2, hi2] = wilson_interval(50, 100);
  EXPECT_NEAR(lo2, 0.40383153036599562, 1e-12);
  EXPECT_NEAR(hi2, 0.59616846963400438, 1e-12);
  EXPECT_THROW(wilson_interval(0, 0), ValidationError);
}

TEST(MonteCarlo, DeterministicForSeed) {
  JointPmf p = pmf2(0.45, 0.05, 0.05, 0.45);
  auto a = one_bit_monte_carlo(p, p, TypicalityRule{0.2}, 30, 2000, 9);
  auto b = one_bit_monte_carlo(p, p, TypicalityRule{0.2}, 30, 2000, 9);
  EXPECT_EQ(a.rejections, b.rejections);
  EXPECT_LE(a.wilson_low, a.alpha_hat);
  EXPECT_GE(a.wilson_high, a.alpha_hat);
}

TEST(MonteCarlo, AgreesWithExactTypeOneError) {
  JointPmf p = pmf2(0.3, 0.2, 0.1, 0.4);
  TypicalityRule rule{0.2};
  std::vector<int> ns = {40};
  const double alpha = one_bit_exact(p, p, rule, ns).points[0].alpha;
  auto mc = one_bit_monte_carlo(p, p, rule, 40, 100000, 1);
  EXPECT_LE(mc.wilson_low, alpha);
  EXPECT_GE(mc.wilson_high, alpha);

  std::vector<int> small = {20};
  const double alpha20 = one_bit_exact(p, p, rule, small).points[0].alpha;
  int covered = 0;
  for (std::uint64_t seed = 100; seed < 200; ++seed) {
    auto batch = one_bit_monte_carlo(p, p, rule, 20, 2000, seed);
    covered += batch.wilson_low <= alpha20 && alpha20 <= batch.wilson_high;
  }
  EXPECT_GE(covered, 93);
}

TEST(MonteCarlo, JointSupportNeverRejects) {
  JointPmf p = pmf2(0.5, 0.0, 0.0, 0.5);
  auto mc = one_bit_monte_carlo(p, p, TypicalityRule{0.1, TypicalityMode::JointSupport}, 10, 500, 3);
  EXPECT_EQ(mc.rejections, 0);
}

TEST(QuantumFrontend, CommutingStatesReduceToClassical) {
  JointPmf p = pmf2(0.45, 0.05, 0.05, 0.45);
  JointPmf q = pmf2(0.05, 0.05, 0.05, 0.85);
  BipartitePair pair(diag_state({0.45, 0.05, 0.05, 0.45}), diag_state({0.05, 0.05, 0.05, 0.85}), 2, 2);
  std::vector<int> ns = {5, 15, 30};
  TypicalityRule rule{0.2};
  auto quantum = quantum_frontend(pair, LocalPVM::computational(2, 2), rule, ns);
  auto classical = one_bit_exact(p, q, rule, ns);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    EXPECT_NEAR(quantum.points[i].alpha, classical.points[i].alpha, 1e-12);
    EXPECT_NEAR(quantum.points[i].log_beta, classical.points[i].log_beta, 1e-10);
  }
  std::vector<int> ks = {3};
  auto blocked = quantum_frontend(pair, LocalPVM::computational(2, 2, 2), rule, ks);
  EXPECT_EQ(blocked.points[0].copies, 6);
}

TEST(QuantumFrontend, BellPairTesterIsErrorFree) {
  std::vector<int> ks = {1};
  auto pt = quantum_frontend(preset_pair("bell_z"), LocalPVM::computational(2, 2),
                             TypicalityRule{0.1, TypicalityMode::JointSupport}, ks)
                .points[0];
  EXPECT_EQ(pt.alpha, 0.0);
  EXPECT_EQ(pt.beta, 0.0);
}

TEST(QuantumFrontend, SameMarginalsGiveVanishingExponent) {
  BipartitePair pair(presets::isotropic(0.7, 2), presets::maximally_mixed(4), 2, 2);
  std::vector<int> ks = {80};
  auto pt = quantum_frontend(pair, LocalPVM::computational(2, 2), TypicalityRule{0.5}, ks).points[0];
  EXPECT_LE(pt.minus_log_beta_over_n.value(), 1e-3);
}

TEST(QuantumFrontend, RejectsMismatchedMeasurement) {
  std::vector<int> ks = {2};
  EXPECT_THROW(quantum_frontend(preset_pair("bell_z"), LocalPVM::computational(3, 2),
                                TypicalityRule{}, ks),
               DimensionError);
}

}  // namespace
}  // namespace steinlab
