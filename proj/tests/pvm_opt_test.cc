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

#include "steinlab/pvm_opt.h"

#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>

#include "steinlab/exponents.h"
#include "test_util.h"

namespace steinlab {
namespace {

using testing::diag_state;

TEST(InducedPmf, ProductDiagonalStates) {
  DensityOperator a = diag_state({0.3, 0.7});
  DensityOperator b = diag_state({0.2, 0.5, 0.3});
  JointPmf p = induced_pmf(kron(a.matrix(), b.matrix()), LocalPVM::computational(2, 3));
  EXPECT_NEAR(p(1, 1), 0.35, 1e-15);
  EXPECT_NEAR(p(0, 2), 0.09, 1e-15);
  EXPECT_THROW(induced_pmf(a.matrix(), LocalPVM::computational(2, 3)), DimensionError);
}

TEST(InducedPmf, RotatedBasis) {
  BipartitePair pair = preset_pair("bell_x");
  PVMBasis h(testing::hadamard());
  JointPmf p = induced_pmf(pair.null_state().matrix(), LocalPVM(h, h, 2, 2));
  JointPmf q = induced_pmf(pair.alt_state().matrix(), LocalPVM(h, h, 2, 2));
  EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
  EXPECT_EQ(p(0, 1), 0.0);
  EXPECT_EQ(q(0, 0), 0.0);
  EXPECT_NEAR(q(1, 0), 0.5, 1e-15);
}

TEST(Maxmin, CommutingPairMatchesClassicalValue) {
  DensityOperator null = diag_state({0.4, 0.1, 0.1, 0.4});
  DensityOperator alt = diag_state({0.1, 0.2, 0.3, 0.4});
  BipartitePair pair(null, alt, 2, 2);
  RealMatrix pt(2, 2);
  pt << 0.4, 0.1, 0.1, 0.4;
  RealMatrix qt(2, 2);
  qt << 0.1, 0.2, 0.3, 0.4;
  double want = theta_zrc(JointPmf(pt), JointPmf(qt)).value.value();
  PvmSearchConfig cfg;
  cfg.restarts = 4;
  MaxminResult r = maxmin_finite_n(pair, cfg);
  EXPECT_NEAR(r.report.value.value(), want, 1e-3);
  EXPECT_GE(r.report.value.value(), want - 1e-9);
  EXPECT_EQ(r.report.bound_kind, BoundKind::Lower);
}

TEST(Maxmin, SameMarginalsGiveZero) {
  PvmSearchConfig cfg;
  cfg.restarts = 3;
  EXPECT_NEAR(maxmin_finite_n(preset_pair("isotropic_vs_perp"), cfg).report.value.value(), 0.0, 1e-6);
  EXPECT_NEAR(maxmin_finite_n(preset_pair("werner_vs_perp"), cfg).report.value.value(), 0.0, 1e-6);
}

TEST(Maxmin, DeterministicAcrossThreadCounts) {
  Rng rng(41);
  BipartitePair pair(random_density(4, rng), tensor_product(random_density(2, rng, 0.1), random_density(2, rng, 0.1)), 2, 2);
  PvmSearchConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 9;
  cfg.threads = 1;
  MaxminResult one = maxmin_finite_n(pair, cfg);
  cfg.threads = 3;
  MaxminResult three = maxmin_finite_n(pair, cfg);
  EXPECT_EQ(one.report.value.value(), three.report.value.value());
  EXPECT_EQ(one.best_restart, three.best_restart);
  // The local-measurement value cannot exceed the single-letter value.
  EXPECT_LE(one.report.value.value(), theta_product_alt(pair).value.value() + 1e-9);
}

TEST(Maxmin, BlockSizeTwoIsNotWorse) {
  Rng rng(42);
  BipartitePair pair(random_density(4, rng), tensor_product(random_density(2, rng, 0.1), random_density(2, rng, 0.1)), 2, 2);
  PvmSearchConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 400;
  double m1 = maxmin_finite_n(pair, cfg).report.value.value();
  cfg.block_size = 2;
  double m2 = maxmin_finite_n(pair, cfg).report.value.value();
  EXPECT_GE(m2, m1 - 1e-9);
}

TEST(Maxmin, Guards) {
  PvmSearchConfig cfg;
  cfg.block_size = 9;
  EXPECT_THROW(maxmin_finite_n(preset_pair("bell_z"), cfg), SizeError);
  cfg.block_size = 0;
  EXPECT_THROW(maxmin_finite_n(preset_pair("bell_z"), cfg), ValidationError);
}

TEST(Maxmin, OrthogonalOutcomesAreInfinite) {
  PvmSearchConfig cfg;
  cfg.restarts = 1;
  BipartitePair pair(testing::diag_state({1.0, 0.0, 0.0, 0.0}), testing::diag_state({0.0, 0.0, 0.0, 1.0}), 2, 2);
  EXPECT_TRUE(maxmin_finite_n(pair, cfg).report.value.is_infinite());
}

TEST(ThreadBudget, ReadsEnvironment) {
  setenv("STEINLAB_THREADS", "3", 1);
  EXPECT_EQ(thread_budget(), 3);
  setenv("STEINLAB_THREADS", "2", 1);
}

TEST(DiagonalTarget, ProductTargetGivesProductState) {
  Rng rng(43);
  DensityOperator rho = random_density(4, rng);
  Matrix ra = partial_trace(rho.matrix(), 2, 2, Subsystem::A);
  Matrix rb = partial_trace(rho.matrix(), 2, 2, Subsystem::B);
  LocalPVM pvm = LocalPVM::computational(2, 2);
  JointPmf target = induced_pmf(kron(ra, rb), pvm);
  DiagonalTargetState r = diagonal_target_state(rho, 2, 2, pvm, target);
  EXPECT_TRUE(r.psd);
  EXPECT_LE(r.marginal_residual, 1e-12);
  EXPECT_NEAR((r.state - kron(ra, rb)).norm(), 0.0, 1e-12);
}

TEST(DiagonalTarget, PositivityFailsForCoherentMarginals) {
  Vector plus(2);
  plus << 1.0, 1.0;
  DensityOperator rho = presets::pure(kron(plus, plus).col(0));
  RealMatrix t(2, 2);
  t << 0.5, 0.0, 0.0, 0.5;
  DiagonalTargetState r = diagonal_target_state(rho, 2, 2, LocalPVM::computational(2, 2), JointPmf(t));
  EXPECT_FALSE(r.psd);
  EXPECT_LT(r.min_eigenvalue, -0.1);
  EXPECT_LE(r.marginal_residual, 1e-12);
}

TEST(DiagonalTarget, RejectsTargetsWithWrongMarginals) {
  DensityOperator rho = presets::maximally_mixed(4);
  RealMatrix t(2, 2);
  t << 0.7, 0.1, 0.1, 0.1;
  EXPECT_THROW(diagonal_target_state(rho, 2, 2, LocalPVM::computational(2, 2), JointPmf(t)),
               PreconditionError);
}

}  // namespace
}  // namespace steinlab
