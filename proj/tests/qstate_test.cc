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

#include "steinlab/qstate.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace steinlab {
namespace {

using testing::diag_state;
using testing::min_eigenvalue;

TEST(DensityOperator, AcceptsTinyAsymmetryAndSymmetrizes) {
  Matrix m(2, 2);
  m << 0.5, Complex(0.1, 1e-13), Complex(0.1, 0.0), 0.5;
  DensityOperator rho(m);
  EXPECT_EQ(rho.matrix()(0, 1), std::conj(rho.matrix()(1, 0)));
}

TEST(DensityOperator, RejectsInvalidMatrices) {
  Matrix asym(2, 2);
  asym << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(DensityOperator{asym}, ValidationError);
  Matrix neg(2, 2);
  neg << 1.2, 0.0, 0.0, -0.2;
  EXPECT_THROW(DensityOperator{neg}, ValidationError);
  Matrix trace(2, 2);
  trace << 0.6, 0.0, 0.0, 0.6;
  EXPECT_THROW(DensityOperator{trace}, ValidationError);
  EXPECT_THROW(DensityOperator{Matrix(2, 3)}, DimensionError);
}

TEST(DensityOperator, SpectrumIsDescendingWithCutoff) {
  DensityOperator rho = diag_state({0.2, 0.0, 0.8});
  const auto& ev = rho.spectrum().eigenvalues;
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_NEAR(ev[0], 0.8, 1e-15);
  EXPECT_NEAR(ev[1], 0.2, 1e-15);
  EXPECT_EQ(ev[2], 0.0);
  EXPECT_EQ(rho.rank(), 2u);
  Matrix p = rho.support_projector();
  EXPECT_NEAR((p * p - p).norm(), 0.0, 1e-12);
  EXPECT_NEAR(p.trace().real(), 2.0, 1e-12);
}

TEST(PVMBasis, RejectsNonUnitary) {
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(PVMBasis{m}, ValidationError);
  EXPECT_NO_THROW(PVMBasis{testing::hadamard()});
}

TEST(Presets, IsotropicAndWernerWeights) {
  for (int d : {2, 3}) {
    for (double p : {0.0, 0.3, 1.0}) {
      DensityOperator iso = presets::isotropic(p, d);
      Matrix phi = presets::max_entangled(d).matrix();
      EXPECT_NEAR((phi * iso.matrix()).trace().real(), p, 1e-12);
      DensityOperator w = presets::werner(p, d);
      Matrix sym_proj = (Matrix::Identity(d * d, d * d) + presets::swap(d)) / 2.0;
      EXPECT_NEAR((sym_proj * w.matrix()).trace().real(), p, 1e-12);
    }
  }
  EXPECT_THROW(presets::isotropic(1.5, 2), ValidationError);
  EXPECT_THROW(presets::werner(0.5, 1), ValidationError);
}

TEST(Presets, SameMarginalFamilies) {
  for (int d : {2, 3}) {
    Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);
    for (const DensityOperator& s :
         {presets::isotropic(0.4, d), presets::werner(0.4, d), presets::phi_perp(d)}) {
      EXPECT_NEAR((partial_trace(s.matrix(), d, d, Subsystem::A) - mixed).norm(), 0.0, 1e-12);
      EXPECT_NEAR((partial_trace(s.matrix(), d, d, Subsystem::B) - mixed).norm(), 0.0, 1e-12);
    }
  }
}

TEST(Presets, NamedLookups) {
  const double p[] = {0.5};
  EXPECT_NEAR((preset("isotropic", p, 2).matrix() - presets::isotropic(0.5, 2).matrix()).norm(),
              0.0, 1e-15);
  EXPECT_THROW(preset("nope", {}, 2), ValidationError);
  EXPECT_THROW(preset_pair("nope"), ValidationError);
  for (const char* name :
       {"bell_z", "bell_x", "isotropic_vs_perp", "werner_vs_perp", "cq_pure_null"}) {
    EXPECT_NO_THROW(preset_pair(name)) << name;
  }
}

TEST(Operators, SwapExchangesFactors) {
  Rng rng(1);
  Matrix a = random_density(3, rng).matrix();
  Matrix b = random_density(3, rng).matrix();
  Matrix s = presets::swap(3);
  EXPECT_NEAR((s * kron(a, b) * s - kron(b, a)).norm(), 0.0, 1e-12);
}

TEST(Operators, PartialTraceOfProduct) {
  Rng rng(2);
  DensityOperator a = random_density(2, rng);
  DensityOperator b = random_density(3, rng);
  DensityOperator ab = tensor_product(a, b);
  EXPECT_NEAR((partial_trace(ab, 2, 3, Subsystem::A).matrix() - a.matrix()).norm(), 0.0, 1e-12);
  EXPECT_NEAR((partial_trace(ab, 2, 3, Subsystem::B).matrix() - b.matrix()).norm(), 0.0, 1e-12);
  EXPECT_THROW(partial_trace(ab.matrix(), 4, 2, Subsystem::A), DimensionError);
}

TEST(Operators, BlockPowerRegroupsFactors) {
  Rng rng(3);
  Matrix a = random_density(2, rng).matrix();
  Matrix b = random_density(3, rng).matrix();
  Matrix got = block_power(kron(a, b), 2, 3, 2);
  Matrix want = kron(kron(a, a), kron(b, b));
  EXPECT_NEAR((got - want).norm(), 0.0, 1e-12);
  // Entangled input: marginals of the block power are tensor powers of the marginals.
  Matrix phi = presets::isotropic(0.8, 2).matrix();
  Matrix bp = block_power(phi, 2, 2, 2);
  Matrix ra = partial_trace(phi, 2, 2, Subsystem::A);
  EXPECT_NEAR((partial_trace(bp, 4, 4, Subsystem::A) - kron(ra, ra)).norm(), 0.0, 1e-12);
}

TEST(Operators, TensorPowerGuards) {
  EXPECT_THROW(tensor_power(Matrix::Identity(2, 2), 0), ValidationError);
  EXPECT_THROW(tensor_power(Matrix::Identity(2, 2), 17), SizeError);
  EXPECT_EQ(tensor_power(Matrix::Identity(2, 2), 3).rows(), 8);
}

TEST(Operators, TensorProductSizeGuard) {
  DensityOperator a = presets::maximally_mixed(4);
  EXPECT_THROW(tensor_product(a, a, 8), SizeError);
}

TEST(Operators, SupportContainment) {
  DensityOperator pure0 = diag_state({1.0, 0.0});
  DensityOperator mixed = diag_state({0.5, 0.5});
  EXPECT_TRUE(support_contained(pure0, mixed.matrix()));
  EXPECT_FALSE(support_contained(mixed, pure0.matrix()));
}

TEST(Operators, PinchingInequalityOnRandomContractions) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
    Matrix m = random_contraction(d, rng);
    PVMBasis basis(haar_unitary(static_cast<Eigen::Index>(d), rng));
    Matrix pinched = pinch(m, basis);
    EXPECT_GE(min_eigenvalue(pinched - m / static_cast<double>(d)), -1e-10);
    EXPECT_NEAR((pinch(pinched, basis) - pinched).norm(), 0.0, 1e-12);
  }
}

TEST(LocalPVM, ComputationalIsIdentity) {
  LocalPVM pvm = LocalPVM::computational(2, 3, 2);
  EXPECT_EQ(pvm.basis_A().dim(), 4u);
  EXPECT_EQ(pvm.basis_B().dim(), 9u);
  EXPECT_NEAR((pvm.product_unitary() - Matrix::Identity(36, 36)).norm(), 0.0, 1e-15);
  EXPECT_THROW(LocalPVM(PVMBasis::computational(2), PVMBasis::computational(2), 2, 2, 2),
               DimensionError);
}

TEST(HermitianFunctions, ExpAndLogInvert) {
  Rng rng(5);
  Matrix rho = random_density(3, rng, 0.1).matrix();
  Matrix back = hermitian_exp(hermitian_log_on_support(rho));
  EXPECT_NEAR((back - rho).norm(), 0.0, 1e-12);
  Matrix s = hermitian_sqrt(rho);
  EXPECT_NEAR((s * s - rho).norm(), 0.0, 1e-12);
  Matrix is = hermitian_inv_sqrt(rho);
  EXPECT_NEAR((is * rho * is - Matrix::Identity(3, 3)).norm(), 0.0, 1e-10);
  EXPECT_THROW(hermitian_inv_sqrt(diag_state({1.0, 0.0}).matrix()), PreconditionError);
}

TEST(HermitianFunctions, CoordinatesRoundTrip) {
  Rng rng(6);
  Matrix h = random_contraction(3, rng);
  RealVector x = hermitian_coordinates(h);
  EXPECT_EQ(x.size(), 9);
  EXPECT_NEAR((hermitian_from_coordinates(x, 0, 3) - h).norm(), 0.0, 1e-14);
  Matrix u = unitary_exp(h);
  EXPECT_NEAR((u * u.adjoint() - Matrix::Identity(3, 3)).norm(), 0.0, 1e-12);
}

}  // namespace
}  // namespace steinlab
