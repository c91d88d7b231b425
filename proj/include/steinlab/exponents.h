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

#ifndef STEINLAB_EXPONENTS_H
#define STEINLAB_EXPONENTS_H

#include <optional>
#include <string>
#include <vector>

#include "steinlab/common.h"
#include "steinlab/entropy.h"
#include "steinlab/marginal_opt.h"
#include "steinlab/qstate.h"

namespace steinlab {

enum class BoundKind { Exact, Upper, Lower };

std::string to_string(BoundKind kind);

/// `bound_kind` states how `value` relates to the Stein exponent of the instance.
struct ExponentReport {
  std::string name;
  ExtendedReal value;
  std::string method;
  std::optional<SolverDiagnostics> diagnostics;
  BoundKind bound_kind = BoundKind::Exact;
};

/// Classical zero-rate exponent: min KL(p^ || q) over p^ with the marginals of p.
/// Exact when q > 0 everywhere, otherwise an achievable (lower) value.
ExponentReport theta_zrc(const JointPmf& p, const JointPmf& q);

/// D(rho_A || rho~_A) + D(rho_B || rho~_B); the alternative must be a product state.
ExponentReport theta_product_alt(const BipartitePair& pair);

/// Single-letter quantum expression: min D(rho^ || rho~) over rho^ with the marginals of rho.
ExponentReport theta_sl(const BipartitePair& pair, const QProjectOptions& opts = {});

/// 1/2 (D(psi||r0) + D(psi||r1) - D(psi||w(r0,r1)) - D(psi||w(r1,r0))) with w the geometric
/// mean. `mean` can be replaced to audit the computation.
double kappa_gap(const DensityOperator& psi, const DensityOperator& r0, const DensityOperator& r1,
                 const GeometricMeanFn& mean = {});

/// Closed-form upper bounds for isotropic against Phi-perp and Werner against Theta.
ExponentReport iso_werner_bounds(const std::string& family, double p, int d);

/// Closed form of the single-letter value for a classical-quantum pair whose null conditional
/// states all equal the pure state psi: kl(p_X, p~_X) + sum_x p_X(x) D(psi || rho~_x).
ExponentReport theta_sl_cq_closed_form(std::span<const double> p_x, std::span<const double> ptilde_x,
                                       const DensityOperator& psi,
                                       std::span<const DensityOperator> rho_tilde);

struct DiscriminationResult {
  bool found = false;
  std::optional<LocalPVM> witness;
  std::string witness_name;
  ExponentReport report;
};

/// Searches local single-copy bases for one under which the outcome distributions of the two
/// states have disjoint supports. The built-in dictionary holds the computational, Fourier and
/// (for qubits) Pauli X and Y bases on each side; `extra` entries are tried after it.
DiscriminationResult orthogonal_discrimination(const BipartitePair& pair,
                                               const std::vector<LocalPVM>& extra = {});

/// Fourier basis on C^d.
PVMBasis fourier_basis(std::size_t d);

}  // namespace steinlab

#endif  // STEINLAB_EXPONENTS_H
