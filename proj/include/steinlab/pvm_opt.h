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

#ifndef STEINLAB_PVM_OPT_H
#define STEINLAB_PVM_OPT_H

#include <cstdint>
#include <optional>

#include "steinlab/common.h"
#include "steinlab/entropy.h"
#include "steinlab/exponents.h"
#include "steinlab/qstate.h"

namespace steinlab {

struct PvmSearchConfig {
  /// Number of copies m measured jointly on each side.
  int block_size = 1;
  int restarts = 32;
  std::uint64_t seed = 0;
  /// Simplex-size tolerance of the local search.
  double tol = 1e-7;
  int max_iterations = 2000;
  /// Tolerance of the inner marginal projection.
  double inner_tol = 1e-10;
  /// Worker threads; 0 uses STEINLAB_THREADS or the hardware concurrency.
  int threads = 0;
};

/// Thread budget from STEINLAB_THREADS (if set and positive) or the hardware.
int thread_budget();

/// Outcome pmf of `state` on A^m (x) B^m in the product basis of `pvm`. Entries within 1e-13
/// of zero are set to zero and the table renormalized.
JointPmf induced_pmf(const Matrix& state, const LocalPVM& pvm);

struct MaxminResult {
  ExponentReport report;
  LocalPVM best;
  int evaluations = 0;
  int inner_failures = 0;
  int best_restart = 0;
};

/// max over local bases on m-copy blocks of (1/m) min KL over couplings of the induced
/// marginals, searched by Nelder-Mead over U = U0 exp(iH) from seeded restarts. Restart 0
/// starts from the computational bases; for m > 1 restart 1 starts from the m-fold power of
/// the best single-copy bases.
MaxminResult maxmin_finite_n(const BipartitePair& pair, const PvmSearchConfig& cfg = {});

struct DiagonalTargetState {
  Matrix state;
  double min_eigenvalue = 0.0;
  bool psd = false;
  /// Trace-norm distance of the marginals of `state` from rho_A and rho_B.
  double marginal_residual = 0.0;
};

/// Operator with diagonal `target` in the product basis of `pvm` and the off-diagonal entries
/// of rho_A (x) rho_B. Positivity is reported, not assumed.
DiagonalTargetState diagonal_target_state(const DensityOperator& rho_AB, std::size_t d_A, std::size_t d_B,
                              const LocalPVM& pvm, const JointPmf& target);

}  // namespace steinlab

#endif  // STEINLAB_PVM_OPT_H
