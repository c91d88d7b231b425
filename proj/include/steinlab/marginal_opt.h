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

#ifndef STEINLAB_MARGINAL_OPT_H
#define STEINLAB_MARGINAL_OPT_H

#include <optional>
#include <vector>

#include "steinlab/common.h"
#include "steinlab/entropy.h"
#include "steinlab/qstate.h"

namespace steinlab {

struct SolverDiagnostics {
  int iterations = 0;
  /// L1 (classical) or trace-norm (quantum) distance of the marginals from their targets.
  double marginal_residual = 0.0;
  /// Primal objective in nats. For the quantum solver this is a certified upper bound.
  double objective = 0.0;
  bool converged = false;
  /// Dual value (a certified lower bound) when the solver provides one.
  std::optional<double> dual_bound;
  std::optional<double> gap;
};

/// Raised when no coupling with finite divergence satisfies the marginal constraints, or the
/// solver stalls above tolerance.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& msg, SolverDiagnostics diagnostics)
      : Error(msg), diagnostics_(diagnostics) {}
  const SolverDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  SolverDiagnostics diagnostics_;
};

/// Target marginals for the classical projection.
struct MarginalConstraint {
  std::vector<double> target_px;
  std::vector<double> target_py;
};

struct IProjection {
  JointPmf pmf;
  SolverDiagnostics diagnostics;
};

struct IProjectOptions {
  double tol = 1e-10;
  int max_sweeps = 100000;
  int stall_window = 1000;
  double stall_decrease = 1e-14;
};

/// Minimizes KL(p || q) over joint pmfs p with the given marginals by iterative proportional
/// fitting.
IProjection iproject(const JointPmf& q, const MarginalConstraint& c, const IProjectOptions& opts = {});

/// Reference minimizer for 2x2 alphabets: scans p(0,0) over its feasible interval on a dense
/// grid and refines by golden-section search.
ExtendedReal brute_oracle_2x2(const JointPmf& q, const MarginalConstraint& c, int grid = 2001);

/// True when some coupling of the targets is supported inside supp(q) (max-flow test).
bool coupling_exists(const JointPmf& q, const MarginalConstraint& c, double tol = 1e-12);

struct QuantumMarginalConstraint {
  DensityOperator target_A;
  DensityOperator target_B;
};

struct QProjectOptions {
  /// Trace-norm tolerance on the marginal residual of the dual iterate.
  double tol = 1e-10;
  int max_iterations = 2000;
  bool record_history = false;
};

struct QProjection {
  DensityOperator state;
  SolverDiagnostics diagnostics;
  /// Dual values of accepted iterates (nondecreasing), when requested.
  std::vector<double> dual_history;
};

/// Minimizes D(rho || sigma) over states on C^{d_A} (x) C^{d_B} with the given marginals.
///
/// Works on the dual: the iterate is exp(log sigma + L_A (x) I + I (x) L_B) restricted to
/// supp(target_A) (x) supp(target_B), and the dual is maximized by quasi-Newton ascent with
/// backtracking. The returned state is the final iterate corrected onto the feasible set;
/// its divergence is the reported objective.
QProjection qproject(const DensityOperator& sigma, const QuantumMarginalConstraint& c,
                     std::size_t d_A, std::size_t d_B, const QProjectOptions& opts = {});

}  // namespace steinlab

#endif  // STEINLAB_MARGINAL_OPT_H
