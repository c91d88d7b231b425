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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "steinlab/marginal_opt.h"
#include "steinlab/sampling.h"

namespace steinlab {

int thread_budget() {
  if (const char* env = std::getenv("STEINLAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

constexpr double kSnap = 1e-13;

std::vector<double> snap_normalize(const Vector& diag) {
  std::vector<double> out(static_cast<std::size_t>(diag.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    double v = diag(i).real();
    if (v < -1e-12) {
      throw ValidationError("induced probability is negative beyond roundoff");
    }
    if (v < kSnap) v = 0.0;
    out[static_cast<std::size_t>(i)] = v;
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> side_pmf(const Matrix& state, const Matrix& u) {
  return snap_normalize((u.adjoint() * state * u).diagonal());
}

JointPmf pmf_in_basis(const Matrix& state, const Matrix& ua, const Matrix& ub) {
  Matrix w = kron(ua, ub);
  std::vector<double> flat = snap_normalize((w.adjoint() * state * w).diagonal());
  RealMatrix t(ua.cols(), ub.cols());
  for (Eigen::Index x = 0; x < t.rows(); ++x) {
    for (Eigen::Index y = 0; y < t.cols(); ++y) {
      t(x, y) = flat[static_cast<std::size_t>(x * t.cols() + y)];
    }
  }
  return JointPmf(std::move(t));
}

// Fixed data of one search: the m-copy states and the local dimensions.
struct SearchProblem {
  Matrix alt_block;
  Matrix null_a_block;
  Matrix null_b_block;
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;
  int m = 1;
  double inner_tol = 1e-10;
};

struct Evaluation {
  ExtendedReal value;
  bool failed = false;
};

Evaluation evaluate_bases(const SearchProblem& prob, const Matrix& ua, const Matrix& ub) {
  JointPmf q = pmf_in_basis(prob.alt_block, ua, ub);
  MarginalConstraint c{side_pmf(prob.null_a_block, ua), side_pmf(prob.null_b_block, ub)};
  if (!coupling_exists(q, c)) {
    return {ExtendedReal::infinity(), false};
  }
  try {
    IProjectOptions opts;
    opts.tol = prob.inner_tol;
    IProjection proj = iproject(q, c, opts);
    return {proj.diagnostics.objective / prob.m, false};
  } catch (const InfeasibleError&) {
    return {0.0, true};
  }
}

struct RestartContext {
  const SearchProblem* prob = nullptr;
  Matrix base_a;
  Matrix base_b;
  int evaluations = 0;
  int failures = 0;
  ExtendedReal best_value = -1.0;
  Matrix best_a;
  Matrix best_b;

  std::pair<Matrix, Matrix> bases(const RealVector& x) const {
    Matrix ha = hermitian_from_coordinates(x, 0, prob->dim_a);
    Matrix hb = hermitian_from_coordinates(x, prob->dim_a * prob->dim_a, prob->dim_b);
    return {base_a * unitary_exp(ha), base_b * unitary_exp(hb)};
  }
};

double restart_objective(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<RestartContext*>(params);
  RealVector x(static_cast<Eigen::Index>(v->size));
  for (std::size_t i = 0; i < v->size; ++i) x(static_cast<Eigen::Index>(i)) = gsl_vector_get(v, i);
  auto [ua, ub] = ctx->bases(x);
  Evaluation e = evaluate_bases(*ctx->prob, ua, ub);
  ++ctx->evaluations;
  if (e.failed) {
    ++ctx->failures;
    return 1e6;
  }
  if (e.value > ctx->best_value) {
    ctx->best_value = e.value;
    ctx->best_a = ua;
    ctx->best_b = ub;
  }
  return e.value.is_infinite() ? -1e6 : -e.value.value();
}

struct RestartResult {
  ExtendedReal value = -1.0;
  Matrix ua;
  Matrix ub;
  int evaluations = 0;
  int failures = 0;
};

RestartResult run_restart(const SearchProblem& prob, Matrix base_a, Matrix base_b,
                          const PvmSearchConfig& cfg) {
  RestartContext ctx;
  ctx.prob = &prob;
  ctx.base_a = std::move(base_a);
  ctx.base_b = std::move(base_b);
  const std::size_t n = static_cast<std::size_t>(prob.dim_a * prob.dim_a + prob.dim_b * prob.dim_b);

  gsl_multimin_function fn{&restart_objective, n, &ctx};
  gsl_vector* x0 = gsl_vector_calloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  gsl_vector_set_all(step, 0.3);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x0, step);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (ctx.best_value.is_infinite()) break;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), cfg.tol) == GSL_SUCCESS) break;
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x0);
  return RestartResult{ctx.best_value, ctx.best_a, ctx.best_b, ctx.evaluations, ctx.failures};
}

MaxminResult search(const BipartitePair& pair, const PvmSearchConfig& cfg,
                    const std::optional<std::pair<Matrix, Matrix>>& warm) {
  static std::once_flag gsl_once;
  std::call_once(gsl_once, [] { gsl_set_error_handler_off(); });

  const int m = cfg.block_size;
  SearchProblem prob;
  prob.m = m;
  prob.inner_tol = cfg.inner_tol;
  prob.alt_block = block_power(pair.alt_state().matrix(), pair.d_A(), pair.d_B(), m);
  prob.null_a_block = tensor_power(pair.null_marginal(Subsystem::A).matrix(), m);
  prob.null_b_block = tensor_power(pair.null_marginal(Subsystem::B).matrix(), m);
  prob.dim_a = prob.null_a_block.rows();
  prob.dim_b = prob.null_b_block.rows();

  const int restarts = std::max(cfg.restarts, 1);
  std::vector<std::pair<Matrix, Matrix>> starts;
  starts.reserve(static_cast<std::size_t>(restarts));
  for (int r = 0; r < restarts; ++r) {
    if (r == 0) {
      starts.emplace_back(Matrix::Identity(prob.dim_a, prob.dim_a),
                          Matrix::Identity(prob.dim_b, prob.dim_b));
    } else if (r == 1 && warm) {
      starts.push_back(*warm);
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      Matrix ua = haar_unitary(prob.dim_a, rng);
      Matrix ub = haar_unitary(prob.dim_b, rng);
      starts.emplace_back(std::move(ua), std::move(ub));
    }
  }

  std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
  int threads = cfg.threads > 0 ? cfg.threads : thread_budget();
  threads = std::clamp(threads, 1, restarts);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < restarts; r = next++) {
      results[static_cast<std::size_t>(r)] =
          run_restart(prob, starts[static_cast<std::size_t>(r)].first,
                      starts[static_cast<std::size_t>(r)].second, cfg);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  int best = 0;
  int evaluations = 0;
  int failures = 0;
  for (int r = 0; r < restarts; ++r) {
    const auto& res = results[static_cast<std::size_t>(r)];
    evaluations += res.evaluations;
    failures += res.failures;
    if (res.value > results[static_cast<std::size_t>(best)].value) best = r;
  }
  const RestartResult& win = results[static_cast<std::size_t>(best)];
  if (win.value < 0.0) {
    throw Error("maxmin_finite_n: every evaluation failed");
  }
  MaxminResult out{ExponentReport{},
                   LocalPVM(PVMBasis(win.ua), PVMBasis(win.ub), pair.d_A(), pair.d_B(), m),
                   evaluations, failures, best};
  out.report.name = "maxmin_finite_n";
  out.report.value = win.value;
  out.report.method = "Nelder-Mead over local bases, " + std::to_string(restarts) + " restarts, m=" +
                      std::to_string(m);
  out.report.bound_kind = BoundKind::Lower;
  return out;
}

}  // namespace

JointPmf induced_pmf(const Matrix& state, const LocalPVM& pvm) {
  const Matrix& ua = pvm.basis_A().unitary();
  const Matrix& ub = pvm.basis_B().unitary();
  if (state.rows() != ua.rows() * ub.rows() || state.rows() != state.cols()) {
    throw DimensionError("induced_pmf: state dimension does not match the local bases");
  }
  return pmf_in_basis(state, ua, ub);
}

MaxminResult maxmin_finite_n(const BipartitePair& pair, const PvmSearchConfig& cfg) {
  if (cfg.block_size < 1) {
    throw ValidationError("block size must be at least 1");
  }
  double bits = cfg.block_size * std::log2(static_cast<double>(pair.d_A() * pair.d_B()));
  if (bits > 16.0 + 1e-12) {
    throw SizeError("maxmin_finite_n: m*log2(d_A*d_B) exceeds 16");
  }
  std::optional<std::pair<Matrix, Matrix>> warm;
  if (cfg.block_size > 1) {
    PvmSearchConfig single = cfg;
    single.block_size = 1;
    MaxminResult one = search(pair, single, std::nullopt);
    if (one.report.value.is_infinite()) {
      return one;
    }
    warm = std::make_pair(tensor_power(one.best.basis_A().unitary(), cfg.block_size),
                          tensor_power(one.best.basis_B().unitary(), cfg.block_size));
  }
  return search(pair, cfg, warm);
}

DiagonalTargetState diagonal_target_state(const DensityOperator& rho_AB, std::size_t d_A, std::size_t d_B,
                              const LocalPVM& pvm, const JointPmf& target) {
  const Matrix& ua = pvm.basis_A().unitary();
  const Matrix& ub = pvm.basis_B().unitary();
  if (rho_AB.dim() != d_A * d_B || static_cast<std::size_t>(ua.rows()) != d_A ||
      static_cast<std::size_t>(ub.rows()) != d_B || target.rows() != d_A || target.cols() != d_B) {
    throw DimensionError("diagonal_target_state: inconsistent dimensions");
  }
  Matrix rho_a = partial_trace(rho_AB.matrix(), d_A, d_B, Subsystem::A);
  Matrix rho_b = partial_trace(rho_AB.matrix(), d_A, d_B, Subsystem::B);
  auto px = side_pmf(rho_a, ua);
  auto py = side_pmf(rho_b, ub);
  auto tx = target.marginal_x();
  auto ty = target.marginal_y();
  for (std::size_t i = 0; i < d_A; ++i) {
    if (std::abs(px[i] - tx[i]) > 1e-10) {
      throw PreconditionError("diagonal_target_state: target X-marginal differs from the measured rho_A");
    }
  }
  for (std::size_t i = 0; i < d_B; ++i) {
    if (std::abs(py[i] - ty[i]) > 1e-10) {
      throw PreconditionError("diagonal_target_state: target Y-marginal differs from the measured rho_B");
    }
  }
  Matrix w = kron(ua, ub);
  Matrix in_basis = w.adjoint() * kron(rho_a, rho_b) * w;
  for (std::size_t x = 0; x < d_A; ++x) {
    for (std::size_t y = 0; y < d_B; ++y) {
      auto k = static_cast<Eigen::Index>(x * d_B + y);
      in_basis(k, k) = target(x, y);
    }
  }
  DiagonalTargetState out;
  out.state = w * in_basis * w.adjoint();
  out.state = (out.state + out.state.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(out.state, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  out.psd = out.min_eigenvalue >= -kPsdTol;
  auto tn = [](const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> s((h + h.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    return s.eigenvalues().cwiseAbs().sum();
  };
  out.marginal_residual = tn(partial_trace(out.state, d_A, d_B, Subsystem::A) - rho_a) +
                          tn(partial_trace(out.state, d_A, d_B, Subsystem::B) - rho_b);
  return out;
}

}  // namespace steinlab
