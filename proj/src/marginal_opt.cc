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

#include "steinlab/marginal_opt.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace steinlab {

namespace {

void check_targets(const JointPmf& q, const MarginalConstraint& c) {
  if (c.target_px.size() != q.rows() || c.target_py.size() != q.cols()) {
    throw DimensionError("marginal targets do not match the pmf shape");
  }
  validate_pmf(c.target_px);
  validate_pmf(c.target_py);
}

struct FlowCoupling {
  RealMatrix flow;
  double total = 0.0;
};

// Maximum flow from the row targets to the column targets through the cells of supp(q).
FlowCoupling max_flow_coupling(const JointPmf& q, const MarginalConstraint& c) {
  const std::size_t nx = q.rows();
  const std::size_t ny = q.cols();
  const std::size_t n = nx + ny + 2;
  const std::size_t src = nx + ny;
  const std::size_t sink = src + 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cap(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < nx; ++x) {
    cap[src][x] = c.target_px[x];
    for (std::size_t y = 0; y < ny; ++y) {
      if (q(x, y) > 0.0) cap[x][nx + y] = inf;
    }
  }
  for (std::size_t y = 0; y < ny; ++y) {
    cap[nx + y][sink] = c.target_py[y];
  }
  FlowCoupling out;
  out.flow = RealMatrix::Zero(q.table().rows(), q.table().cols());
  while (true) {
    std::vector<std::size_t> parent(n, n);
    parent[src] = src;
    std::queue<std::size_t> bfs;
    bfs.push(src);
    while (!bfs.empty() && parent[sink] == n) {
      std::size_t u = bfs.front();
      bfs.pop();
      for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] == n && cap[u][v] > 1e-15) {
          parent[v] = u;
          bfs.push(v);
        }
      }
    }
    if (parent[sink] == n) break;
    double push = inf;
    for (std::size_t v = sink; v != src; v = parent[v]) push = std::min(push, cap[parent[v]][v]);
    for (std::size_t v = sink; v != src; v = parent[v]) {
      const std::size_t u = parent[v];
      cap[u][v] -= push;
      cap[v][u] += push;
      if (u < nx && v >= nx && v < src) {
        out.flow(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v - nx)) += push;
      } else if (v < nx && u >= nx && u < src) {
        out.flow(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u - nx)) -= push;
      }
    }
    out.total += push;
  }
  return out;
}

// Cells of supp(q) that carry mass in at least one coupling. A cell qualifies when a saturating
// flow uses it or when the column reaches the row in the residual graph.
std::vector<std::vector<bool>> usable_cells(const JointPmf& q, const FlowCoupling& fc) {
  const std::size_t nx = q.rows();
  const std::size_t ny = q.cols();
  const std::size_t n = nx + ny;
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) reach[v][v] = true;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      if (q(x, y) > 0.0) reach[x][nx + y] = true;
      if (fc.flow(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) > 1e-13) {
        reach[nx + y][x] = true;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  std::vector<std::vector<bool>> out(nx, std::vector<bool>(ny, false));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      out[x][y] = q(x, y) > 0.0 && reach[nx + y][x];
    }
  }
  return out;
}

double marginal_l1(const RealMatrix& p, const MarginalConstraint& c) {
  double r = 0.0;
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    r += std::abs(p.row(x).sum() - c.target_px[static_cast<std::size_t>(x)]);
  }
  for (Eigen::Index y = 0; y < p.cols(); ++y) {
    r += std::abs(p.col(y).sum() - c.target_py[static_cast<std::size_t>(y)]);
  }
  return r;
}

}  // namespace

IProjection iproject(const JointPmf& q, const MarginalConstraint& c, const IProjectOptions& opts) {
  check_targets(q, c);
  RealMatrix p = q.table();
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    if (c.target_px[static_cast<std::size_t>(x)] == 0.0) p.row(x).setZero();
  }
  for (Eigen::Index y = 0; y < p.cols(); ++y) {
    if (c.target_py[static_cast<std::size_t>(y)] == 0.0) p.col(y).setZero();
  }
  // Cells that every coupling leaves empty would otherwise be fitted at a sublinear rate.
  FlowCoupling fc = max_flow_coupling(q, c);
  if (fc.total >= 1.0 - 1e-12) {
    auto usable = usable_cells(q, fc);
    for (Eigen::Index x = 0; x < p.rows(); ++x) {
      for (Eigen::Index y = 0; y < p.cols(); ++y) {
        if (!usable[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]) p(x, y) = 0.0;
      }
    }
  }

  SolverDiagnostics diag;
  double window_start = std::numeric_limits<double>::infinity();
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    diag.iterations = sweep;
    for (Eigen::Index x = 0; x < p.rows(); ++x) {
      double target = c.target_px[static_cast<std::size_t>(x)];
      if (target == 0.0) continue;
      double s = p.row(x).sum();
      if (s <= 0.0) {
        diag.marginal_residual = marginal_l1(p, c);
        throw InfeasibleError("row " + std::to_string(x) + " has no admissible mass", diag);
      }
      p.row(x) *= target / s;
    }
    for (Eigen::Index y = 0; y < p.cols(); ++y) {
      double target = c.target_py[static_cast<std::size_t>(y)];
      if (target == 0.0) continue;
      double s = p.col(y).sum();
      if (s <= 0.0) {
        diag.marginal_residual = marginal_l1(p, c);
        throw InfeasibleError("column " + std::to_string(y) + " has no admissible mass", diag);
      }
      p.col(y) *= target / s;
    }
    diag.marginal_residual = marginal_l1(p, c);
    if (diag.marginal_residual <= opts.tol) {
      diag.converged = true;
      break;
    }
    if (sweep % opts.stall_window == 0) {
      if (window_start - diag.marginal_residual < opts.stall_decrease) {
        throw InfeasibleError("marginal fitting stalled above tolerance", diag);
      }
      window_start = diag.marginal_residual;
    }
  }
  if (!diag.converged) {
    throw InfeasibleError("marginal fitting did not converge", diag);
  }
  p /= p.sum();
  JointPmf out(std::move(p));
  diag.objective = kl(out, q).value();
  return IProjection{std::move(out), diag};
}

ExtendedReal brute_oracle_2x2(const JointPmf& q, const MarginalConstraint& c, int grid) {
  check_targets(q, c);
  if (q.rows() != 2 || q.cols() != 2) {
    throw DimensionError("brute_oracle_2x2 needs a 2x2 alphabet");
  }
  if (grid < 3) {
    throw ValidationError("grid must have at least 3 points");
  }
  const double px0 = c.target_px[0];
  const double py0 = c.target_py[0];
  const double lo = std::max(0.0, px0 + py0 - 1.0);
  const double hi = std::min(px0, py0);
  if (lo > hi + 1e-15) {
    throw InfeasibleError("empty coupling interval", SolverDiagnostics{});
  }
  auto qflat = q.flat();
  auto f = [&](double t) -> double {
    std::vector<double> p = {t, px0 - t, py0 - t, 1.0 - px0 - py0 + t};
    for (double& v : p) v = std::max(v, 0.0);
    return kl(p, qflat).value();
  };
  if (hi - lo <= 1e-15) {
    return f(lo);
  }
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  const double step = (hi - lo) / (grid - 1);
  for (int k = 0; k < grid; ++k) {
    double v = f(lo + k * step);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  if (std::isinf(best_val)) {
    return ExtendedReal::infinity();
  }
  double a = lo + std::max(best - 1, 0) * step;
  double b = lo + std::min(best + 1, grid - 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return std::min({best_val, f1, f2, f(0.5 * (a + b))});
}

bool coupling_exists(const JointPmf& q, const MarginalConstraint& c, double tol) {
  check_targets(q, c);
  return max_flow_coupling(q, c).total >= 1.0 - tol;
}

namespace {

double trace_norm(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver((h + h.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver((h + h.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

struct DualPoint {
  double value = 0.0;
  RealVector grad;
  double residual = 0.0;
  Matrix rho;
};

// The dual problem in coordinates restricted to supp(target_A) (x) supp(target_B).
class ReducedDual {
 public:
  ReducedDual(Matrix log_sigma, Matrix target_a, Matrix target_b)
      : log_sigma_(std::move(log_sigma)),
        target_a_(std::move(target_a)),
        target_b_(std::move(target_b)),
        ra_(target_a_.rows()),
        rb_(target_b_.rows()) {}

  Eigen::Index num_params() const { return ra_ * ra_ + rb_ * rb_; }
  Eigen::Index ra() const { return ra_; }
  Eigen::Index rb() const { return rb_; }
  const Matrix& target_a() const { return target_a_; }
  const Matrix& target_b() const { return target_b_; }

  DualPoint evaluate(const RealVector& x) const {
    Matrix la = hermitian_from_coordinates(x, 0, ra_);
    Matrix lb = hermitian_from_coordinates(x, ra_ * ra_, rb_);
    Matrix k = log_sigma_ + kron(la, Matrix::Identity(rb_, rb_)) +
               kron(Matrix::Identity(ra_, ra_), lb);
    DualPoint out;
    out.rho = hermitian_exp((k + k.adjoint()) * 0.5);
    Matrix ma = partial_trace(out.rho, static_cast<std::size_t>(ra_),
                              static_cast<std::size_t>(rb_), Subsystem::A);
    Matrix mb = partial_trace(out.rho, static_cast<std::size_t>(ra_),
                              static_cast<std::size_t>(rb_), Subsystem::B);
    out.value = (la * target_a_).trace().real() + (lb * target_b_).trace().real() -
                out.rho.trace().real() + 1.0;
    Matrix ga = target_a_ - ma;
    Matrix gb = target_b_ - mb;
    out.grad.resize(num_params());
    out.grad << hermitian_coordinates(ga), hermitian_coordinates(gb);
    out.residual = trace_norm(ga) + trace_norm(gb);
    return out;
  }

 private:
  Matrix log_sigma_;
  Matrix target_a_;
  Matrix target_b_;
  Eigen::Index ra_;
  Eigen::Index rb_;
};

// Moves an operator with trace near 1 onto the exact marginals, then mixes toward the
// product of the targets until it is positive semidefinite.
Matrix correct_onto_marginals(const Matrix& rho, const Matrix& ta, const Matrix& tb) {
  const auto ra = static_cast<std::size_t>(ta.rows());
  const auto rb = static_cast<std::size_t>(tb.rows());
  double t = rho.trace().real();
  Matrix da = ta - partial_trace(rho, ra, rb, Subsystem::A);
  Matrix db = tb - partial_trace(rho, ra, rb, Subsystem::B);
  Matrix prod = kron(ta, tb);
  Matrix fixed = rho + kron(da, tb) + kron(ta, db) - (1.0 - t) * prod;
  fixed = (fixed + fixed.adjoint()) * 0.5;
  if (min_eigenvalue(fixed) >= 0.0) {
    return fixed;
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (min_eigenvalue((1.0 - mid) * fixed + mid * prod) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return (1.0 - hi) * fixed + hi * prod;
}

}  // namespace

QProjection qproject(const DensityOperator& sigma, const QuantumMarginalConstraint& c,
                     std::size_t d_A, std::size_t d_B, const QProjectOptions& opts) {
  if (sigma.dim() != d_A * d_B || c.target_A.dim() != d_A || c.target_B.dim() != d_B) {
    throw DimensionError("qproject: dimensions of sigma and targets are inconsistent");
  }
  Matrix sa = partial_trace(sigma.matrix(), d_A, d_B, Subsystem::A);
  Matrix sb = partial_trace(sigma.matrix(), d_A, d_B, Subsystem::B);
  double res0 = trace_norm(sa - c.target_A.matrix()) + trace_norm(sb - c.target_B.matrix());
  if (res0 <= opts.tol) {
    SolverDiagnostics diag;
    diag.marginal_residual = res0;
    diag.converged = true;
    diag.dual_bound = 0.0;
    diag.gap = 0.0;
    QProjection out{sigma, diag, {}};
    if (opts.record_history) out.dual_history.push_back(0.0);
    return out;
  }

  DensityOperator prod = tensor_product(c.target_A, c.target_B);
  if (!support_contained(prod, sigma.matrix(), sigma.eig_cutoff())) {
    throw PreconditionError(
        "qproject: product of target marginals is not supported inside supp(sigma)");
  }
  Matrix va = c.target_A.support_basis();
  Matrix vb = c.target_B.support_basis();
  Matrix v = kron(va, vb);
  Matrix log_sigma = v.adjoint() * hermitian_log_on_support(sigma.matrix(), sigma.eig_cutoff()) * v;
  Matrix ta = va.adjoint() * c.target_A.matrix() * va;
  Matrix tb = vb.adjoint() * c.target_B.matrix() * vb;
  ReducedDual dual((log_sigma + log_sigma.adjoint()) * 0.5, (ta + ta.adjoint()) * 0.5,
                   (tb + tb.adjoint()) * 0.5);

  const Eigen::Index np = dual.num_params();
  RealVector x = RealVector::Zero(np);
  DualPoint cur = dual.evaluate(x);
  RealMatrix hinv = RealMatrix::Identity(np, np);
  SolverDiagnostics diag;
  std::vector<double> history;
  if (opts.record_history) history.push_back(cur.value);

  int it = 0;
  for (; it < opts.max_iterations && cur.residual > opts.tol; ++it) {
    // Ascent on the dual value is descent on f = -value with gradient -grad.
    RealVector gf = -cur.grad;
    RealVector dir = -hinv * gf;
    double slope = gf.dot(dir);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      dir = -gf;
      slope = gf.dot(dir);
    }
    double step = 1.0;
    bool accepted = false;
    DualPoint next;
    RealVector x_next;
    for (int halving = 0; halving < 60; ++halving) {
      x_next = x + step * dir;
      next = dual.evaluate(x_next);
      if (std::isfinite(next.value) && -next.value <= -cur.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // At the resolution limit of the dual value, accept a unit step that still shrinks the
      // marginal residual.
      x_next = x + dir;
      next = dual.evaluate(x_next);
      if (!(next.residual < cur.residual && next.value >= cur.value - 1e-14)) {
        break;
      }
    }
    RealVector s = x_next - x;
    RealVector y = (-next.grad) - gf;
    double sy = s.dot(y);
    if (sy > 1e-18) {
      double rho_k = 1.0 / sy;
      RealMatrix id = RealMatrix::Identity(np, np);
      hinv = (id - rho_k * s * y.transpose()) * hinv * (id - rho_k * y * s.transpose()) +
             rho_k * s * s.transpose();
    }
    x = x_next;
    cur = std::move(next);
    if (opts.record_history) history.push_back(cur.value);
  }

  Matrix corrected = correct_onto_marginals(cur.rho, dual.target_a(), dual.target_b());
  Matrix full = v * corrected * v.adjoint();
  DensityOperator state((full + full.adjoint()) * 0.5, sigma.eig_cutoff());
  diag.iterations = it;
  diag.marginal_residual = cur.residual;
  diag.converged = cur.residual <= opts.tol;
  diag.objective = umegaki(state, sigma.matrix(), sigma.eig_cutoff()).value();
  diag.dual_bound = cur.value;
  diag.gap = diag.objective - cur.value;
  return QProjection{std::move(state), diag, std::move(history)};
}

}  // namespace steinlab
