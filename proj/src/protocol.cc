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
#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <tuple>

#include "steinlab/pvm_opt.h"

namespace steinlab {

namespace {

constexpr double kCountSlack = 1e-9;
constexpr double kWilsonZ = 1.959963984540054;

void check_rule(const TypicalityRule& rule) {
  if (!(rule.delta > 0.0 && rule.delta < 1.0)) {
    throw ValidationError("typicality delta must lie in (0, 1)");
  }
}

struct CountRange {
  int lo = 0;
  int hi = 0;
};

std::vector<CountRange> accepted_counts(std::span<const double> marginal, int n,
                                        const TypicalityRule& rule) {
  std::vector<CountRange> out(marginal.size(), CountRange{0, n});
  if (rule.mode == TypicalityMode::Interval) {
    if (marginal.size() != 2) {
      throw ValidationError("interval typicality needs binary alphabets");
    }
    out[1].lo = static_cast<int>(std::ceil(0.5 * n * (1.0 - rule.delta) - kCountSlack));
    out[1].hi = static_cast<int>(std::floor(0.5 * n * (1.0 + rule.delta) + kCountSlack));
    return out;
  }
  for (std::size_t a = 0; a < marginal.size(); ++a) {
    if (marginal[a] <= 0.0) {
      out[a] = {0, 0};
      continue;
    }
    double mean = n * marginal[a];
    out[a].lo = std::max(0, static_cast<int>(std::ceil(mean * (1.0 - rule.delta) - kCountSlack)));
    out[a].hi = std::min(n, static_cast<int>(std::floor(mean * (1.0 + rule.delta) + kCountSlack)));
  }
  return out;
}

bool in_ranges(std::span<const int> counts, const std::vector<CountRange>& ranges) {
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] < ranges[a].lo || counts[a] > ranges[a].hi) return false;
  }
  return true;
}

// Streaming log-sum-exp.
class LogAccumulator {
 public:
  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x > max_) {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    } else {
      sum_ += std::exp(x - max_);
    }
  }
  double value() const {
    return sum_ == 0.0 ? -std::numeric_limits<double>::infinity() : max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

double safe_log(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

ErrorPoint make_point(int n, int copies, double log_accept_p, double log_beta) {
  ErrorPoint pt;
  pt.n = n;
  pt.copies = copies;
  pt.alpha = std::clamp(-std::expm1(std::min(log_accept_p, 0.0)), 0.0, 1.0) + 0.0;
  pt.log_beta = std::min(log_beta, 0.0);
  pt.beta = std::exp(pt.log_beta);
  pt.minus_log_beta_over_n = std::isinf(pt.log_beta) ? ExtendedReal::infinity()
                                                     : ExtendedReal(-pt.log_beta / copies);
  return pt;
}

ErrorPoint joint_support_point(const JointPmf& p, const JointPmf& q, int n) {
  double mass = 0.0;
  for (std::size_t x = 0; x < p.rows(); ++x) {
    for (std::size_t y = 0; y < p.cols(); ++y) {
      if (p(x, y) > 0.0) mass += q(x, y);
    }
  }
  // Samples of p never leave its support, so the null is always accepted.
  return make_point(n, n, 0.0, n * safe_log(std::min(mass, 1.0)));
}

ErrorPoint enumerate_types(const JointPmf& p, const JointPmf& q, const TypicalityRule& rule,
                           int n) {
  const std::size_t nx = p.rows();
  const std::size_t ny = p.cols();
  const auto range_x = accepted_counts(p.marginal_x(), n, rule);
  const auto range_y = accepted_counts(p.marginal_y(), n, rule);
  std::vector<double> log_p(nx * ny);
  std::vector<double> log_q(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      log_p[x * ny + y] = safe_log(p(x, y));
      log_q[x * ny + y] = safe_log(q(x, y));
    }
  }
  std::vector<double> log_fact(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) log_fact[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);

  LogAccumulator accept_p;
  LogAccumulator accept_q;
  std::uint64_t visited = 0;
  std::vector<int> row_sum(nx, 0);
  std::vector<int> col_sum(ny, 0);
  std::vector<int> cell(nx * ny, 0);

  // Fill cells row-major; row sums are fixed before each row starts.
  std::function<void(std::size_t, int, double, double)> fill =
      [&](std::size_t idx, int left_in_row, double lp, double lq) {
        const std::size_t x = idx / ny;
        const std::size_t y = idx % ny;
        if (y + 1 == ny) {
          const int c = left_in_row;
          if (col_sum[y] + c > range_y[y].hi) return;
          col_sum[y] += c;
          cell[idx] = c;
          double cp = c > 0 ? c * log_p[idx] : 0.0;
          double cq = c > 0 ? c * log_q[idx] : 0.0;
          double lf = log_fact[static_cast<std::size_t>(c)];
          if (x + 1 == nx) {
            if (++visited > kMaxJointTypes) {
              throw SizeError("one_bit_exact: joint type enumeration exceeds the limit");
            }
            if (in_ranges(col_sum, range_y)) {
              const double base = log_fact[static_cast<std::size_t>(n)];
              accept_p.add(base + lp + cp - lf);
              accept_q.add(base + lq + cq - lf);
            }
          } else {
            fill(idx + 1, row_sum[x + 1], lp + cp - lf, lq + cq - lf);
          }
          col_sum[y] -= c;
          return;
        }
        const int cap = std::min(left_in_row, range_y[y].hi - col_sum[y]);
        for (int c = 0; c <= cap; ++c) {
          col_sum[y] += c;
          cell[idx] = c;
          double cp = c > 0 ? c * log_p[idx] : 0.0;
          double cq = c > 0 ? c * log_q[idx] : 0.0;
          double lf = log_fact[static_cast<std::size_t>(c)];
          fill(idx + 1, left_in_row - c, lp + cp - lf, lq + cq - lf);
          col_sum[y] -= c;
        }
      };

  // Enumerate accepted X-types, then the joint types with those row sums.
  std::function<void(std::size_t, int)> rows = [&](std::size_t x, int left) {
    if (x + 1 == nx) {
      if (left < range_x[x].lo || left > range_x[x].hi) return;
      row_sum[x] = left;
      fill(0, row_sum[0], 0.0, 0.0);
      return;
    }
    for (int c = range_x[x].lo; c <= std::min(left, range_x[x].hi); ++c) {
      row_sum[x] = c;
      rows(x + 1, left - c);
    }
  };
  rows(0, n);
  return make_point(n, n, accept_p.value(), accept_q.value());
}

void check_pair(const JointPmf& p, const JointPmf& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw DimensionError("one_bit_exact: p and q have different alphabets");
  }
  if (p.rows() > 4 || p.cols() > 4) {
    throw SizeError("one_bit_exact: alphabets are limited to 4 x 4");
  }
}

}  // namespace

std::string to_string(TypicalityMode mode) {
  switch (mode) {
    case TypicalityMode::Robust:
      return "robust";
    case TypicalityMode::Interval:
      return "interval";
    case TypicalityMode::JointSupport:
      return "joint_support";
  }
  return "robust";
}

TypicalityMode typicality_mode_from_string(const std::string& name) {
  if (name == "robust") return TypicalityMode::Robust;
  if (name == "interval") return TypicalityMode::Interval;
  if (name == "joint_support") return TypicalityMode::JointSupport;
  throw ValidationError("unknown typicality mode: " + name);
}

ErrorCurve one_bit_exact(const JointPmf& p, const JointPmf& q, const TypicalityRule& rule,
                         std::span<const int> n_list) {
  check_rule(rule);
  check_pair(p, q);
  ErrorCurve curve;
  curve.method = CurveMethod::ExactTypes;
  for (int n : n_list) {
    if (n < 1 || n > 80) throw SizeError("one_bit_exact: n must lie in [1, 80]");
    curve.points.push_back(rule.mode == TypicalityMode::JointSupport
                               ? joint_support_point(p, q, n)
                               : enumerate_types(p, q, rule, n));
  }
  return curve;
}

std::pair<double, double> wilson_interval(long long successes, long long trials) {
  if (trials < 1) throw ValidationError("wilson_interval needs at least one trial");
  const double t = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / t;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / t;
  const double center = (phat + z2 / (2.0 * t)) / denom;
  const double half = kWilsonZ * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MonteCarloResult one_bit_monte_carlo(const JointPmf& p, const JointPmf& q,
                                     const TypicalityRule& rule, int n, long long trials,
                                     std::uint64_t seed) {
  check_rule(rule);
  check_pair(p, q);
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (n < 1) throw ValidationError("n must be positive");
  const std::size_t ny = p.cols();
  std::vector<double> cdf = p.flat();
  for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
  const auto range_x = accepted_counts(p.marginal_x(), n, rule);
  const auto range_y = accepted_counts(p.marginal_y(), n, rule);

  std::mt19937_64 rng(seed);
  std::vector<int> cx(p.rows());
  std::vector<int> cy(ny);
  long long rejections = 0;
  for (long long t = 0; t < trials; ++t) {
    std::fill(cx.begin(), cx.end(), 0);
    std::fill(cy.begin(), cy.end(), 0);
    for (int i = 0; i < n; ++i) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cdf.back();
      std::size_t k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      k = std::min(k, cdf.size() - 1);
      ++cx[k / ny];
      ++cy[k % ny];
    }
    // Draws land on cells of positive mass, so joint_support never rejects.
    bool accept = rule.mode == TypicalityMode::JointSupport ||
                  (in_ranges(cx, range_x) && in_ranges(cy, range_y));
    if (!accept) ++rejections;
  }
  MonteCarloResult out;
  out.n = n;
  out.trials = trials;
  out.rejections = rejections;
  out.alpha_hat = static_cast<double>(rejections) / static_cast<double>(trials);
  std::tie(out.wilson_low, out.wilson_high) = wilson_interval(rejections, trials);
  out.beta_note = "type II error is exponentially small; use the exact type enumeration";
  return out;
}

ErrorCurve quantum_frontend(const BipartitePair& pair, const LocalPVM& pvm,
                            const TypicalityRule& rule, std::span<const int> k_list) {
  if (pvm.d_A() != pair.d_A() || pvm.d_B() != pair.d_B()) {
    throw DimensionError("quantum_frontend: measurement does not match the state dimensions");
  }
  const int m = pvm.block_size();
  Matrix null_block = block_power(pair.null_state().matrix(), pair.d_A(), pair.d_B(), m);
  Matrix alt_block = block_power(pair.alt_state().matrix(), pair.d_A(), pair.d_B(), m);
  JointPmf p = induced_pmf(null_block, pvm);
  JointPmf q = induced_pmf(alt_block, pvm);
  ErrorCurve curve = one_bit_exact(p, q, rule, k_list);
  for (ErrorPoint& pt : curve.points) {
    pt.copies = pt.n * m;
    pt.minus_log_beta_over_n = std::isinf(pt.log_beta) ? ExtendedReal::infinity()
                                                       : ExtendedReal(-pt.log_beta / pt.copies);
  }
  return curve;
}

}  // namespace steinlab
