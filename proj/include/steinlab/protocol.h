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

#ifndef STEINLAB_PROTOCOL_H
#define STEINLAB_PROTOCOL_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "steinlab/common.h"
#include "steinlab/entropy.h"
#include "steinlab/qstate.h"

namespace steinlab {

/// How each party decides its bit from the type of its local outcome string.
///
/// robust: |N_a / n - p_a| <= delta p_a for every symbol, and N_a = 0 when p_a = 0.
/// interval: binary alphabets only; 0.5 n (1 - delta) <= N_1 <= 0.5 n (1 + delta).
/// joint_support: accept iff every observed pair lies in the support of the null pmf.
/// With one block this is the tester that compares the two reported outcomes directly.
enum class TypicalityMode { Robust, Interval, JointSupport };

std::string to_string(TypicalityMode mode);
TypicalityMode typicality_mode_from_string(const std::string& name);

struct TypicalityRule {
  double delta = 0.1;
  TypicalityMode mode = TypicalityMode::Robust;
};

struct ErrorPoint {
  int n = 0;
  /// Number of original copies behind the n samples (n for classical input).
  int copies = 0;
  double alpha = 0.0;
  double beta = 0.0;
  /// ln(beta); -inf when beta = 0.
  double log_beta = 0.0;
  /// -ln(beta) / copies.
  ExtendedReal minus_log_beta_over_n;
};

enum class CurveMethod { ExactTypes, MonteCarlo };

struct ErrorCurve {
  std::vector<ErrorPoint> points;
  CurveMethod method = CurveMethod::ExactTypes;
};

/// Upper limit on the number of joint types visited per n.
inline constexpr std::uint64_t kMaxJointTypes = 20'000'000;

/// Exact type I and type II errors of the one-bit scheme for each n in `n_list`.
/// Throws SizeError for alphabets beyond 4 x 4, n > 80, or too many joint types.
ErrorCurve one_bit_exact(const JointPmf& p, const JointPmf& q, const TypicalityRule& rule,
                         std::span<const int> n_list);

struct MonteCarloResult {
  int n = 0;
  long long trials = 0;
  long long rejections = 0;
  double alpha_hat = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  std::string beta_note;
};

/// 95% Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(long long successes, long long trials);

/// Estimates the type I error by sampling p^{(x)n}. The type II error is left to one_bit_exact.
MonteCarloResult one_bit_monte_carlo(const JointPmf& p, const JointPmf& q,
                                     const TypicalityRule& rule, int n, long long trials,
                                     std::uint64_t seed);

/// Runs the one-bit scheme on the outcomes of `pvm` applied blockwise. Each point reports
/// k blocks of m copies and normalizes the exponent by m k.
ErrorCurve quantum_frontend(const BipartitePair& pair, const LocalPVM& pvm,
                            const TypicalityRule& rule, std::span<const int> k_list);

}  // namespace steinlab

#endif  // STEINLAB_PROTOCOL_H
