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

#include "steinlab/blowup.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

namespace steinlab {

namespace {

std::uint64_t checked_universe(int n, std::size_t d) {
  if (n < 1 || d < 1) {
    throw ValidationError("string length and alphabet size must be positive");
  }
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    size *= d;
    if (size > kMaxStrings) {
      throw SizeError("d^n exceeds the 2^24 string limit");
    }
  }
  return size;
}

void check_params(const BlowupParams& p) {
  if (p.n < 1) throw ValidationError("n must be positive");
  if (!(p.epsilon_n > 0.0 && p.epsilon_n <= 1.0)) {
    throw ValidationError("epsilon_n must lie in (0, 1]");
  }
  if (!(p.r_n >= 0.0)) throw ValidationError("r_n must be nonnegative");
}

// Products w[x_1] ... w[x_n] for every string, in IndexSet order.
std::vector<double> string_products(std::span<const double> w, int n) {
  std::vector<double> cur = {1.0};
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(cur.size() * w.size());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t a = 0; a < w.size(); ++a) next[i * w.size() + a] = cur[i] * w[a];
    }
    cur = std::move(next);
  }
  return cur;
}

// (S^{(x)n}) v for a real d_out x d_in matrix S and v indexed by strings over [0, d_in).
std::vector<double> apply_power(const RealMatrix& s, std::vector<double> v, int n) {
  const auto d_out = static_cast<std::size_t>(s.rows());
  const auto d_in = static_cast<std::size_t>(s.cols());
  std::size_t pre = 1;
  std::size_t post = v.size() / d_in;
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(pre * d_out * post, 0.0);
    for (std::size_t i = 0; i < pre; ++i) {
      for (std::size_t a = 0; a < d_out; ++a) {
        for (std::size_t b = 0; b < d_in; ++b) {
          double c = s(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
          if (c == 0.0) continue;
          const double* src = &v[(i * d_in + b) * post];
          double* dst = &next[(i * d_out + a) * post];
          for (std::size_t j = 0; j < post; ++j) dst[j] += c * src[j];
        }
      }
    }
    v = std::move(next);
    pre *= d_out;
    if (k + 1 < n) post /= d_in;
  }
  return v;
}

// (u^{(x)n}) m for a d x d matrix u and an operator m on (C^d)^{(x)n}.
Matrix left_apply_power(const Matrix& u, const Matrix& m, int n) {
  const Eigen::Index d = u.rows();
  Matrix cur = m;
  Eigen::Index post = m.rows();
  for (int k = 0; k < n; ++k) {
    post /= d;
    const Eigen::Index pre = m.rows() / (post * d);
    Matrix next = Matrix::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < pre; ++i) {
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          Complex c = u(a, b);
          if (c == Complex(0.0)) continue;
          next.middleRows((i * d + a) * post, post) += c * cur.middleRows((i * d + b) * post, post);
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

double sum_over(const IndexSet& s, const std::vector<double>& weights) {
  double acc = 0.0;
  for (std::uint64_t i = 0; i < s.universe_size(); ++i) {
    if (s.contains(i)) acc += weights[i];
  }
  return acc;
}

std::vector<double> indicator(const IndexSet& s, bool complement = false) {
  std::vector<double> out(s.universe_size());
  for (std::uint64_t i = 0; i < s.universe_size(); ++i) {
    out[i] = (s.contains(i) != complement) ? 1.0 : 0.0;
  }
  return out;
}

ExtendedReal bound_rhs(ExtendedReal log_factor, double trace_m_sigma) {
  if (log_factor.is_infinite()) return ExtendedReal::infinity();
  if (trace_m_sigma <= 0.0) return 0.0;
  double log_rhs = log_factor.value() + std::log(trace_m_sigma);
  if (log_rhs > 700.0) return ExtendedReal::infinity();
  return std::exp(log_rhs);
}

ExtendedReal slack_of(ExtendedReal rhs, double lhs) {
  if (rhs.is_infinite()) return ExtendedReal::infinity();
  return rhs.value() - lhs;
}

}  // namespace

IndexSet::IndexSet(int n, std::size_t d) : n_(n), d_(d), mask_(checked_universe(n, d), false) {}

void IndexSet::insert(std::uint64_t index) {
  if (!mask_[index]) {
    mask_[index] = true;
    ++count_;
  }
}

std::vector<std::uint64_t> IndexSet::members() const {
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  for (std::uint64_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) out.push_back(i);
  }
  return out;
}

std::vector<int> IndexSet::decode(std::uint64_t index) const {
  std::vector<int> out(static_cast<std::size_t>(n_));
  for (int k = n_ - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = static_cast<int>(index % d_);
    index /= d_;
  }
  return out;
}

std::uint64_t IndexSet::encode(std::span<const int> symbols) const {
  if (symbols.size() != static_cast<std::size_t>(n_)) {
    throw DimensionError("string length does not match the index set");
  }
  std::uint64_t out = 0;
  for (int s : symbols) {
    if (s < 0 || static_cast<std::size_t>(s) >= d_) throw ValidationError("symbol out of range");
    out = out * d_ + static_cast<std::uint64_t>(s);
  }
  return out;
}

double l_n_size(const BlowupParams& p) {
  check_params(p);
  return std::sqrt(static_cast<double>(p.n)) *
         (std::sqrt(-0.5 * std::log(0.5 * p.epsilon_n)) + p.r_n);
}

double log_binomial_sum(int n, int L) {
  using boost::multiprecision::cpp_int;
  if (n < 0 || L < 1) {
    throw ValidationError("log_binomial_sum needs n >= 0 and L >= 1");
  }
  L = std::min(L, n);
  cpp_int term = 1;
  cpp_int total = 0;
  for (int l = 1; l <= L; ++l) {
    term = term * (n - l + 1) / l;
    total += term;
  }
  if (total == 0) return -std::numeric_limits<double>::infinity();
  const auto bits = boost::multiprecision::msb(total);
  const unsigned shift = bits > 62 ? static_cast<unsigned>(bits - 62) : 0U;
  cpp_int top = total >> shift;
  return std::log(static_cast<double>(top.convert_to<std::uint64_t>())) +
         shift * std::numbers::ln2;
}

ExtendedReal log_gamma_factor(const BlowupParams& p, std::size_t d, double mu_min) {
  check_params(p);
  if (d < 1) throw ValidationError("dimension must be positive");
  if (!(mu_min >= 0.0 && mu_min <= 1.0 + 1e-12)) {
    throw ValidationError("mu_min must lie in [0, 1]");
  }
  if (mu_min <= 0.0) return ExtendedReal::infinity();
  const int L = static_cast<int>(std::ceil(l_n_size(p)));
  return std::numbers::ln2 + L * std::log(static_cast<double>(d)) + log_binomial_sum(p.n, L) -
         std::log(p.epsilon_n) - L * std::log(mu_min);
}

ExtendedReal gamma_factor(const BlowupParams& p, std::size_t d, double mu_min) {
  ExtendedReal lg = log_gamma_factor(p, d, mu_min);
  if (lg.is_infinite() || lg.value() > 709.0) return ExtendedReal::infinity();
  return std::exp(lg.value());
}

std::vector<GammaSchedulePoint> gamma_schedule(int max_log2_n, std::size_t d, double mu_min,
                                               double epsilon_n) {
  if (max_log2_n < 1 || max_log2_n > 20) throw ValidationError("max_log2_n must lie in [1, 20]");
  std::vector<GammaSchedulePoint> out;
  for (int k = 1; k <= max_log2_n; ++k) {
    GammaSchedulePoint pt;
    pt.n = 1 << k;
    pt.r_n = std::cbrt(static_cast<double>(pt.n));
    BlowupParams p{pt.n, epsilon_n, pt.r_n};
    pt.l_n = l_n_size(p);
    pt.log_gamma = log_gamma_factor(p, d, mu_min);
    pt.normalized = pt.log_gamma.is_infinite() ? ExtendedReal::infinity()
                                               : ExtendedReal(pt.log_gamma.value() / pt.n);
    out.push_back(pt);
  }
  return out;
}

double mu_min(const DensityOperator& rho, const Matrix& sigma) {
  if (static_cast<std::size_t>(sigma.rows()) != rho.dim()) {
    throw DimensionError("mu_min: dimension mismatch");
  }
  Matrix v = rho.support_basis();
  double out = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    out = std::min(out, (v.col(i).adjoint() * sigma * v.col(i))(0, 0).real());
  }
  return std::max(out, 0.0);
}

double mu_min_bipartite(const DensityOperator& rho_A, const DensityOperator& rho_B,
                        const Matrix& sigma_AB) {
  if (static_cast<std::size_t>(sigma_AB.rows()) != rho_A.dim() * rho_B.dim()) {
    throw DimensionError("mu_min_bipartite: dimension mismatch");
  }
  Matrix va = rho_A.support_basis();
  Matrix vb = rho_B.support_basis();
  double out = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < va.cols(); ++i) {
    for (Eigen::Index j = 0; j < vb.cols(); ++j) {
      Vector x = kron(va.col(i), vb.col(j));
      out = std::min(out, (x.adjoint() * sigma_AB * x)(0, 0).real());
    }
  }
  return std::max(out, 0.0);
}

JSet build_J_set(std::span<const double> m_diag, std::span<const double> rho_eigenvalues,
                 const BlowupParams& p) {
  check_params(p);
  const std::size_t d = rho_eigenvalues.size();
  IndexSet set(p.n, d);
  if (m_diag.size() != set.universe_size()) {
    throw DimensionError("build_J_set: diagonal length is not d^n");
  }
  std::vector<double> lambda = string_products(rho_eigenvalues, p.n);
  double trace = 0.0;
  for (std::uint64_t i = 0; i < set.universe_size(); ++i) {
    trace += lambda[i] * m_diag[i];
    if (lambda[i] > 0.0 && m_diag[i] >= 0.5 * p.epsilon_n) set.insert(i);
  }
  return JSet{std::move(set), trace, trace >= p.epsilon_n * (1.0 - 1e-12)};
}

IndexSet hamming_blowup(const IndexSet& s, double radius) {
  if (!(radius >= 0.0)) throw ValidationError("radius must be nonnegative");
  const int layers = std::min(static_cast<int>(std::ceil(radius)), s.n());
  IndexSet out = s;
  std::vector<std::uint64_t> frontier = s.members();
  std::vector<std::uint64_t> place(static_cast<std::size_t>(s.n()));
  std::uint64_t w = 1;
  for (int k = s.n() - 1; k >= 0; --k) {
    place[static_cast<std::size_t>(k)] = w;
    w *= s.d();
  }
  for (int layer = 0; layer < layers && !frontier.empty(); ++layer) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t idx : frontier) {
      for (int k = 0; k < s.n(); ++k) {
        const std::uint64_t pw = place[static_cast<std::size_t>(k)];
        const std::uint64_t sym = (idx / pw) % s.d();
        const std::uint64_t base = idx - sym * pw;
        for (std::uint64_t a = 0; a < s.d(); ++a) {
          std::uint64_t nb = base + a * pw;
          if (!out.contains(nb)) {
            out.insert(nb);
            next.push_back(nb);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

BlowupRecord verify_blowup(const DensityOperator& rho, const Contraction& M,
                           const DensityOperator& sigma, const BlowupParams& p) {
  check_params(p);
  const std::size_t d = rho.dim();
  if (sigma.dim() != d) throw DimensionError("verify_blowup: rho and sigma differ in dimension");
  const std::uint64_t universe = checked_universe(p.n, d);
  const Matrix& v = rho.spectrum().eigenvectors;
  const std::vector<double>& lambda = rho.spectrum().eigenvalues;

  std::vector<double> m_diag;
  double trace_m_sigma = 0.0;
  if (const auto* prod = std::get_if<ProductContraction>(&M)) {
    if (static_cast<std::size_t>(prod->factor.rows()) != d || prod->factor.cols() != prod->factor.rows()) {
      throw DimensionError("verify_blowup: product factor has the wrong dimension");
    }
    std::vector<double> site(d);
    for (std::size_t x = 0; x < d; ++x) {
      auto col = v.col(static_cast<Eigen::Index>(x));
      site[x] = (col.adjoint() * prod->factor * col)(0, 0).real();
    }
    m_diag = string_products(site, p.n);
    trace_m_sigma = std::pow((prod->factor * sigma.matrix()).trace().real(), p.n);
  } else {
    const Matrix& op = std::get<DenseContraction>(M).op;
    if (universe > (std::uint64_t{1} << 14)) {
      throw SizeError("verify_blowup: dense contraction needs d^n <= 2^14");
    }
    if (static_cast<std::uint64_t>(op.rows()) != universe || op.cols() != op.rows()) {
      throw DimensionError("verify_blowup: dense contraction has the wrong dimension");
    }
    Matrix h = symmetrize_hermitian(op, 1e-10);
    Matrix vd = v.adjoint();
    Matrix half = left_apply_power(vd, h, p.n);
    Matrix rotated = left_apply_power(vd, Matrix(half.adjoint()), p.n).adjoint();
    m_diag.resize(universe);
    for (std::uint64_t i = 0; i < universe; ++i) {
      m_diag[i] = rotated(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    trace_m_sigma = left_apply_power(sigma.matrix(), h, p.n).trace().real();
  }

  BlowupRecord rec;
  JSet j = build_J_set(m_diag, lambda, p);
  rec.precondition_ok = j.precondition_ok;
  rec.trace_rho_M = j.trace_rho_M;
  rec.l_n = l_n_size(p);
  rec.radius = static_cast<int>(std::ceil(rec.l_n));
  rec.j_size = j.members.size();
  IndexSet plus = hamming_blowup(j.members, rec.l_n);
  rec.blown_up_size = plus.size();

  std::vector<double> sigma_site(d);
  for (std::size_t x = 0; x < d; ++x) {
    auto col = v.col(static_cast<Eigen::Index>(x));
    sigma_site[x] = (col.adjoint() * sigma.matrix() * col)(0, 0).real();
  }
  rec.concentration_lhs = sum_over(plus, string_products(lambda, p.n));
  rec.concentration_rhs = 1.0 - std::exp(-2.0 * p.r_n * p.r_n);
  rec.concentration_slack = rec.concentration_lhs - rec.concentration_rhs;
  rec.sigma_lhs = sum_over(plus, string_products(sigma_site, p.n));
  rec.mu_min = mu_min(rho, sigma.matrix());
  rec.log_gamma = log_gamma_factor(p, d, rec.mu_min);
  rec.sigma_rhs = bound_rhs(rec.log_gamma, trace_m_sigma);
  rec.sigma_slack = slack_of(rec.sigma_rhs, rec.sigma_lhs);
  rec.passed = rec.precondition_ok && rec.concentration_slack >= -1e-12 &&
               rec.sigma_slack >= ExtendedReal(-1e-12);
  return rec;
}

BipartiteBlowupRecord verify_blowup_bipartite(const DensityOperator& rho_AB, std::size_t d_A,
                                              std::size_t d_B, const Matrix& m_A,
                                              const Matrix& m_B, const DensityOperator& sigma_AB,
                                              const BlowupParams& p) {
  check_params(p);
  if (rho_AB.dim() != d_A * d_B || sigma_AB.dim() != d_A * d_B ||
      static_cast<std::size_t>(m_A.rows()) != d_A || static_cast<std::size_t>(m_B.rows()) != d_B) {
    throw DimensionError("verify_blowup_bipartite: inconsistent dimensions");
  }
  DensityOperator rho_a = partial_trace(rho_AB, d_A, d_B, Subsystem::A);
  DensityOperator rho_b = partial_trace(rho_AB, d_A, d_B, Subsystem::B);
  const Matrix& va = rho_a.spectrum().eigenvectors;
  const Matrix& vb = rho_b.spectrum().eigenvectors;
  const auto& lam_a = rho_a.spectrum().eigenvalues;
  const auto& lam_b = rho_b.spectrum().eigenvalues;

  auto site_diag = [](const Matrix& vecs, const Matrix& m) {
    std::vector<double> out(static_cast<std::size_t>(vecs.cols()));
    for (Eigen::Index x = 0; x < vecs.cols(); ++x) {
      out[static_cast<std::size_t>(x)] = (vecs.col(x).adjoint() * m * vecs.col(x))(0, 0).real();
    }
    return out;
  };
  JSet ja = build_J_set(string_products(site_diag(va, m_A), p.n), lam_a, p);
  JSet jb = build_J_set(string_products(site_diag(vb, m_B), p.n), lam_b, p);

  BipartiteBlowupRecord rec;
  rec.precondition_ok = ja.precondition_ok && jb.precondition_ok;
  rec.l_n = l_n_size(p);
  rec.radius = static_cast<int>(std::ceil(rec.l_n));
  IndexSet pa = hamming_blowup(ja.members, rec.l_n);
  IndexSet pb = hamming_blowup(jb.members, rec.l_n);

  double ca = sum_over(pa, string_products(lam_a, p.n));
  double cb = sum_over(pb, string_products(lam_b, p.n));
  rec.concentration_lhs = std::min(ca, cb);
  rec.concentration_rhs = 1.0 - std::exp(-2.0 * p.r_n * p.r_n);
  rec.concentration_slack = rec.concentration_lhs - rec.concentration_rhs;

  RealMatrix s_site(static_cast<Eigen::Index>(d_A), static_cast<Eigen::Index>(d_B));
  RealMatrix r_site(static_cast<Eigen::Index>(d_A), static_cast<Eigen::Index>(d_B));
  for (Eigen::Index a = 0; a < s_site.rows(); ++a) {
    for (Eigen::Index b = 0; b < s_site.cols(); ++b) {
      Vector x = kron(va.col(a), vb.col(b));
      s_site(a, b) = (x.adjoint() * sigma_AB.matrix() * x)(0, 0).real();
      r_site(a, b) = (x.adjoint() * rho_AB.matrix() * x)(0, 0).real();
    }
  }
  auto pair_sum = [&](const RealMatrix& site, const std::vector<double>& ind_a,
                      const std::vector<double>& ind_b) {
    std::vector<double> u = apply_power(site, ind_b, p.n);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += ind_a[i] * u[i];
    return acc;
  };
  auto ia = indicator(pa);
  auto ib = indicator(pb);
  rec.sigma_lhs = pair_sum(s_site, ia, ib);
  rec.mu_min = mu_min_bipartite(rho_a, rho_b, sigma_AB.matrix());
  rec.log_gamma = log_gamma_factor(p, std::max(d_A, d_B), rec.mu_min);
  double trace_m_sigma = std::pow((kron(m_A, m_B) * sigma_AB.matrix()).trace().real(), p.n);
  ExtendedReal log_sq = rec.log_gamma.is_infinite() ? ExtendedReal::infinity()
                                                    : ExtendedReal(2.0 * rec.log_gamma.value());
  rec.sigma_rhs = bound_rhs(log_sq, trace_m_sigma);
  rec.sigma_slack = slack_of(rec.sigma_rhs, rec.sigma_lhs);

  rec.joint_lhs = pair_sum(r_site, ia, ib);
  rec.joint_rhs = 1.0 - 2.0 * std::exp(-2.0 * p.r_n * p.r_n);
  rec.joint_slack = rec.joint_lhs - rec.joint_rhs;
  double both_out = pair_sum(r_site, indicator(pa, true), indicator(pb, true));
  rec.identity_residual = std::abs(rec.joint_lhs - (1.0 - (1.0 - ca) - (1.0 - cb) + both_out));
  rec.passed = rec.precondition_ok && rec.concentration_slack >= -1e-12 &&
               rec.sigma_slack >= ExtendedReal(-1e-12) && rec.joint_slack >= -1e-12 &&
               rec.identity_residual <= 1e-10;
  return rec;
}

namespace {

// One side of the typical-projector test: eigenprojectors of sigma (E) and rho (F) and the
// admissible counts of the second eigenvector in each basis.
struct SchemeSide {
  std::array<Matrix, 2> e;
  std::array<Matrix, 2> f;
  std::vector<bool> k_sigma;
  std::vector<bool> k_rho;
};

std::vector<bool> admissible_counts(const DensityOperator& rho, const DensityOperator& sigma,
                                    int n, double delta) {
  const Spectrum& s = sigma.spectrum();
  double cross = 0.0;
  for (int a = 0; a < 2; ++a) {
    auto col = s.eigenvectors.col(a);
    double weight = (col.adjoint() * rho.matrix() * col)(0, 0).real();
    if (s.eigenvalues[static_cast<std::size_t>(a)] <= 0.0) {
      if (weight > 1e-12) {
        throw PreconditionError("typical_projector_scheme: rho is not supported inside sigma");
      }
      continue;
    }
    cross += weight * std::log(s.eigenvalues[static_cast<std::size_t>(a)]);
  }
  std::vector<bool> out(static_cast<std::size_t>(n + 1), false);
  const double slack = 1e-9;
  for (int k = 0; k <= n; ++k) {
    double logp = 0.0;
    bool zero = false;
    for (int a = 0; a < 2; ++a) {
      int count = a == 0 ? n - k : k;
      double mu = s.eigenvalues[static_cast<std::size_t>(a)];
      if (count == 0) continue;
      if (mu <= 0.0) {
        zero = true;
        break;
      }
      logp += count * std::log(mu);
    }
    if (zero) continue;
    out[static_cast<std::size_t>(k)] =
        logp >= n * (cross - delta) - slack && logp <= n * (cross + delta) + slack;
  }
  return out;
}

SchemeSide build_side(const DensityOperator& rho, const DensityOperator& sigma, int n,
                      double delta) {
  SchemeSide side;
  for (int a = 0; a < 2; ++a) {
    auto se = sigma.spectrum().eigenvectors.col(a);
    auto re = rho.spectrum().eigenvectors.col(a);
    side.e[static_cast<std::size_t>(a)] = se * se.adjoint();
    side.f[static_cast<std::size_t>(a)] = re * re.adjoint();
  }
  side.k_sigma = admissible_counts(rho, sigma, n, delta);
  side.k_rho = admissible_counts(rho, rho, n, delta);
  return side;
}

// Discrete Fourier weights sum_{k in K} w^{-t k} for t = 0..N-1, w = exp(2 pi i / N).
std::vector<Complex> count_weights(const std::vector<bool>& allowed) {
  const int big_n = static_cast<int>(allowed.size());
  std::vector<Complex> out(static_cast<std::size_t>(big_n), 0.0);
  for (int t = 0; t < big_n; ++t) {
    for (int k = 0; k < big_n; ++k) {
      if (allowed[static_cast<std::size_t>(k)]) {
        out[static_cast<std::size_t>(t)] +=
            std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((t * k) % big_n) / big_n);
      }
    }
  }
  return out;
}

Complex ipow(Complex z, int n) {
  Complex out = 1.0;
  while (n > 0) {
    if (n & 1) out *= z;
    z *= z;
    n >>= 1;
  }
  return out;
}

// Coefficients T[a b a'] = E_a F_b E_a' in the local generating operator.
std::array<Matrix, 8> local_terms(const SchemeSide& s) {
  std::array<Matrix, 8> out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        out[static_cast<std::size_t>(a * 4 + b * 2 + c)] =
            s.e[static_cast<std::size_t>(a)] * s.f[static_cast<std::size_t>(b)] *
            s.e[static_cast<std::size_t>(c)];
      }
    }
  }
  return out;
}

// Monomial values z^a w^b z'^c for the grid point (t1, t2, t3).
std::array<Complex, 8> monomials(const std::vector<Complex>& roots, int t1, int t2, int t3) {
  std::array<Complex, 8> out;
  const Complex z[2] = {1.0, roots[static_cast<std::size_t>(t1)]};
  const Complex w[2] = {1.0, roots[static_cast<std::size_t>(t2)]};
  const Complex zp[2] = {1.0, roots[static_cast<std::size_t>(t3)]};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) out[static_cast<std::size_t>(a * 4 + b * 2 + c)] = z[a] * w[b] * zp[c];
  return out;
}

// tr(state^{(x)n} M) for the single-side accept operator M.
double side_trace(const SchemeSide& side, const Matrix& state, int n) {
  const int big_n = n + 1;
  auto terms = local_terms(side);
  std::array<Complex, 8> coeff;
  for (std::size_t i = 0; i < 8; ++i) coeff[i] = (state * terms[i]).trace();
  std::vector<Complex> roots(static_cast<std::size_t>(big_n));
  for (int t = 0; t < big_n; ++t) roots[static_cast<std::size_t>(t)] = std::polar(1.0, 2.0 * std::numbers::pi * t / big_n);
  auto ws = count_weights(side.k_sigma);
  auto wr = count_weights(side.k_rho);
  Complex acc = 0.0;
  for (int t1 = 0; t1 < big_n; ++t1)
    for (int t2 = 0; t2 < big_n; ++t2)
      for (int t3 = 0; t3 < big_n; ++t3) {
        auto mono = monomials(roots, t1, t2, t3);
        Complex f = 0.0;
        for (std::size_t i = 0; i < 8; ++i) f += coeff[i] * mono[i];
        acc += ipow(f, n) * ws[static_cast<std::size_t>(t1)] * wr[static_cast<std::size_t>(t2)] *
               ws[static_cast<std::size_t>(t3)];
      }
  return acc.real() / std::pow(static_cast<double>(big_n), 3);
}

// tr(state_AB^{(x)n} (M_A (x) M_B)).
double joint_trace(const SchemeSide& sa, const SchemeSide& sb, const Matrix& state, int n) {
  const int big_n = n + 1;
  auto ta = local_terms(sa);
  auto tb = local_terms(sb);
  std::array<Complex, 64> coeff;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) coeff[i * 8 + j] = (state * kron(ta[i], tb[j])).trace();
  std::vector<Complex> roots(static_cast<std::size_t>(big_n));
  for (int t = 0; t < big_n; ++t) roots[static_cast<std::size_t>(t)] = std::polar(1.0, 2.0 * std::numbers::pi * t / big_n);
  auto wsa = count_weights(sa.k_sigma);
  auto wra = count_weights(sa.k_rho);
  auto wsb = count_weights(sb.k_sigma);
  auto wrb = count_weights(sb.k_rho);
  Complex acc = 0.0;
  for (int t1 = 0; t1 < big_n; ++t1)
    for (int t2 = 0; t2 < big_n; ++t2)
      for (int t3 = 0; t3 < big_n; ++t3) {
        Complex wa = wsa[static_cast<std::size_t>(t1)] * wra[static_cast<std::size_t>(t2)] *
                     wsa[static_cast<std::size_t>(t3)];
        if (wa == Complex(0.0)) continue;
        auto ma = monomials(roots, t1, t2, t3);
        std::array<Complex, 8> partial{};
        for (std::size_t j = 0; j < 8; ++j) {
          Complex s = 0.0;
          for (std::size_t i = 0; i < 8; ++i) s += coeff[i * 8 + j] * ma[i];
          partial[j] = s;
        }
        for (int t4 = 0; t4 < big_n; ++t4)
          for (int t5 = 0; t5 < big_n; ++t5)
            for (int t6 = 0; t6 < big_n; ++t6) {
              Complex wb = wsb[static_cast<std::size_t>(t4)] * wrb[static_cast<std::size_t>(t5)] *
                           wsb[static_cast<std::size_t>(t6)];
              if (wb == Complex(0.0)) continue;
              auto mb = monomials(roots, t4, t5, t6);
              Complex f = 0.0;
              for (std::size_t j = 0; j < 8; ++j) f += partial[j] * mb[j];
              acc += ipow(f, n) * wa * wb;
            }
      }
  return acc.real() / std::pow(static_cast<double>(big_n), 6);
}

}  // namespace

SchemeResult typical_projector_scheme(const BipartitePair& pair, int n, double delta) {
  if (pair.d_A() != 2 || pair.d_B() != 2) {
    throw ValidationError("typical_projector_scheme supports qubit pairs only");
  }
  if (n < 1 || n > 12) {
    throw SizeError("typical_projector_scheme needs 1 <= n <= 12");
  }
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  DensityOperator alt_a = pair.alt_marginal(Subsystem::A);
  DensityOperator alt_b = pair.alt_marginal(Subsystem::B);
  if ((pair.alt_state().matrix() - kron(alt_a.matrix(), alt_b.matrix())).norm() > 1e-10) {
    throw ValidationError("typical_projector_scheme: alternative is not a product state");
  }
  DensityOperator null_a = pair.null_marginal(Subsystem::A);
  DensityOperator null_b = pair.null_marginal(Subsystem::B);
  SchemeSide sa = build_side(null_a, alt_a, n, delta);
  SchemeSide sb = build_side(null_b, alt_b, n, delta);

  SchemeResult out;
  out.n = n;
  out.delta = delta;
  out.beta_A = std::clamp(side_trace(sa, alt_a.matrix(), n), 0.0, 1.0);
  out.beta_B = std::clamp(side_trace(sb, alt_b.matrix(), n), 0.0, 1.0);
  out.null_success_A = std::clamp(side_trace(sa, null_a.matrix(), n), 0.0, 1.0);
  out.null_success_B = std::clamp(side_trace(sb, null_b.matrix(), n), 0.0, 1.0);
  out.beta = out.beta_A * out.beta_B;
  out.alpha = std::clamp(1.0 - joint_trace(sa, sb, pair.null_state().matrix(), n), 0.0, 1.0);
  out.exponent = out.beta > 0.0 ? ExtendedReal(-std::log(out.beta) / n) : ExtendedReal::infinity();
  return out;
}

}  // namespace steinlab
