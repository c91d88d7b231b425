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

#include "steinlab/entropy.h"

#include <cmath>
#include <string>

namespace steinlab {

void validate_pmf(std::span<const double> p, double tol) {
  if (p.empty()) {
    throw ValidationError("pmf is empty");
  }
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("pmf entries must be finite and nonnegative");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > tol) {
    throw ValidationError("pmf sums to " + std::to_string(total) + ", expected 1");
  }
}

JointPmf::JointPmf(RealMatrix table, double tol) : table_(std::move(table)) {
  if (table_.size() == 0) {
    throw ValidationError("joint pmf is empty");
  }
  validate_pmf(std::span<const double>(table_.data(), static_cast<std::size_t>(table_.size())),
               tol);
}

JointPmf JointPmf::product(std::span<const double> px, std::span<const double> py) {
  validate_pmf(px);
  validate_pmf(py);
  RealMatrix t(static_cast<Eigen::Index>(px.size()), static_cast<Eigen::Index>(py.size()));
  for (std::size_t x = 0; x < px.size(); ++x) {
    for (std::size_t y = 0; y < py.size(); ++y) {
      t(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = px[x] * py[y];
    }
  }
  return JointPmf(std::move(t));
}

std::vector<double> JointPmf::marginal_x() const {
  std::vector<double> out(rows());
  for (Eigen::Index x = 0; x < table_.rows(); ++x) {
    out[static_cast<std::size_t>(x)] = table_.row(x).sum();
  }
  return out;
}

std::vector<double> JointPmf::marginal_y() const {
  std::vector<double> out(cols());
  for (Eigen::Index y = 0; y < table_.cols(); ++y) {
    out[static_cast<std::size_t>(y)] = table_.col(y).sum();
  }
  return out;
}

std::vector<double> JointPmf::flat() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(table_.size()));
  for (Eigen::Index x = 0; x < table_.rows(); ++x) {
    for (Eigen::Index y = 0; y < table_.cols(); ++y) {
      out.push_back(table_(x, y));
    }
  }
  return out;
}

ExtendedReal kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DimensionError("kl: alphabets differ in size");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw ValidationError("kl: negative probability");
    }
    if (p[i] == 0.0) {
      continue;
    }
    if (q[i] == 0.0) {
      return ExtendedReal::infinity();
    }
    acc += p[i] * std::log(p[i] / q[i]);
  }
  return acc;
}

ExtendedReal kl(const JointPmf& p, const JointPmf& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw DimensionError("kl: joint alphabets differ");
  }
  auto fp = p.flat();
  auto fq = q.flat();
  return kl(fp, fq);
}

ExtendedReal umegaki(const DensityOperator& rho, const Matrix& sigma, double cutoff) {
  if (static_cast<std::size_t>(sigma.rows()) != rho.dim() || sigma.rows() != sigma.cols()) {
    throw DimensionError("umegaki: dimension mismatch");
  }
  Matrix hs = symmetrize_hermitian(sigma);
  Spectrum ss = hermitian_spectrum(hs);
  if (ss.eigenvalues.back() < -kPsdTol) {
    throw ValidationError("umegaki: sigma is not positive semidefinite");
  }
  if (!support_contained(rho, hs, cutoff)) {
    return ExtendedReal::infinity();
  }
  double neg_entropy = 0.0;
  for (double l : rho.spectrum().eigenvalues) {
    if (l > 0.0) {
      neg_entropy += l * std::log(l);
    }
  }
  double cross = 0.0;
  for (std::size_t j = 0; j < ss.eigenvalues.size(); ++j) {
    double mu = ss.eigenvalues[j];
    if (mu <= cutoff) {
      continue;
    }
    Vector w = ss.eigenvectors.col(static_cast<Eigen::Index>(j));
    double weight = (w.adjoint() * rho.matrix() * w)(0, 0).real();
    cross += weight * std::log(mu);
  }
  return neg_entropy - cross;
}

std::vector<double> measured_distribution(const Matrix& state, const PVMBasis& basis) {
  if (static_cast<std::size_t>(state.rows()) != basis.dim()) {
    throw DimensionError("measurement basis and state dimensions differ");
  }
  const Matrix& u = basis.unitary();
  Vector d = (u.adjoint() * state * u).diagonal();
  std::vector<double> out(static_cast<std::size_t>(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    double v = d(i).real();
    if (v < 0.0) {
      if (v < -1e-12) {
        throw ValidationError("measured probability is negative beyond roundoff");
      }
      v = 0.0;
    }
    out[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

ExtendedReal measured_re(const Matrix& rho, const Matrix& sigma, const PVMBasis& basis) {
  return kl(measured_distribution(rho, basis), measured_distribution(sigma, basis));
}

ExtendedReal measured_re(const Matrix& rho, const Matrix& sigma, const LocalPVM& pvm) {
  PVMBasis joint(pvm.product_unitary());
  return measured_re(rho, sigma, joint);
}

Matrix geometric_mean(const Matrix& s0, const Matrix& s1, double cutoff) {
  if (s0.rows() != s1.rows() || s0.cols() != s1.cols()) {
    throw DimensionError("geometric_mean: dimension mismatch");
  }
  Matrix a = symmetrize_hermitian(s0);
  Matrix b = symmetrize_hermitian(s1);
  Matrix a_half = hermitian_sqrt(a);
  Matrix a_mhalf = hermitian_inv_sqrt(a, cutoff);
  Matrix inner = a_mhalf * b * a_mhalf;
  inner = (inner + inner.adjoint()) * 0.5;
  Matrix out = a_half * hermitian_sqrt(inner) * a_half;
  return (out + out.adjoint()) * 0.5;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("binary_entropy: p must lie in [0,1]");
  }
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

}  // namespace steinlab
