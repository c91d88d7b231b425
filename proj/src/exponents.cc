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

#include "steinlab/exponents.h"

#include <cmath>
#include <numbers>

namespace steinlab {

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Exact:
      return "exact";
    case BoundKind::Upper:
      return "upper";
    case BoundKind::Lower:
      return "lower";
  }
  return "unknown";
}

ExponentReport theta_zrc(const JointPmf& p, const JointPmf& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw DimensionError("theta_zrc: alphabets differ");
  }
  MarginalConstraint c{p.marginal_x(), p.marginal_y()};
  bool q_positive = q.table().minCoeff() > 0.0;
  ExponentReport report;
  report.name = "theta_zrc";
  report.bound_kind = q_positive ? BoundKind::Exact : BoundKind::Lower;
  if (!coupling_exists(q, c)) {
    report.value = ExtendedReal::infinity();
    report.method = "no coupling of the marginals inside supp(q)";
    return report;
  }
  IProjection proj = iproject(q, c);
  report.value = proj.diagnostics.objective;
  report.method = "iterative proportional fitting";
  report.diagnostics = proj.diagnostics;
  return report;
}

ExponentReport theta_product_alt(const BipartitePair& pair) {
  const DensityOperator alt_a = pair.alt_marginal(Subsystem::A);
  const DensityOperator alt_b = pair.alt_marginal(Subsystem::B);
  double dev = (pair.alt_state().matrix() - kron(alt_a.matrix(), alt_b.matrix())).norm();
  if (dev > 1e-10) {
    throw ValidationError("theta_product_alt: alternative is not a product state (deviation " +
                          std::to_string(dev) + ")");
  }
  ExponentReport report;
  report.name = "theta_product_alt";
  report.value = umegaki(pair.null_marginal(Subsystem::A), alt_a.matrix()) +
                 umegaki(pair.null_marginal(Subsystem::B), alt_b.matrix());
  report.method = "sum of marginal relative entropies";
  report.bound_kind = BoundKind::Exact;
  return report;
}

ExponentReport theta_sl(const BipartitePair& pair, const QProjectOptions& opts) {
  QuantumMarginalConstraint c{pair.null_marginal(Subsystem::A), pair.null_marginal(Subsystem::B)};
  QProjection proj = qproject(pair.alt_state(), c, pair.d_A(), pair.d_B(), opts);
  ExponentReport report;
  report.name = "theta_sl";
  report.value = proj.diagnostics.objective;
  report.method = "dual ascent on the marginal-constrained relative entropy";
  report.diagnostics = proj.diagnostics;
  report.bound_kind = BoundKind::Upper;
  return report;
}

double kappa_gap(const DensityOperator& psi, const DensityOperator& r0, const DensityOperator& r1,
                 const GeometricMeanFn& mean) {
  GeometricMeanFn gm = mean;
  if (!gm) {
    gm = [](const Matrix& a, const Matrix& b) { return geometric_mean(a, b); };
  }
  ExtendedReal d0 = umegaki(psi, r0.matrix());
  ExtendedReal d1 = umegaki(psi, r1.matrix());
  ExtendedReal d01 = umegaki(psi, gm(r0.matrix(), r1.matrix()));
  ExtendedReal d10 = umegaki(psi, gm(r1.matrix(), r0.matrix()));
  if (d0.is_infinite() || d1.is_infinite() || d01.is_infinite() || d10.is_infinite()) {
    throw PreconditionError("kappa_gap: a relative entropy is infinite");
  }
  return 0.5 * (d0.value() + d1.value() - d01.value() - d10.value());
}

ExponentReport iso_werner_bounds(const std::string& family, double p, int d) {
  if (d < 2) {
    throw ValidationError("iso_werner_bounds: d must be at least 2");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("iso_werner_bounds: p must lie in [0,1]");
  }
  ExponentReport report;
  report.bound_kind = BoundKind::Upper;
  report.method = "closed form";
  if (family == "isotropic") {
    report.name = "isotropic_vs_phi_perp";
    report.value = std::log(p * d + 1.0);
  } else if (family == "werner") {
    report.name = "werner_vs_theta";
    report.value = std::log((d + 1.0 - 2.0 * p) / (d - 1.0));
  } else {
    throw ValidationError("iso_werner_bounds: family must be 'isotropic' or 'werner'");
  }
  return report;
}

ExponentReport theta_sl_cq_closed_form(std::span<const double> p_x, std::span<const double> ptilde_x,
                                       const DensityOperator& psi,
                                       std::span<const DensityOperator> rho_tilde) {
  if (p_x.size() != ptilde_x.size() || p_x.size() != rho_tilde.size()) {
    throw DimensionError("theta_sl_cq_closed_form: inconsistent alphabet sizes");
  }
  validate_pmf(p_x);
  validate_pmf(ptilde_x);
  ExtendedReal total = kl(p_x, ptilde_x);
  for (std::size_t x = 0; x < p_x.size(); ++x) {
    if (p_x[x] > 0.0) {
      ExtendedReal d = umegaki(psi, rho_tilde[x].matrix());
      total = d.is_infinite() ? ExtendedReal::infinity() : total + p_x[x] * d.value();
    }
  }
  ExponentReport report;
  report.name = "theta_sl_cq";
  report.value = total;
  report.method = "closed form";
  report.bound_kind = BoundKind::Upper;
  return report;
}

PVMBasis fourier_basis(std::size_t d) {
  auto n = static_cast<Eigen::Index>(d);
  Matrix f(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                          2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(d));
    }
  }
  return PVMBasis(f);
}

namespace {

struct NamedBasis {
  std::string name;
  PVMBasis basis;
};

std::vector<NamedBasis> basis_dictionary(std::size_t d) {
  std::vector<NamedBasis> out;
  out.push_back({"Z", PVMBasis::computational(d)});
  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix x(2, 2);
    x << s, s, s, -s;
    Matrix y(2, 2);
    y << s, s, Complex(0, s), Complex(0, -s);
    out.push_back({"X", PVMBasis(x)});
    out.push_back({"Y", PVMBasis(y)});
  } else if (d > 2) {
    out.push_back({"F", fourier_basis(d)});
  }
  return out;
}

bool disjoint_outcomes(const BipartitePair& pair, const LocalPVM& pvm) {
  PVMBasis joint(pvm.product_unitary());
  auto p = measured_distribution(pair.null_state().matrix(), joint);
  auto q = measured_distribution(pair.alt_state().matrix(), joint);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 1e-12 && q[i] > 1e-12) return false;
  }
  return true;
}

}  // namespace

DiscriminationResult orthogonal_discrimination(const BipartitePair& pair,
                                               const std::vector<LocalPVM>& extra) {
  DiscriminationResult result;
  result.report.name = "orthogonal_discrimination";
  auto try_pvm = [&](const LocalPVM& pvm, const std::string& name) {
    if (pvm.block_size() != 1 || pvm.d_A() != pair.d_A() || pvm.d_B() != pair.d_B()) {
      throw DimensionError("orthogonal_discrimination: basis does not act on a single copy");
    }
    if (!disjoint_outcomes(pair, pvm)) return false;
    result.found = true;
    result.witness = pvm;
    result.witness_name = name;
    result.report.value = ExtendedReal::infinity();
    result.report.bound_kind = BoundKind::Exact;
    result.report.method = "local bases " + name + " give disjoint outcome supports";
    return true;
  };
  auto dict_a = basis_dictionary(pair.d_A());
  auto dict_b = basis_dictionary(pair.d_B());
  for (const auto& a : dict_a) {
    for (const auto& b : dict_b) {
      if (try_pvm(LocalPVM(a.basis, b.basis, pair.d_A(), pair.d_B()), a.name + "/" + b.name)) {
        return result;
      }
    }
  }
  for (std::size_t i = 0; i < extra.size(); ++i) {
    if (try_pvm(extra[i], "extra[" + std::to_string(i) + "]")) return result;
  }
  result.report.value = 0.0;
  result.report.bound_kind = BoundKind::Lower;
  result.report.method = "no separating basis in the dictionary";
  return result;
}

}  // namespace steinlab
