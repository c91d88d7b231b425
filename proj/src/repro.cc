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

#include "steinlab/repro.h"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "steinlab/exponents.h"
#include "steinlab/protocol.h"

namespace steinlab {

namespace {

using ItemFn = std::function<ExtendedReal()>;

struct Check {
  std::string name;
  ExtendedReal expected;
  double tol;
  ItemFn got;
};

ReproItem run_item(const Check& s) {
  ReproItem item;
  item.name = s.name;
  item.expected = s.expected;
  item.tol = s.tol;
  try {
    item.got = s.got();
    if (item.expected.is_infinite() || item.got.is_infinite()) {
      item.passed = item.expected.is_infinite() && item.got.is_infinite();
    } else {
      double diff = std::abs(item.got.value() - item.expected.value());
      item.passed = std::isfinite(diff) && diff <= s.tol;
    }
  } catch (const std::exception& e) {
    item.got = std::numeric_limits<double>::quiet_NaN();
    item.error = e.what();
    item.passed = false;
  }
  return item;
}

Matrix hadamard() {
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::numbers::sqrt2;
}

BipartitePair product_alt_instance() {
  DensityOperator null = presets::isotropic(0.7, 2);
  const double a[] = {0.3, 0.7};
  const double b[] = {0.6, 0.4};
  DensityOperator alt = tensor_product(presets::diagonal(a), presets::diagonal(b));
  return BipartitePair(null, alt, 2, 2);
}

std::vector<Check> kappa_items(const GeometricMeanFn& mean) {
  Vector k0 = Vector::Zero(2);
  k0(0) = 1.0;
  Vector k1 = Vector::Zero(2);
  k1(1) = 1.0;
  Vector plus = (k0 + k1) / std::numbers::sqrt2;
  Vector minus = (k0 - k1) / std::numbers::sqrt2;
  return {{"kappa", 0.0178, 5e-4, [=] {
             DensityOperator psi = presets::pure(k0);
             DensityOperator r0(Matrix(0.4 * k0 * k0.adjoint() + 0.6 * k1 * k1.adjoint()));
             DensityOperator r1(Matrix(0.1 * plus * plus.adjoint() + 0.9 * minus * minus.adjoint()));
             return ExtendedReal(kappa_gap(psi, r0, r1, mean));
           }}};
}

std::vector<Check> bound_items() {
  std::vector<Check> out;
  auto iso = [](double p, int d) { return std::log(p * d + 1.0); };
  auto wer = [](double p, int d) { return std::log((d + 1.0 - 2.0 * p) / (d - 1.0)); };
  const std::pair<double, int> cases[] = {{1.0, 2}, {0.5, 2}, {0.25, 3}, {0.0, 4}};
  for (auto [p, d] : cases) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "isotropic_bound_p%g_d%d", p, d);
    out.push_back({buf, iso(p, d), 1e-12,
                   [p, d] { return iso_werner_bounds("isotropic", p, d).value; }});
    std::snprintf(buf, sizeof(buf), "werner_bound_p%g_d%d", p, d);
    out.push_back({buf, wer(p, d), 1e-12,
                   [p, d] { return iso_werner_bounds("werner", p, d).value; }});
  }
  return out;
}

std::vector<Check> product_alt_items() {
  return {{"product_alt_solver_vs_closed_form", theta_product_alt(product_alt_instance()).value,
           1e-6, [] { return theta_sl(product_alt_instance()).value; }}};
}

std::vector<Check> same_marginal_items() {
  return {{"same_marginals_isotropic", 0.0, 1e-9,
           [] { return theta_sl(preset_pair("isotropic_vs_perp")).value; }},
          {"same_marginals_werner", 0.0, 1e-9,
           [] { return theta_sl(preset_pair("werner_vs_perp")).value; }}};
}

std::vector<Check> bell_pair_items() {
  std::vector<Check> out;
  const TypicalityRule rule{0.1, TypicalityMode::JointSupport};
  const int k[] = {1};
  struct Case {
    const char* pair;
    bool hadamard_basis;
  };
  for (Case c : {Case{"bell_z", false}, Case{"bell_x", true}}) {
    auto curve = [c, rule, k] {
      BipartitePair pair = preset_pair(c.pair);
      LocalPVM pvm = c.hadamard_basis ? LocalPVM(PVMBasis(hadamard()), PVMBasis(hadamard()), 2, 2)
                                      : LocalPVM::computational(2, 2);
      return quantum_frontend(pair, pvm, rule, k).points.front();
    };
    out.push_back({std::string(c.pair) + "_alpha", 0.0, 0.0,
                   [curve] { return ExtendedReal(curve().alpha); }});
    out.push_back({std::string(c.pair) + "_beta", 0.0, 0.0,
                   [curve] { return ExtendedReal(curve().beta); }});
  }
  return out;
}

std::vector<Check> convergence_items() {
  ClassicalInstance inst = convergence_instance();
  ExtendedReal target = theta_zrc(inst.p, inst.q).value;
  double tol = target.is_infinite() ? 0.0 : 0.15 * target.value();
  return {{"one_bit_exponent_n60", target, tol, [inst] {
             const int n[] = {60};
             return one_bit_exact(inst.p, inst.q, inst.rule, n)
                 .points.front()
                 .minus_log_beta_over_n;
           }}};
}

std::string csv_number(ExtendedReal x) {
  if (x.is_infinite()) return "inf";
  if (std::isnan(x.value())) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x.value());
  return buf;
}

}  // namespace

bool ReproReport::all_passed() const {
  return std::all_of(items.begin(), items.end(), [](const ReproItem& i) { return i.passed; });
}

ClassicalInstance convergence_instance() {
  RealMatrix p(2, 2);
  p << 0.45, 0.05, 0.05, 0.45;
  RealMatrix q(2, 2);
  q << 0.05, 0.05, 0.05, 0.85;
  // For n <= 60 this delta admits only the exact marginal types.
  return {JointPmf(p), JointPmf(q), TypicalityRule{0.02, TypicalityMode::Robust}};
}

std::vector<std::string> repro_groups() {
  return {"kappa", "bounds", "product_alt", "same_marginals", "bell_pairs", "convergence"};
}

ReproReport repro_suite(std::span<const std::string> only, GeometricMeanFn mean) {
  for (const std::string& name : only) {
    auto groups = repro_groups();
    if (std::find(groups.begin(), groups.end(), name) == groups.end()) {
      throw ValidationError("unknown repro item: " + name);
    }
  }
  auto selected = [&](const std::string& g) {
    return only.empty() || std::find(only.begin(), only.end(), g) != only.end();
  };
  ReproReport report;
  auto run_group = [&](const std::string& g, const std::function<std::vector<Check>()>& make) {
    if (!selected(g)) return;
    std::vector<Check> checks;
    try {
      checks = make();
    } catch (const std::exception& e) {
      ReproItem failed;
      failed.name = g;
      failed.got = std::numeric_limits<double>::quiet_NaN();
      failed.error = e.what();
      report.items.push_back(failed);
      return;
    }
    for (const Check& s : checks) report.items.push_back(run_item(s));
  };
  run_group("kappa", [&] { return kappa_items(mean); });
  run_group("bounds", bound_items);
  run_group("product_alt", product_alt_items);
  run_group("same_marginals", same_marginal_items);
  run_group("bell_pairs", bell_pair_items);
  run_group("convergence", convergence_items);
  return report;
}

Json to_json(const ReproReport& r) {
  Json items = Json::array();
  for (const ReproItem& i : r.items) {
    Json j;
    j["name"] = i.name;
    j["expected"] = to_json(i.expected);
    j["got"] = to_json(i.got);
    j["tol"] = i.tol;
    j["passed"] = i.passed;
    if (!i.error.empty()) j["error"] = i.error;
    items.push_back(std::move(j));
  }
  Json out;
  out["all_passed"] = r.all_passed();
  out["items"] = std::move(items);
  return out;
}

std::string to_csv(const ReproReport& r) {
  std::ostringstream out;
  out << "name,expected,got,tol\n";
  for (const ReproItem& i : r.items) {
    out << i.name << ',' << csv_number(i.expected) << ',' << csv_number(i.got) << ','
        << csv_number(i.tol) << '\n';
  }
  return out.str();
}

}  // namespace steinlab
