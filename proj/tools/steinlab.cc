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

// steinlab: command-line front end for the exponent, projection, verification and simulation
// routines. Reports are JSON (or CSV where tabular) on stdout or --output.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steinlab/blowup.h"
#include "steinlab/exponents.h"
#include "steinlab/io.h"
#include "steinlab/marginal_opt.h"
#include "steinlab/protocol.h"
#include "steinlab/pvm_opt.h"
#include "steinlab/repro.h"
#include "steinlab/sampling.h"

namespace {

using namespace steinlab;

struct Globals {
  std::uint64_t seed = 0;
  double tol = 1e-10;
  bool bits = false;
  std::string output;
  std::string format = "json";

  double scale() const { return bits ? 1.0 / std::numbers::ln2 : 1.0; }
  std::string unit() const { return bits ? "bits" : "nats"; }
};

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output);
  if (!out) throw InputError("", "cannot open output file: " + g.output);
  out << text;
}

void emit_json(const Globals& g, const Json& j) { emit(g, dump_canonical(j)); }

Json base_inputs(const Globals& g) {
  Json in;
  in["seed"] = g.seed;
  in["tol"] = g.tol;
  in["log_base"] = g.unit();
  return in;
}

std::string csv_value(ExtendedReal x, double scale) {
  if (x.is_infinite()) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x.value() * scale);
  return buf;
}

BipartitePair load_pair(const std::string& input, const std::string& preset_name) {
  if (!preset_name.empty()) {
    Json j;
    j["preset_pair"] = preset_name;
    return parse_pair(j);
  }
  if (input.empty()) throw InputError("", "either --input or --preset is required");
  Json j = read_json_file(input);
  if (j.contains("pair")) return parse_pair(j["pair"], "/pair");
  return parse_pair(j);
}

// exponent ------------------------------------------------------------------------------------

struct ExponentArgs {
  std::string kind = "sl";
  std::string input;
  std::string preset;
};

int run_exponent(const Globals& g, const ExponentArgs& a) {
  Json inputs = base_inputs(g);
  inputs["kind"] = a.kind;
  ExponentReport report;
  if (a.kind == "zrc") {
    if (a.input.empty()) throw InputError("", "--input is required for kind zrc");
    Json j = read_json_file(a.input);
    if (!j.contains("p")) throw InputError("/p", "missing field");
    if (!j.contains("q")) throw InputError("/q", "missing field");
    JointPmf p = parse_pmf(j["p"], "/p");
    JointPmf q = parse_pmf(j["q"], "/q");
    inputs["p"] = real_matrix_to_json(p.table());
    inputs["q"] = real_matrix_to_json(q.table());
    report = theta_zrc(p, q);
  } else if (a.kind == "cq") {
    if (a.input.empty()) throw InputError("", "--input is required for kind cq");
    Json j = read_json_file(a.input);
    for (const char* key : {"p_x", "ptilde_x", "psi", "rho_tilde"}) {
      if (!j.contains(key)) throw InputError(std::string("/") + key, "missing field");
    }
    auto read_vec = [](const Json& v, const std::string& path) {
      if (!v.is_array()) throw InputError(path, "expected an array");
      std::vector<double> out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw InputError(path + "/" + std::to_string(i), "expected a number");
        out.push_back(v[i].get<double>());
      }
      return out;
    };
    std::vector<double> px = read_vec(j["p_x"], "/p_x");
    std::vector<double> pt = read_vec(j["ptilde_x"], "/ptilde_x");
    DensityOperator psi = parse_state(j["psi"], "/psi");
    if (!j["rho_tilde"].is_array()) throw InputError("/rho_tilde", "expected an array");
    std::vector<DensityOperator> rt;
    for (std::size_t i = 0; i < j["rho_tilde"].size(); ++i) {
      rt.push_back(parse_state(j["rho_tilde"][i], "/rho_tilde/" + std::to_string(i)));
    }
    inputs["p_x"] = px;
    inputs["ptilde_x"] = pt;
    report = theta_sl_cq_closed_form(px, pt, psi, rt);
  } else {
    BipartitePair pair = load_pair(a.input, a.preset);
    if (!a.preset.empty()) inputs["preset"] = a.preset;
    inputs["null"] = matrix_to_json(pair.null_state().matrix());
    inputs["alt"] = matrix_to_json(pair.alt_state().matrix());
    if (a.kind == "sl") {
      QProjectOptions opts;
      opts.tol = g.tol;
      report = theta_sl(pair, opts);
    } else if (a.kind == "product_alt") {
      report = theta_product_alt(pair);
    } else if (a.kind == "discrimination") {
      DiscriminationResult d = orthogonal_discrimination(pair);
      Json results = to_json(d.report, g.scale());
      results["found"] = d.found;
      if (d.found) results["witness"] = d.witness_name;
      emit_json(g, make_report("exponent", inputs, results));
      return 0;
    } else {
      throw InputError("", "unknown exponent kind: " + a.kind);
    }
  }
  emit_json(g, make_report("exponent", inputs, to_json(report, g.scale())));
  return 0;
}

// kappa ---------------------------------------------------------------------------------------

int run_kappa(const Globals& g, const std::string& input) {
  Json inputs = base_inputs(g);
  double value = 0.0;
  if (input.empty()) {
    ReproReport r = repro_suite(std::vector<std::string>{"kappa"});
    value = r.items.front().got.value();
    inputs["instance"] = "built-in";
  } else {
    Json j = read_json_file(input);
    for (const char* key : {"psi", "r0", "r1"}) {
      if (!j.contains(key)) throw InputError(std::string("/") + key, "missing field");
    }
    DensityOperator psi = parse_state(j["psi"], "/psi");
    DensityOperator r0 = parse_state(j["r0"], "/r0");
    DensityOperator r1 = parse_state(j["r1"], "/r1");
    inputs["psi"] = matrix_to_json(psi.matrix());
    inputs["r0"] = matrix_to_json(r0.matrix());
    inputs["r1"] = matrix_to_json(r1.matrix());
    value = kappa_gap(psi, r0, r1);
  }
  Json results;
  results["name"] = "kappa";
  results["value"] = value * g.scale();
  results["bound_kind"] = "exact";
  emit_json(g, make_report("kappa", inputs, results));
  return 0;
}

// bounds --------------------------------------------------------------------------------------

int run_bounds(const Globals& g, const std::string& family, const std::vector<double>& ps, int d) {
  std::vector<ExponentReport> reports;
  for (double p : ps) reports.push_back(iso_werner_bounds(family, p, d));
  if (g.format == "csv") {
    std::ostringstream out;
    out << "param,value,bound_kind\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", ps[i]);
      out << buf << ',' << csv_value(reports[i].value, g.scale()) << ','
          << to_string(reports[i].bound_kind) << '\n';
    }
    emit(g, out.str());
    return 0;
  }
  Json inputs = base_inputs(g);
  inputs["family"] = family;
  inputs["p"] = ps;
  inputs["d"] = d;
  Json results = Json::array();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Json r = to_json(reports[i], g.scale());
    r["p"] = ps[i];
    results.push_back(std::move(r));
  }
  emit_json(g, make_report("bounds", inputs, results));
  return 0;
}

// iproject / qproject -------------------------------------------------------------------------

std::vector<double> read_probs(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw InputError(path, "expected a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(path + "/" + std::to_string(i), "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

int run_iproject(const Globals& g, const std::string& input) {
  if (input.empty()) throw InputError("", "--input is required");
  Json j = read_json_file(input);
  if (!j.contains("q")) throw InputError("/q", "missing field");
  JointPmf q = parse_pmf(j["q"], "/q");
  MarginalConstraint c;
  if (j.contains("p")) {
    JointPmf p = parse_pmf(j["p"], "/p");
    c = {p.marginal_x(), p.marginal_y()};
  } else {
    if (!j.contains("target_px")) throw InputError("/target_px", "missing field");
    if (!j.contains("target_py")) throw InputError("/target_py", "missing field");
    c = {read_probs(j["target_px"], "/target_px"), read_probs(j["target_py"], "/target_py")};
  }
  IProjectOptions opts;
  opts.tol = g.tol;
  Json inputs = base_inputs(g);
  inputs["q"] = real_matrix_to_json(q.table());
  inputs["target_px"] = c.target_px;
  inputs["target_py"] = c.target_py;
  IProjection proj = iproject(q, c, opts);
  Json results;
  results["objective"] = proj.diagnostics.objective * g.scale();
  results["pmf"] = real_matrix_to_json(proj.pmf.table());
  results["diagnostics"] = to_json(proj.diagnostics);
  emit_json(g, make_report("iproject", inputs, results));
  return 0;
}

int run_qproject(const Globals& g, const std::string& input, const std::string& preset_name) {
  Json inputs = base_inputs(g);
  std::optional<DensityOperator> sigma;
  std::optional<QuantumMarginalConstraint> c;
  std::size_t d_a = 0;
  std::size_t d_b = 0;
  Json j;
  if (!input.empty()) j = read_json_file(input);
  if (preset_name.empty() && j.contains("sigma")) {
    sigma = parse_state(j["sigma"], "/sigma");
    for (const char* key : {"target_A", "target_B", "d_A", "d_B"}) {
      if (!j.contains(key)) throw InputError(std::string("/") + key, "missing field");
    }
    c = QuantumMarginalConstraint{parse_state(j["target_A"], "/target_A"),
                                  parse_state(j["target_B"], "/target_B")};
    if (!j["d_A"].is_number_integer()) throw InputError("/d_A", "expected an integer");
    if (!j["d_B"].is_number_integer()) throw InputError("/d_B", "expected an integer");
    d_a = j["d_A"].get<std::size_t>();
    d_b = j["d_B"].get<std::size_t>();
  } else {
    BipartitePair pair = load_pair(input, preset_name);
    sigma = pair.alt_state();
    c = QuantumMarginalConstraint{pair.null_marginal(Subsystem::A), pair.null_marginal(Subsystem::B)};
    d_a = pair.d_A();
    d_b = pair.d_B();
    if (!preset_name.empty()) inputs["preset"] = preset_name;
  }
  inputs["sigma"] = matrix_to_json(sigma->matrix());
  inputs["target_A"] = matrix_to_json(c->target_A.matrix());
  inputs["target_B"] = matrix_to_json(c->target_B.matrix());
  QProjectOptions opts;
  opts.tol = g.tol;
  QProjection proj = qproject(*sigma, *c, d_a, d_b, opts);
  Json results;
  results["objective"] = proj.diagnostics.objective * g.scale();
  results["state"] = matrix_to_json(proj.state.matrix());
  results["diagnostics"] = to_json(proj.diagnostics);
  emit_json(g, make_report("qproject", inputs, results));
  return 0;
}

// maxmin --------------------------------------------------------------------------------------

int run_maxmin(const Globals& g, const std::string& input, const std::string& preset_name,
               int block_size, int restarts) {
  BipartitePair pair = load_pair(input, preset_name);
  PvmSearchConfig cfg;
  cfg.block_size = block_size;
  cfg.restarts = restarts;
  cfg.seed = g.seed;
  Json inputs = base_inputs(g);
  if (!preset_name.empty()) inputs["preset"] = preset_name;
  inputs["block_size"] = block_size;
  inputs["restarts"] = restarts;
  MaxminResult r = maxmin_finite_n(pair, cfg);
  Json results = to_json(r.report, g.scale());
  results["evaluations"] = r.evaluations;
  results["inner_failures"] = r.inner_failures;
  results["best_restart"] = r.best_restart;
  results["basis_A"] = matrix_to_json(r.best.basis_A().unitary());
  results["basis_B"] = matrix_to_json(r.best.basis_B().unitary());
  emit_json(g, make_report("maxmin", inputs, results));
  return 0;
}

// blowup --------------------------------------------------------------------------------------

struct BlowupArgs {
  int n = 6;
  double rn = 0.5;
  double epsn = 0.0;
  int trials = 5;
  bool bipartite = false;
  bool schedule = false;
  int max_log2_n = 14;
};

Json record_json(const BlowupRecord& r) {
  Json j;
  j["passed"] = r.passed;
  j["precondition_ok"] = r.precondition_ok;
  j["trace_rho_M"] = r.trace_rho_M;
  j["l_n"] = r.l_n;
  j["radius"] = r.radius;
  j["j_size"] = r.j_size;
  j["blown_up_size"] = r.blown_up_size;
  j["mu_min"] = r.mu_min;
  j["log_gamma"] = to_json(r.log_gamma);
  j["concentration_slack"] = r.concentration_slack;
  j["sigma_lhs"] = r.sigma_lhs;
  j["sigma_rhs"] = to_json(r.sigma_rhs);
  j["sigma_slack"] = to_json(r.sigma_slack);
  return j;
}

Json record_json(const BipartiteBlowupRecord& r) {
  Json j;
  j["passed"] = r.passed;
  j["precondition_ok"] = r.precondition_ok;
  j["l_n"] = r.l_n;
  j["radius"] = r.radius;
  j["mu_min"] = r.mu_min;
  j["log_gamma"] = to_json(r.log_gamma);
  j["concentration_slack"] = r.concentration_slack;
  j["sigma_lhs"] = r.sigma_lhs;
  j["sigma_rhs"] = to_json(r.sigma_rhs);
  j["sigma_slack"] = to_json(r.sigma_slack);
  j["joint_slack"] = r.joint_slack;
  j["identity_residual"] = r.identity_residual;
  return j;
}

int run_blowup(const Globals& g, const BlowupArgs& a) {
  Json inputs = base_inputs(g);
  if (a.schedule) {
    // One-bit messages with type I budget 1/2: epsilon_n = (1 - 1/2) / 2^2.
    const double eps = 0.125;
    const double mu = 0.25;
    inputs["max_log2_n"] = a.max_log2_n;
    Json rows = Json::array();
    for (const GammaSchedulePoint& pt : gamma_schedule(a.max_log2_n, 2, mu, eps)) {
      Json row;
      row["n"] = pt.n;
      row["r_n"] = pt.r_n;
      row["l_n"] = pt.l_n;
      row["log_gamma"] = to_json(pt.log_gamma);
      row["log_gamma_over_n"] = to_json(pt.normalized);
      rows.push_back(std::move(row));
    }
    Json results;
    results["d"] = 2;
    results["mu_min"] = mu;
    results["epsilon_n"] = eps;
    results["schedule"] = std::move(rows);
    emit_json(g, make_report("blowup", inputs, results));
    return 0;
  }
  if (a.n < 1) throw InputError("--n", "n must be positive");
  if (a.trials < 1) throw InputError("--trials", "trials must be positive");
  if (a.rn < 0.0) throw InputError("--rn", "r_n must be nonnegative");
  inputs["n"] = a.n;
  inputs["r_n"] = a.rn;
  inputs["epsilon_n"] = a.epsn > 0.0 ? Json(a.epsn) : Json("per trial");
  inputs["trials"] = a.trials;
  inputs["bipartite"] = a.bipartite;
  Rng rng(g.seed);
  Json records = Json::array();
  bool all_passed = true;
  for (int t = 0; t < a.trials; ++t) {
    if (a.bipartite) {
      DensityOperator rho = random_density(4, rng, 0.05);
      DensityOperator sigma = random_density(4, rng, 0.05);
      Matrix ma = random_contraction(2, rng);
      Matrix mb = random_contraction(2, rng);
      DensityOperator ra = partial_trace(rho, 2, 2, Subsystem::A);
      DensityOperator rb = partial_trace(rho, 2, 2, Subsystem::B);
      double eps = a.epsn;
      if (eps <= 0.0) {
        eps = std::min(std::pow((ra.matrix() * ma).trace().real(), a.n),
                       std::pow((rb.matrix() * mb).trace().real(), a.n));
      }
      BipartiteBlowupRecord r =
          verify_blowup_bipartite(rho, 2, 2, ma, mb, sigma, BlowupParams{a.n, eps, a.rn});
      all_passed = all_passed && r.passed;
      records.push_back(record_json(r));
      records.back()["epsilon_n"] = eps;
    } else {
      DensityOperator rho = random_density(2, rng, 0.05);
      DensityOperator sigma = random_density(2, rng, 0.05);
      Matrix m = random_contraction(2, rng);
      double eps = a.epsn > 0.0 ? a.epsn : std::pow((rho.matrix() * m).trace().real(), a.n);
      BlowupRecord r = verify_blowup(rho, ProductContraction{m}, sigma, BlowupParams{a.n, eps, a.rn});
      all_passed = all_passed && r.passed;
      records.push_back(record_json(r));
      records.back()["epsilon_n"] = eps;
    }
  }
  Json results;
  results["all_passed"] = all_passed;
  results["records"] = std::move(records);
  emit_json(g, make_report("blowup", inputs, results));
  return all_passed ? 0 : 1;
}

// simulate ------------------------------------------------------------------------------------

struct SimulateArgs {
  std::string scheme = "one-bit";
  double delta = 0.1;
  std::string mode = "robust";
  std::vector<int> n = {10, 20, 40};
  long long trials = 0;
  std::string input;
  std::string preset;
  int block_size = 1;
};

int run_simulate(const Globals& g, const SimulateArgs& a) {
  if (a.scheme != "one-bit") throw InputError("--scheme", "only the one-bit scheme is available");
  TypicalityRule rule{a.delta, typicality_mode_from_string(a.mode)};
  Json inputs = base_inputs(g);
  inputs["scheme"] = a.scheme;
  inputs["delta"] = a.delta;
  inputs["mode"] = a.mode;
  inputs["n"] = a.n;
  ErrorCurve curve;
  std::optional<JointPmf> p;
  std::optional<JointPmf> q;
  bool quantum = !a.preset.empty();
  Json j;
  if (!quantum) {
    if (a.input.empty()) throw InputError("", "either --input or --preset is required");
    j = read_json_file(a.input);
    quantum = !j.contains("p");
  }
  if (quantum) {
    BipartitePair pair = a.preset.empty() ? parse_pair(j.contains("pair") ? j["pair"] : j,
                                                       j.contains("pair") ? "/pair" : "")
                                          : load_pair("", a.preset);
    LocalPVM pvm = LocalPVM::computational(pair.d_A(), pair.d_B(), a.block_size);
    if (j.contains("pvm")) pvm = parse_pvm(j["pvm"], pair.d_A(), pair.d_B(), "/pvm");
    if (!a.preset.empty()) inputs["preset"] = a.preset;
    inputs["block_size"] = pvm.block_size();
    curve = quantum_frontend(pair, pvm, rule, a.n);
  } else {
    if (!j.contains("q")) throw InputError("/q", "missing field");
    p = parse_pmf(j["p"], "/p");
    q = parse_pmf(j["q"], "/q");
    inputs["p"] = real_matrix_to_json(p->table());
    inputs["q"] = real_matrix_to_json(q->table());
    curve = one_bit_exact(*p, *q, rule, a.n);
  }
  if (g.format == "csv") {
    std::ostringstream out;
    out << "n,copies,alpha,beta,minus_log_beta_over_n\n";
    for (const ErrorPoint& pt : curve.points) {
      out << pt.n << ',' << pt.copies << ',' << csv_value(pt.alpha, 1.0) << ','
          << csv_value(pt.beta, 1.0) << ',' << csv_value(pt.minus_log_beta_over_n, g.scale())
          << '\n';
    }
    emit(g, out.str());
    return 0;
  }
  Json points = Json::array();
  for (const ErrorPoint& pt : curve.points) {
    Json row;
    row["n"] = pt.n;
    row["copies"] = pt.copies;
    row["alpha"] = pt.alpha;
    row["beta"] = pt.beta;
    row["minus_log_beta_over_n"] = to_json(pt.minus_log_beta_over_n, g.scale());
    points.push_back(std::move(row));
  }
  Json results;
  results["method"] = "exact_types";
  results["points"] = std::move(points);
  if (a.trials > 0) {
    if (!p) throw InputError("--trials", "Monte Carlo needs a classical input with p and q");
    inputs["trials"] = a.trials;
    Json mc = Json::array();
    for (std::size_t i = 0; i < a.n.size(); ++i) {
      MonteCarloResult r = one_bit_monte_carlo(*p, *q, rule, a.n[i], a.trials, g.seed + i);
      Json row;
      row["n"] = r.n;
      row["alpha_hat"] = r.alpha_hat;
      row["wilson_low"] = r.wilson_low;
      row["wilson_high"] = r.wilson_high;
      row["note"] = r.beta_note;
      mc.push_back(std::move(row));
    }
    results["monte_carlo"] = std::move(mc);
  }
  emit_json(g, make_report("simulate", inputs, results));
  return 0;
}

// repro ---------------------------------------------------------------------------------------

int run_repro(const Globals& g, const std::vector<std::string>& items) {
  ReproReport r = repro_suite(items);
  if (g.format == "csv") {
    emit(g, to_csv(r));
  } else {
    Json inputs = base_inputs(g);
    inputs["items"] = items;
    emit_json(g, make_report("repro", inputs, to_json(r)));
  }
  return r.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein exponents for distributed quantum hypothesis testing"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", g.tol, "Solver tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_flag("--bits", g.bits, "Report exponents in bits instead of nats");
  app.add_option("-o,--output", g.output, "Output file (default stdout)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  ExponentArgs ea;
  auto* exponent = app.add_subcommand("exponent", "Compute a Stein-exponent expression");
  exponent->add_option("--kind", ea.kind, "zrc, sl, product_alt, cq or discrimination")
      ->check(CLI::IsMember({"zrc", "sl", "product_alt", "cq", "discrimination"}))
      ->capture_default_str();
  exponent->add_option("-i,--input", ea.input, "JSON problem file");
  exponent->add_option("--preset", ea.preset, "Built-in state pair");

  std::string kappa_input;
  auto* kappa = app.add_subcommand("kappa", "Geometric-mean gap of a qubit triple");
  kappa->add_option("-i,--input", kappa_input, "JSON file with psi, r0, r1");

  std::string family = "isotropic";
  std::vector<double> ps = {1.0};
  int d = 2;
  auto* bounds = app.add_subcommand("bounds", "Closed-form isotropic and Werner bounds");
  bounds->add_option("--family", family)->check(CLI::IsMember({"isotropic", "werner"}))->capture_default_str();
  bounds->add_option("--p", ps, "Mixing parameter(s)");
  bounds->add_option("--d", d, "Local dimension")->capture_default_str();

  std::string ip_input;
  auto* ip = app.add_subcommand("iproject", "Classical marginal-constrained projection");
  ip->add_option("-i,--input", ip_input, "JSON file with q and targets");

  std::string qp_input;
  std::string qp_preset;
  auto* qp = app.add_subcommand("qproject", "Quantum marginal-constrained projection");
  qp->add_option("-i,--input", qp_input, "JSON problem file");
  qp->add_option("--preset", qp_preset, "Built-in state pair");

  std::string mm_input;
  std::string mm_preset;
  int mm_block = 1;
  int mm_restarts = 32;
  auto* mm = app.add_subcommand("maxmin", "Finite-block local-measurement exponent");
  mm->add_option("-i,--input", mm_input, "JSON pair file");
  mm->add_option("--preset", mm_preset, "Built-in state pair");
  mm->add_option("--block-size", mm_block)->capture_default_str();
  mm->add_option("--restarts", mm_restarts)->capture_default_str();

  BlowupArgs ba;
  auto* blow = app.add_subcommand("blowup", "Verify the blowing-up inequalities");
  blow->add_option("--n", ba.n)->capture_default_str();
  blow->add_option("--rn", ba.rn)->capture_default_str();
  blow->add_option("--epsn", ba.epsn, "epsilon_n (default tr(rho^n M))");
  blow->add_option("--trials", ba.trials)->capture_default_str();
  blow->add_flag("--bipartite", ba.bipartite);
  blow->add_flag("--schedule", ba.schedule, "Print the normalized gamma-factor schedule");
  blow->add_option("--max-log2-n", ba.max_log2_n)->capture_default_str();

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Exact errors of the one-bit scheme");
  sim->add_option("--scheme", sa.scheme)->capture_default_str();
  sim->add_option("--delta", sa.delta)->capture_default_str();
  sim->add_option("--mode", sa.mode)
      ->check(CLI::IsMember({"robust", "interval", "joint_support"}))
      ->capture_default_str();
  sim->add_option("--n", sa.n, "Sample sizes (blocks for quantum input)");
  sim->add_option("--trials", sa.trials, "Monte Carlo trials for the type I error");
  sim->add_option("-i,--input", sa.input, "JSON file with p and q, or a pair");
  sim->add_option("--preset", sa.preset, "Built-in state pair");
  sim->add_option("--block-size", sa.block_size)->capture_default_str();

  std::vector<std::string> repro_items;
  auto* repro = app.add_subcommand("repro", "Run the built-in reproduction checks");
  repro->add_option("items", repro_items, "Subset of kappa, bounds, product_alt, same_marginals, bell_pairs, convergence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << dump_canonical(error_json("usage", e.what()));
    return 2;
  }

  try {
    if (*exponent) return run_exponent(g, ea);
    if (*kappa) return run_kappa(g, kappa_input);
    if (*bounds) return run_bounds(g, family, ps, d);
    if (*ip) return run_iproject(g, ip_input);
    if (*qp) return run_qproject(g, qp_input, qp_preset);
    if (*mm) return run_maxmin(g, mm_input, mm_preset, mm_block, mm_restarts);
    if (*blow) return run_blowup(g, ba);
    if (*sim) return run_simulate(g, sa);
    if (*repro) return run_repro(g, repro_items);
  } catch (const InputError& e) {
    std::cerr << dump_canonical(error_json("input", e.what(), e.field_path()));
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << dump_canonical(error_json("validation", e.what()));
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << dump_canonical(error_json("dimension", e.what()));
    return 2;
  } catch (const SizeError& e) {
    std::cerr << dump_canonical(error_json("size", e.what()));
    return 2;
  } catch (const std::exception& e) {
    std::cerr << dump_canonical(error_json("computation", e.what()));
    return 1;
  }
  return 2;
}
