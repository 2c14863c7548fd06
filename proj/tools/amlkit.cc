// Copyright 2026 The amlkit Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// amlkit command-line front end.
//
//   amlkit generate <family> [sizes] [--out FILE] [--dump-coloring]
//   amlkit solve    <family> | --file FORM.json [--method M] [--trace]
//   amlkit check    <family> | fig4 [--seed S]
//   amlkit bench    [--family a,b] [--sizes 100,200] [--out FILE]
//
// Exit codes: 0 success, 1 failed check or runtime error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amlkit/bench.h"
#include "amlkit/branch_and_bound.h"
#include "amlkit/cutting_plane.h"
#include "amlkit/derivative_check.h"
#include "amlkit/errors.h"
#include "amlkit/hessian_structure.h"
#include "amlkit/nlp_evaluator.h"
#include "amlkit/simplex.h"
#include "amlkit/standard_form.h"
#include "json.hpp"

namespace {

using namespace amlkit;

constexpr int kUsage = 2;
constexpr int kFailure = 1;

struct Args {
  std::string family;
  std::string positional;
  std::optional<int> n, m, g, f, d;
  double tol = 1e-6;
  bool tol_set = false;
  uint64_t seed = 1;
  std::string out;
  std::string method = "auto";
  bool trace = false;
  bool dump_coloring = false;
  bool use_default = false;
  std::string config;
  std::string file;
  std::string sweep;
  std::string sizes;
  bool corrupt = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int positive(const std::optional<int>& v, int fallback, int minimum,
             const char* flag) {
  const int x = v.value_or(fallback);
  if (x < minimum) {
    throw UsageError(std::string("--") + flag + " must be at least " +
                     std::to_string(minimum));
  }
  return x;
}

BenchConfig load_config(const Args& a) {
  if (a.config.empty()) return {};
  std::ifstream in(a.config);
  if (!in) throw UsageError("cannot read config file " + a.config);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bench_config(ss.str());
}

Model build_model(const Args& a) {
  const BenchConfig cfg = load_config(a);
  const std::string& f = a.family;
  if (f == "mincostflow") {
    if (a.n) {
      return build_mincostflow(
                 MinCostFlowData::layered(positive(a.n, 0, 3, "n")))
          .model;
    }
    return build_mincostflow(MinCostFlowData::five_node()).model;
  }
  if (f == "lqcp") {
    LqcpParams p = cfg.lqcp;
    p.n = positive(a.n, 4, 2, "n");
    p.m = positive(a.m, p.n, 2, "m");
    if (p.n > 2000 || p.m > 2000) throw UsageError("lqcp sizes are capped at 2000");
    return build_lqcp(p).model;
  }
  if (f == "fac") {
    return build_fac({positive(a.g, 1, 1, "g"), positive(a.f, 1, 1, "f")}).model;
  }
  if (f == "clnlbeam") {
    ClnlbeamParams p = cfg.clnlbeam;
    p.n = positive(a.n, 5, 2, "n");
    return build_clnlbeam(p).model;
  }
  if (f == "quadexample") return build_quadexample(positive(a.d, 3, 1, "d")).model;
  if (f == "l2ball") return build_l2ball(positive(a.n, 2, 1, "n")).model;
  throw UsageError("unknown family '" + f +
                   "' (mincostflow, lqcp, fac, clnlbeam, quadexample, l2ball)");
}

void emit(const Args& a, const std::string& text) {
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw UsageError("cannot write " + a.out);
  out << text;
}

std::string coloring_text(const Model& model) {
  const std::vector<ExprGraph> graphs = model_graphs(model);
  std::vector<const ExprGraph*> curved;
  for (const ExprGraph& g : graphs) {
    if (!g.has_user_calls() && has_curvature(g)) curved.push_back(&g);
  }
  const SparsityPattern p = detect_sparsity(curved, model.num_vars());
  return describe(p, color(p));
}

// Structure dump for models the standard form cannot hold.
std::string nlp_json(const Model& model) {
  const NlpEvaluator ev(model);
  nlohmann::ordered_json j;
  j["num_vars"] = model.num_vars();
  auto bound = [](double v) -> nlohmann::ordered_json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  nlohmann::ordered_json lb = nlohmann::ordered_json::array();
  nlohmann::ordered_json ub = nlohmann::ordered_json::array();
  for (int32_t i = 0; i < model.num_vars(); ++i) {
    lb.push_back(bound(model.lower_bounds()[i]));
    ub.push_back(bound(model.upper_bounds()[i]));
  }
  j["lb"] = lb;
  j["ub"] = ub;
  j["m_g"] = ev.dims().m_g;
  j["m_h"] = ev.dims().m_h;
  j["jacobian"] = ev.jacobian_structure();
  j["hessian"] = ev.hessian_structure();
  return j.dump(1) + "\n";
}

int cmd_generate(const Args& a) {
  const Model model = build_model(a);
  if (a.dump_coloring) std::cout << coloring_text(model);
  if (a.dump_coloring && a.out.empty()) return 0;
  emit(a, model.has_nonlinear() ? nlp_json(model)
                                : to_json(to_standard_form(model)));
  return 0;
}

SolveResult solve_model(const Model& model, const Args& a) {
  std::string method = a.method;
  bool curved = model.num_cones() > 0 || model.has_nonlinear() ||
                !canonicalize(model.objective()).is_affine();
  for (const Constraint& c : model.constraints()) {
    if (const auto* s = std::get_if<ScalarConstraint>(&c)) {
      curved |= !canonicalize(s->body).is_affine();
    }
  }
  bool integer = false;
  for (bool b : model.integer_flags()) integer |= b;
  if (method == "auto") {
    method = integer ? "bnb" : curved ? "cutting-plane" : "simplex";
  }
  if (method == "simplex") {
    if (curved) {
      throw UsageError("--method simplex needs a linear model; use cutting-plane");
    }
    Model copy = model;
    SolverSession session(copy);
    return session.solve();
  }
  if (method == "cutting-plane") {
    CuttingPlaneOptions o;
    o.tol = a.tol;
    return cutting_plane_solve(model, o);
  }
  if (method == "bnb") {
    BranchAndBoundOptions o;
    if (a.tol_set) o.cut_tol = a.tol;
    return branch_and_bound(model, o);
  }
  throw UsageError("unknown method '" + method +
                   "' (simplex, cutting-plane, bnb)");
}

Model load_or_build(const Args& a) {
  if (a.file.empty()) return build_model(a);
  std::ifstream in(a.file);
  if (!in) throw UsageError("cannot read " + a.file);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_standard_form(standard_form_from_json(ss.str()));
}

int cmd_sweep(Args a) {
  const auto eq = a.sweep.find('=');
  if (eq == std::string::npos) {
    throw UsageError("--sweep expects NAME=v1,v2,...");
  }
  const std::string name = a.sweep.substr(0, eq);
  std::vector<std::string> values;
  std::stringstream vs(a.sweep.substr(eq + 1));
  for (std::string v; std::getline(vs, v, ',');) values.push_back(v);
  std::ostringstream csv;
  csv << "param,value,status,objective,pivots,cuts,nodes\n";
  for (const std::string& v : values) {
    try {
      if (name == "tol") {
        a.tol = std::stod(v);
        a.tol_set = true;
      } else {
        const int x = std::stoi(v);
        if (name == "n") a.n = x;
        else if (name == "m") a.m = x;
        else if (name == "g") a.g = x;
        else if (name == "f") a.f = x;
        else if (name == "d") a.d = x;
        else throw UsageError("cannot sweep '" + name + "'");
      }
    } catch (const std::logic_error&) {
      throw UsageError("bad sweep value '" + v + "'");
    }
    const SolveResult r = solve_model(load_or_build(a), a);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", r.objective);
    csv << name << ',' << v << ',' << status_name(r.status) << ',' << buf
        << ',' << r.pivots << ',' << r.cuts << ',' << r.nodes << '\n';
  }
  emit(a, csv.str());
  return 0;
}

int cmd_solve(const Args& a) {
  if (!a.sweep.empty()) return cmd_sweep(a);
  const Model model = load_or_build(a);
  const SolveResult r = solve_model(model, a);
  if (a.trace) {
    for (const TraceEntry& t : r.trace) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "iteration %d objective %.10g cuts %d\n",
                    t.iteration, t.objective, t.cuts);
      std::cerr << buf;
    }
  }
  emit(a, to_json(r));
  return 0;
}

int check_fig4(const Args& a) {
  SparsityPattern p;
  p.n = 5;
  p.entries = {{0, 0}, {0, 1}, {0, 3}, {1, 1}, {1, 2}, {2, 2}, {3, 3}, {4, 4}};
  const Coloring c = color(p);
  if (a.dump_coloring) std::cout << describe(p, c);
  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> h(5, std::vector<double>(5, 0.0));
  for (const auto& [i, j] : p.entries) h[i][j] = h[j][i] = u(rng);
  std::vector<double> products(static_cast<std::size_t>(c.num_colors) * 5, 0.0);
  const auto seeds = c.seeds();
  for (int32_t k = 0; k < c.num_colors; ++k) {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) products[k * 5 + i] += h[i][j] * seeds[k][j];
    }
  }
  const std::vector<double> rec = recover(p, c, products);
  double err = 0.0;
  for (std::size_t e = 0; e < p.entries.size(); ++e) {
    err = std::max(err, std::fabs(rec[e] - h[p.entries[e].first][p.entries[e].second]));
  }
  if (a.corrupt && !rec.empty()) err += 1.0;
  const bool ok = verify_acyclic(p, c.color) && err <= 1e-12;
  std::printf("colors=%d, recovery %s (max_abs_err=%.3g)\n", c.num_colors,
              ok ? "exact" : "FAILED", err);
  return ok ? 0 : kFailure;
}

int cmd_check(const Args& a) {
  if (a.family == "fig4") return check_fig4(a);
  const Model model = build_model(a);
  if (a.dump_coloring) std::cout << coloring_text(model);
  DerivativeCheckOptions o;
  o.seed = a.seed;
  o.corrupt_gradient = a.corrupt;
  const DerivativeReport r = check_derivatives(model, o);
  std::printf("graphs: %d, points: %d\n", r.graphs, r.points);
  std::printf("errors: gradient=%.3g hvp=%.3g directional=%.3g recovery=%.3g\n",
              r.max_gradient_error, r.max_hvp_error, r.max_directional_error,
              r.max_hessian_error);
  std::printf("hessian: %s, colors=%d, max_fd_err%s1e-6\n",
              r.hessian_diagonal ? "diagonal" : "general", r.colors,
              r.max_gradient_error < kGradientTol ? "<" : ">=");
  const std::string fail = r.failure();
  if (!fail.empty()) {
    std::printf("check failed: %s\n", fail.c_str());
    return kFailure;
  }
  std::printf("check: ok\n");
  return 0;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string v; std::getline(ss, v, ',');) {
    if (!v.empty()) out.push_back(v);
  }
  return out;
}

int cmd_bench(const Args& a) {
  BenchConfig cfg = load_config(a);
  std::vector<std::string> families =
      split(a.family.empty() ? "quadexample" : a.family);
  std::vector<int64_t> sizes;
  for (const std::string& s : split(a.sizes)) {
    try {
      sizes.push_back(std::stoll(s));
    } catch (const std::logic_error&) {
      throw UsageError("bad size '" + s + "'");
    }
  }
  if (sizes.empty() && a.n) sizes.push_back(*a.n);
  if (sizes.empty() && a.d) sizes.push_back(*a.d);
  if (sizes.empty()) sizes = {100, 200, 400};
  std::vector<BenchCase> cases;
  for (const std::string& f : families) {
    for (int64_t s : sizes) {
      if (s < 0) throw UsageError("sizes must be non-negative");
      cases.push_back({f, s});
    }
  }
  const std::vector<BenchRow> rows = timing_harness(cases, cfg);
  std::ostringstream csv;
  write_csv(csv, rows);
  emit(a, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"amlkit: algebraic modeling toolkit"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* sub) {
    sub->add_option("model", a.positional, "Model family");
    sub->add_option("--family", a.family, "Model family (or comma list for bench)");
    sub->add_option("--n", a.n, "Size n (lqcp space steps, clnlbeam, l2ball)");
    sub->add_option("--m", a.m, "Size m (lqcp time steps; default n)");
    sub->add_option("--g", a.g, "fac grid size (default 1)");
    sub->add_option("--f", a.f, "fac facility count (default 1)");
    sub->add_option("--d", a.d, "quadexample dimension (default 3)");
    sub->add_option("--seed", a.seed, "Seed for randomized checks (default 1)");
    sub->add_option("--out", a.out, "Output file (default stdout)");
    sub->add_option("--config", a.config, "JSON parameter overrides");
    sub->add_flag("--default", a.use_default, "Use the default instance data");
    sub->add_flag("--dump-coloring", a.dump_coloring,
                  "Print the Hessian coloring (k, classes, seeds, plan)");
  };

  CLI::App* gen = app.add_subcommand("generate", "Write a standard-form JSON dump");
  common(gen);
  CLI::App* solve = app.add_subcommand("solve", "Solve and print a solution JSON");
  common(solve);
  solve->add_option("--file", a.file, "Standard-form JSON to solve");
  solve->add_option("--method", a.method, "simplex | cutting-plane | bnb")
      ->check(CLI::IsMember({"auto", "simplex", "cutting-plane", "bnb"}));
  solve->add_option("--tol", a.tol, "Cut tolerance (default 1e-6)")
      ->each([&](const std::string&) { a.tol_set = true; });
  solve->add_flag("--trace", a.trace, "Per-iteration objective and cuts on stderr");
  solve->add_option("--sweep", a.sweep, "NAME=v1,v2,...: one CSV row per solve");
  CLI::App* check = app.add_subcommand("check", "Verify derivatives and colorings");
  common(check);
  check->add_flag("--corrupt-derivative", a.corrupt)->group("");
  CLI::App* bench = app.add_subcommand("bench", "Timing harness CSV");
  common(bench);
  bench->add_option("--sizes", a.sizes, "Comma-separated sizes (default 100,200,400)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (a.family.empty()) a.family = a.positional;
  try {
    if (!bench->parsed() && a.family.empty() &&
        !(solve->parsed() && !a.file.empty())) {
      throw UsageError("a model family is required");
    }
    if (gen->parsed()) return cmd_generate(a);
    if (solve->parsed()) return cmd_solve(a);
    if (check->parsed()) return cmd_check(a);
    return cmd_bench(a);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
