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

#include "amlkit/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>
#include <utility>

#include "amlkit/cutting_plane.h"
#include "amlkit/errors.h"
#include "amlkit/nlp_evaluator.h"
#include "amlkit/standard_form.h"
#include "json.hpp"

namespace amlkit {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

MinCostFlowData MinCostFlowData::five_node() {
  MinCostFlowData d;
  d.n = 5;
  d.edges = {{1, 2, 1, 0.5}, {1, 3, 2, 0.4}, {1, 4, 3, 0.6},
             {2, 5, 2, 0.3}, {3, 5, 2, 0.6}, {4, 5, 2, 0.5}};
  return d;
}

MinCostFlowData MinCostFlowData::layered(int32_t n) {
  MinCostFlowData d;
  d.n = n;
  const double cap = 2.0 / (n - 2);
  for (int32_t k = 2; k < n; ++k) {
    d.edges.push_back({1, k, static_cast<double>(1 + k % 7), cap});
    d.edges.push_back({k, n, static_cast<double>(1 + k % 3), 1.0});
  }
  return d;
}

MinCostFlowModel build_mincostflow(const MinCostFlowData& data) {
  MinCostFlowModel out;
  Model& m = out.model;
  for (const auto& e : data.edges) {
    if (e.from < 1 || e.from > data.n || e.to < 1 || e.to > data.n) {
      throw ModelError("edge (" + std::to_string(e.from) + ", " +
                       std::to_string(e.to) + ") references a node outside 1.." +
                       std::to_string(data.n));
    }
    if (!(e.capacity >= 0.0)) throw ModelError("negative edge capacity");
    out.flow.push_back(m.add_variable(0.0, e.capacity));
  }
  const std::size_t ne = data.edges.size();
  for (int32_t j = 2; j < data.n; ++j) {
    QuadExpr row;
    for (std::size_t k = 0; k < ne; ++k) {
      if (data.edges[k].to == j) row.add_term(1.0, out.flow[k]);
      if (data.edges[k].from == j) row.add_term(-1.0, out.flow[k]);
    }
    m.add_constraint(std::move(row), Sense::kEqual, 0.0);
  }
  QuadExpr sink;
  for (std::size_t k = 0; k < ne; ++k) {
    if (data.edges[k].to == data.n) sink.add_term(1.0, out.flow[k]);
  }
  m.add_constraint(std::move(sink), Sense::kEqual, 1.0);
  QuadExpr cost;
  cost.reserve(0, ne);
  for (std::size_t k = 0; k < ne; ++k) {
    cost.add_term(data.edges[k].cost, out.flow[k]);
  }
  m.set_objective(ObjectiveSense::kMinimize, std::move(cost));
  return out;
}

LqcpParams LqcpParams::resolved() const {
  LqcpParams p = *this;
  if (p.dx == 0.0) p.dx = 1.0 / p.n;
  if (p.dt == 0.0) p.dt = 1.0 / p.m;
  if (p.h2 == 0.0) p.h2 = p.dx * p.dx;
  if (p.target.empty()) {
    p.target.resize(p.n + 1);
    for (int32_t j = 0; j <= p.n; ++j) {
      const double s = j * p.dx;
      p.target[j] = 0.5 * (1.0 - s * s);
    }
  }
  return p;
}

LqcpModel build_lqcp(const LqcpParams& params) {
  if (params.m < 2 || params.n < 2) {
    throw ModelError("lqcp needs m, n >= 2");
  }
  LqcpModel out;
  out.params = params.resolved();
  const LqcpParams& p = out.params;
  if (!(p.a > 0.0 && p.dx > 0.0 && p.dt > 0.0 && p.h2 > 0.0)) {
    throw ModelError("lqcp needs a, dx, dt, h2 > 0");
  }
  if (static_cast<int32_t>(p.target.size()) != p.n + 1) {
    throw ModelError("lqcp target must have n + 1 entries");
  }
  const int32_t m = p.m, n = p.n;
  Model& model = out.model;
  out.y.resize(m + 1);
  for (int32_t i = 0; i <= m; ++i) {
    out.y[i] = model.add_variables(n + 1, 0.0, 1.0);
  }
  out.u = model.add_variables(m + 1, -1.0, 1.0);
  const auto& y = out.y;
  const auto& u = out.u;

  QuadExpr obj;
  obj.reserve(n + 1 + m, n + 1);
  for (int32_t j = 0; j <= n; ++j) {
    const double w = 0.25 * p.dx * (j == 0 || j == n ? 1.0 : 2.0);
    const double yt = p.target[j];
    obj.add_term(w, y[m][j], y[m][j]);
    obj.add_term(-2.0 * w * yt, y[m][j]);
    obj.add_constant(w * yt * yt);
  }
  for (int32_t i = 1; i <= m; ++i) {
    const double w = 0.25 * p.a * p.dt * (i == m ? 1.0 : 2.0);
    obj.add_term(w, u[i], u[i]);
  }
  model.set_objective(ObjectiveSense::kMinimize, std::move(obj));

  const double inv_dt = 1.0 / p.dt;
  const double k = 1.0 / (2.0 * p.h2);
  for (int32_t i = 0; i < m; ++i) {
    for (int32_t j = 1; j < n; ++j) {
      QuadExpr row;
      row.reserve(0, 8);
      row.add_term(inv_dt, y[i + 1][j]);
      row.add_term(-inv_dt, y[i][j]);
      row.add_term(-k, y[i][j - 1]);
      row.add_term(2.0 * k, y[i][j]);
      row.add_term(-k, y[i][j + 1]);
      row.add_term(-k, y[i + 1][j - 1]);
      row.add_term(2.0 * k, y[i + 1][j]);
      row.add_term(-k, y[i + 1][j + 1]);
      model.add_constraint(std::move(row), Sense::kEqual, 0.0);
    }
  }
  for (int32_t j = 0; j <= n; ++j) {
    model.add_constraint(QuadExpr(AffExpr(y[0][j])), Sense::kEqual, 0.0);
  }
  for (int32_t i = 0; i <= m; ++i) {
    QuadExpr row;
    row.add_term(1.0, y[i][2]);
    row.add_term(-4.0, y[i][1]);
    row.add_term(3.0, y[i][0]);
    model.add_constraint(std::move(row), Sense::kEqual, 0.0);
  }
  const double c = 1.0 / (2.0 * p.dx);
  for (int32_t i = 0; i <= m; ++i) {
    QuadExpr row;
    row.add_term(c, y[i][n - 2]);
    row.add_term(-4.0 * c, y[i][n - 1]);
    row.add_term(3.0 * c, y[i][n]);
    row.add_term(-1.0, u[i]);
    row.add_term(1.0, y[i][n]);
    model.add_constraint(std::move(row), Sense::kEqual, 0.0);
  }
  return out;
}

FacModel build_fac(const FacParams& params) {
  if (params.g < 1 || params.f < 1) throw ModelError("fac needs g, f >= 1");
  FacModel out;
  const int32_t g = params.g;
  for (int32_t i = 0; i <= g; ++i) {
    for (int32_t j = 0; j <= g; ++j) {
      out.customers.push_back({static_cast<double>(i) / g,
                               static_cast<double>(j) / g});
    }
  }
  double big_m = 0.0;
  for (const auto& a : out.customers) {
    for (const auto& b : out.customers) {
      big_m = std::max(big_m, std::hypot(a[0] - b[0], a[1] - b[1]));
    }
  }
  out.big_m = big_m;

  Model& m = out.model;
  out.d = m.add_variable(0.0, kInf);
  for (int32_t f = 0; f < params.f; ++f) {
    out.y.push_back({m.add_variable(0.0, 1.0), m.add_variable(0.0, 1.0)});
  }
  const int32_t nc = static_cast<int32_t>(out.customers.size());
  out.z.resize(nc);
  for (int32_t c = 0; c < nc; ++c) {
    out.z[c] = m.add_variables(params.f, 0.0, 1.0, true);
  }
  for (int32_t c = 0; c < nc; ++c) {
    QuadExpr row;
    for (VarId z : out.z[c]) row.add_term(1.0, z);
    m.add_constraint(std::move(row), Sense::kEqual, 1.0);
  }
  for (int32_t c = 0; c < nc; ++c) {
    for (int32_t f = 0; f < params.f; ++f) {
      AffExpr t(big_m);
      t.add_term(1.0, out.d);
      t.add_term(-big_m, out.z[c][f]);
      std::vector<AffExpr> x(2);
      for (int k = 0; k < 2; ++k) {
        x[k] = AffExpr(out.customers[c][k]);
        x[k].add_term(-1.0, out.y[f][k]);
      }
      m.add_cone(std::move(t), std::move(x));
    }
  }
  QuadExpr obj;
  obj.add_term(1.0, out.d);
  m.set_objective(ObjectiveSense::kMinimize, std::move(obj));
  return out;
}

ClnlbeamParams ClnlbeamParams::resolved() const {
  ClnlbeamParams p = *this;
  if (p.h == 0.0) p.h = 1.0 / p.n;
  return p;
}

ClnlbeamModel build_clnlbeam(const ClnlbeamParams& params) {
  if (params.n < 2) throw ModelError("clnlbeam needs n >= 2");
  ClnlbeamModel out;
  out.params = params.resolved();
  const int32_t n = out.params.n;
  const double h = out.params.h;
  const double alpha = out.params.alpha;
  Model& m = out.model;
  out.t = m.add_variables(n + 1, -1.0, 1.0);
  out.x = m.add_variables(n + 1, -0.05, 0.05);
  out.u = m.add_variables(n + 1);
  m.set_bounds(out.x[0], 0.0, 0.0);
  m.set_bounds(out.x[n], 0.0, 0.0);
  m.set_bounds(out.t[0], 0.0, 0.0);
  m.set_bounds(out.t[n], 0.0, 0.0);

  {
    GraphBuilder b(m);
    std::vector<Ex> terms;
    terms.reserve(n);
    for (int32_t i = 0; i < n; ++i) {
      const Ex u0 = b.var(out.u[i]), u1 = b.var(out.u[i + 1]);
      const Ex t0 = b.var(out.t[i]), t1 = b.var(out.t[i + 1]);
      terms.push_back(0.5 * h * (b.pow(u1, 2.0) + b.pow(u0, 2.0)) +
                      0.5 * alpha * h * (b.call("cos", {t1}) + b.call("cos", {t0})));
    }
    m.set_nl_objective(ObjectiveSense::kMinimize, b.build(b.sum(terms)));
  }
  const double w = 1.0 / (2.0 * n);
  for (int32_t i = 0; i < n; ++i) {
    GraphBuilder b(m);
    const Ex t0 = b.var(out.t[i]), t1 = b.var(out.t[i + 1]);
    const Ex e = b.var(out.x[i + 1]) - b.var(out.x[i]) -
                 w * (b.call("sin", {t1}) + b.call("sin", {t0}));
    m.add_nl_constraint(b.build(e), Sense::kEqual, 0.0);
  }
  for (int32_t i = 0; i < n; ++i) {
    QuadExpr row;
    row.add_term(1.0, out.t[i + 1]);
    row.add_term(-1.0, out.t[i]);
    row.add_term(-w, out.u[i + 1]);
    row.add_term(-w, out.u[i]);
    m.add_constraint(std::move(row), Sense::kEqual, 0.0);
  }
  return out;
}

QuadExampleModel build_quadexample(int32_t d) {
  if (d < 1) throw ModelError("quadexample needs d >= 1");
  QuadExampleModel out;
  Model& m = out.model;
  out.x.resize(d);
  for (int32_t i = 0; i < d; ++i) out.x[i] = m.add_variables(d, 0.0, 1.0);
  const auto& x = out.x;
  const std::size_t terms = static_cast<std::size_t>(d) * d;
  QuadExpr q = expr_sum(terms, [&](QuadExpr& acc) {
    acc.add_constant(1.0);
    for (int32_t i = 1; i <= d; ++i) {
      for (int32_t j = 1; j <= d; ++j) {
        const double w = std::fabs(static_cast<double>(j - i));
        acc.add_term(-w, x[i - 1][j - 1], x[0][j - 1]);
        acc.add_term(w, x[0][j - 1]);
      }
    }
  });
  m.set_objective(ObjectiveSense::kMinimize, std::move(q));
  return out;
}

L2BallModel build_l2ball(int32_t n) {
  if (n < 1) throw ModelError("l2ball needs n >= 1");
  L2BallModel out;
  Model& m = out.model;
  out.x = m.add_variables(n, -1.0, 1.0);
  QuadExpr obj;
  std::vector<AffExpr> xs;
  for (VarId v : out.x) {
    obj.add_term(1.0, v);
    xs.emplace_back(v);
  }
  m.set_objective(ObjectiveSense::kMaximize, std::move(obj));
  m.add_cone(AffExpr(1.0), std::move(xs));
  return out;
}

// ---------------------------------------------------------------------------
// Harness

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known |= k == key;
    if (!known) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

double number(const nlohmann::json& j, const char* key) {
  if (!j.at(key).is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

}  // namespace

BenchConfig parse_bench_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"lqcp", "clnlbeam", "threads"}, "config");
  BenchConfig c;
  if (j.contains("lqcp")) {
    const auto& l = j["lqcp"];
    check_keys(l, {"a", "dx", "dt", "h2"}, "lqcp");
    if (l.contains("a")) c.lqcp.a = number(l, "a");
    if (l.contains("dx")) c.lqcp.dx = number(l, "dx");
    if (l.contains("dt")) c.lqcp.dt = number(l, "dt");
    if (l.contains("h2")) c.lqcp.h2 = number(l, "h2");
  }
  if (j.contains("clnlbeam")) {
    const auto& l = j["clnlbeam"];
    check_keys(l, {"alpha", "h"}, "clnlbeam");
    if (l.contains("alpha")) c.clnlbeam.alpha = number(l, "alpha");
    if (l.contains("h")) c.clnlbeam.h = number(l, "h");
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer() || j["threads"].get<int>() < 1) {
      throw ConfigError("'threads' must be a positive integer");
    }
    c.threads = j["threads"].get<int32_t>();
  }
  return c;
}

std::vector<double> interior_point(const Model& model) {
  std::vector<double> x(model.num_vars());
  for (int32_t j = 0; j < model.num_vars(); ++j) {
    const double lb = model.lower_bounds()[j], ub = model.upper_bounds()[j];
    const bool fl = std::isfinite(lb), fu = std::isfinite(ub);
    x[j] = fl && fu ? 0.5 * (lb + ub) : fl ? lb + 1.0 : fu ? ub - 1.0 : 0.5;
  }
  return x;
}

namespace {

Model build_family(const BenchCase& c, const BenchConfig& config) {
  const std::string& f = c.family;
  const int32_t size = static_cast<int32_t>(c.size);
  if (f == "mincostflow") {
    if (size == 0) return build_mincostflow(MinCostFlowData::five_node()).model;
    if (size < 3) throw ModelError("mincostflow needs at least 3 nodes");
    return build_mincostflow(MinCostFlowData::layered(size)).model;
  }
  if (f == "lqcp") {
    LqcpParams p = config.lqcp;
    p.m = p.n = size;
    return build_lqcp(p).model;
  }
  if (f == "fac") return build_fac({size, 2}).model;
  if (f == "clnlbeam") {
    ClnlbeamParams p = config.clnlbeam;
    p.n = size;
    return build_clnlbeam(p).model;
  }
  if (f == "quadexample") return build_quadexample(size).model;
  if (f == "l2ball") return build_l2ball(size).model;
  throw ModelError("unknown family '" + f + "'");
}

}  // namespace

BenchRow run_bench_case(const BenchCase& c, const BenchConfig& config) {
  BenchRow row;
  row.family = c.family;
  row.size = c.size;

  auto t0 = Clock::now();
  Model model = build_family(c, config);
  row.build_ms = ms_since(t0);

  const std::vector<double> x = interior_point(model);
  const bool has_cones = model.num_cones() > 0;
  if (has_cones) {
    t0 = Clock::now();
    Relaxation rel = make_relaxation(model);
    row.extract_ms = ms_since(t0);
    std::vector<double> point = interior_point(rel.model);
    std::vector<double> grad(rel.model.num_vars(), 0.0);
    t0 = Clock::now();
    for (int round = 0; round < 3; ++round) {
      for (auto& g : rel.generators) g->evaluate(point, grad);
    }
    row.eval3_ms = ms_since(t0);
    return row;
  }

  t0 = Clock::now();
  if (model.has_nonlinear()) {
    NlpEvaluator probe(model);
  } else {
    const StandardForm sf = to_standard_form(model);
  }
  row.extract_ms = ms_since(t0);

  const NlpEvaluator ev(model);
  NlpWorkspace ws;
  std::vector<double> grad(model.num_vars());
  std::vector<double> jac(ev.jacobian_structure().size());
  std::vector<double> hess(ev.hessian_structure().size());
  std::vector<double> lambda(ev.num_rows(), 1.0);
  t0 = Clock::now();
  for (int round = 0; round < 3; ++round) {
    ev.objective_gradient(x, ws, grad);
    ev.jacobian(x, ws, jac);
    ev.hessian_lagrangian(x, 1.0, lambda, ws, hess);
  }
  row.eval3_ms = ms_since(t0);
  return row;
}

std::vector<BenchRow> timing_harness(std::span<const BenchCase> cases,
                                     const BenchConfig& config) {
  std::vector<BenchRow> rows(cases.size());
  int32_t threads = std::max(1, config.threads);
  if (const char* env = std::getenv("AMLKIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, cap);
  }
  threads = std::min<int32_t>(threads, static_cast<int32_t>(cases.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      rows[i] = run_bench_case(cases[i], config);
    }
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cases.size());
  std::vector<std::thread> pool;
  for (int32_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cases.size(); i = next++) {
        try {
          rows[i] = run_bench_case(cases[i], config);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "family,size,build_ms,extract_ms,eval3_ms\n";
  char buf[128];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.3f", r.build_ms,
                  r.extract_ms, r.eval3_ms);
    out << r.family << ',' << r.size << ',' << buf << '\n';
  }
}

}  // namespace amlkit
