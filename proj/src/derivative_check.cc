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

#include "amlkit/derivative_check.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <variant>

#include "amlkit/autodiff.h"
#include "amlkit/model.h"
#include "amlkit/nlp_evaluator.h"

namespace amlkit {
namespace {

Ex affine_ex(GraphBuilder& b, const AffExpr& e) {
  std::vector<Ex> terms;
  for (const AffTerm& t : e.terms()) {
    terms.push_back(t.coeff == 1.0 ? b.var(t.var) : t.coeff * b.var(t.var));
  }
  if (e.constant() != 0.0 || terms.empty()) {
    terms.push_back(b.constant(e.constant()));
  }
  return b.sum(terms);
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

std::string DerivativeReport::failure() const {
  if (!(max_gradient_error <= kGradientTol)) return "gradient";
  if (!(max_hvp_error <= kHvpTol)) return "hvp";
  if (!(max_directional_error <= kDirectionalTol)) return "directional";
  if (!coloring_valid) return "coloring";
  if (!(max_hessian_error <= kHessianTol)) return "hessian";
  return {};
}

std::vector<ExprGraph> model_graphs(const Model& model) {
  std::vector<ExprGraph> out;
  out.push_back(model.nl_objective() ? *model.nl_objective()
                                     : to_graph(model, model.objective()));
  for (const Constraint& c : model.constraints()) {
    if (const auto* sc = std::get_if<ScalarConstraint>(&c)) {
      out.push_back(to_graph(model, sc->body));
      continue;
    }
    const auto& cone = std::get<ConeConstraint>(c);
    GraphBuilder b(model);
    std::vector<Ex> squares;
    for (const AffExpr& e : cone.x) squares.push_back(b.pow(affine_ex(b, e), 2.0));
    const Ex norm = b.call("sqrt", {b.sum(squares)});
    out.push_back(b.build(norm - affine_ex(b, cone.t)));
  }
  for (const NlConstraint& c : model.nl_constraints()) out.push_back(c.body);
  return out;
}

DerivativeReport check_derivatives(const Model& model,
                                   const DerivativeCheckOptions& options) {
  DerivativeReport rep;
  const int32_t n = model.num_vars();
  const auto params = model.parameters();
  const std::vector<ExprGraph> graphs = model_graphs(model);
  rep.graphs = static_cast<int32_t>(graphs.size());
  rep.points = options.points;

  std::vector<const ExprGraph*> curved;
  for (const ExprGraph& g : graphs) {
    if (!g.has_user_calls() && has_curvature(g)) curved.push_back(&g);
  }
  const SparsityPattern pattern = detect_sparsity(curved, n);
  const Coloring coloring = color(pattern);
  rep.colors = coloring.num_colors;
  rep.hessian_diagonal = pattern.is_diagonal();
  rep.coloring_valid = verify_acyclic(pattern, coloring.color);
  std::vector<std::vector<int32_t>> incident(n);
  for (std::size_t e = 0; e < pattern.entries.size(); ++e) {
    incident[pattern.entries[e].first].push_back(static_cast<int32_t>(e));
    if (pattern.entries[e].second != pattern.entries[e].first) {
      incident[pattern.entries[e].second].push_back(static_cast<int32_t>(e));
    }
  }
  std::vector<int32_t> active;
  {
    const std::vector<char> a = pattern.active();
    for (int32_t v = 0; v < n; ++v) {
      if (a[v]) active.push_back(v);
    }
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ReverseWorkspace ws;
  std::vector<double> x(n), d(n), grad(n), fd(n), hv(n), gp(n), gm(n), xs(n);

  for (int32_t p = 0; p < options.points; ++p) {
    for (int32_t j = 0; j < n; ++j) {
      const double lb = model.lower_bounds()[j], ub = model.upper_bounds()[j];
      const double r = unit(rng);
      if (std::isfinite(lb) && std::isfinite(ub)) {
        x[j] = lb + r * (ub - lb);
      } else if (std::isfinite(lb)) {
        x[j] = lb + 2.0 * r;
      } else if (std::isfinite(ub)) {
        x[j] = ub - 2.0 * r;
      } else {
        x[j] = 2.0 * r - 1.0;
      }
      d[j] = 2.0 * unit(rng) - 1.0;
    }

    for (const ExprGraph& g : graphs) {
      const auto vars = g.variables();
      std::fill(grad.begin(), grad.end(), 0.0);
      gradient(g, x, params, ws, grad);
      if (options.corrupt_gradient && !vars.empty()) {
        grad[vars[0]] += 1e-3 * (1.0 + std::fabs(grad[vars[0]]));
      }
      double gerr = 0.0, gnorm = 0.0;
      xs = x;
      for (int32_t v : vars) {
        const double h = 1e-6 * (1.0 + std::fabs(x[v]));
        xs[v] = x[v] + h;
        const double fp = evaluate(g, xs, params);
        xs[v] = x[v] - h;
        const double fm = evaluate(g, xs, params);
        xs[v] = x[v];
        gerr = std::max(gerr, std::fabs((fp - fm) / (2.0 * h) - grad[v]));
        gnorm = std::max(gnorm, std::fabs(grad[v]));
      }
      rep.max_gradient_error =
          std::max(rep.max_gradient_error, gerr / (1.0 + gnorm));

      double gd = 0.0;
      for (int32_t v : vars) gd += grad[v] * d[v];
      const double fwd = forward_dual(g, x, d, params).second;
      rep.max_directional_error = std::max(
          rep.max_directional_error, std::fabs(fwd - gd) / (1.0 + std::fabs(gd)));

      if (g.has_user_calls()) continue;
      hessian_vector_product(g, x, d, params, ws, hv);
      const double eps = 1e-6 * (1.0 + inf_norm(x));
      for (int32_t j = 0; j < n; ++j) xs[j] = x[j] + eps * d[j];
      std::fill(gp.begin(), gp.end(), 0.0);
      gradient(g, xs, params, ws, gp);
      for (int32_t j = 0; j < n; ++j) xs[j] = x[j] - eps * d[j];
      std::fill(gm.begin(), gm.end(), 0.0);
      gradient(g, xs, params, ws, gm);
      double herr = 0.0, hnorm = 0.0;
      for (int32_t v : vars) {
        herr = std::max(herr, std::fabs((gp[v] - gm[v]) / (2.0 * eps) - hv[v]));
        hnorm = std::max(hnorm, std::fabs(hv[v]));
      }
      rep.max_hvp_error = std::max(rep.max_hvp_error, herr / (1.0 + hnorm));
    }

    // Colored recovery of a random nonnegative combination.
    if (curved.empty()) continue;
    std::vector<double> w(curved.size());
    for (double& wi : w) wi = 0.5 + unit(rng);
    const int32_t k = coloring.num_colors;
    std::vector<double> products(static_cast<std::size_t>(k) * n, 0.0);
    const auto seeds = coloring.seeds();
    for (int32_t c = 0; c < k; ++c) {
      std::span<double> col(products.data() + static_cast<std::size_t>(c) * n, n);
      for (std::size_t gi = 0; gi < curved.size(); ++gi) {
        accumulate_hvp(*curved[gi], x, seeds[c], params, w[gi], ws, col);
      }
    }
    const std::vector<double> h = recover(pattern, coloring, products);

    std::vector<int32_t> columns;
    if (n <= options.hessian_columns) {
      for (int32_t v = 0; v < n; ++v) columns.push_back(v);
    } else {
      std::uniform_int_distribution<int32_t> pick_any(0, n - 1);
      const int32_t half = options.hessian_columns / 2;
      if (!active.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
        for (int32_t t = 0; t < half; ++t) columns.push_back(active[pick(rng)]);
      }
      while (static_cast<int32_t>(columns.size()) < options.hessian_columns) {
        columns.push_back(pick_any(rng));
      }
    }
    std::vector<double> e(n, 0.0), dense(n), rec(n, 0.0);
    for (int32_t i : columns) {
      e[i] = 1.0;
      std::fill(dense.begin(), dense.end(), 0.0);
      for (std::size_t gi = 0; gi < curved.size(); ++gi) {
        accumulate_hvp(*curved[gi], x, e, params, w[gi], ws, dense);
      }
      e[i] = 0.0;
      for (int32_t ent : incident[i]) {
        const auto [a, b] = pattern.entries[ent];
        rec[a == i ? b : a] = h[ent];
      }
      double err = 0.0;
      for (int32_t j = 0; j < n; ++j) err = std::max(err, std::fabs(rec[j] - dense[j]));
      rep.max_hessian_error =
          std::max(rep.max_hessian_error, err / (1.0 + inf_norm(dense)));
      for (int32_t ent : incident[i]) {
        const auto [a, b] = pattern.entries[ent];
        rec[a == i ? b : a] = 0.0;
      }
    }
  }
  return rep;
}

}  // namespace amlkit
