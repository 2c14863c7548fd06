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

#include "amlkit/nlp_evaluator.h"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <string>
#include <variant>

#include "amlkit/errors.h"
#include "amlkit/model.h"

namespace amlkit {

ExprGraph to_graph(const Model& model, const QuadExpr& expr) {
  const QuadExpr e = canonicalize(expr);
  GraphBuilder b(model);
  std::vector<Ex> terms;
  terms.reserve(e.quad_terms().size() + e.affine().terms().size() + 1);
  for (const QuadTerm& t : e.quad_terms()) {
    const Ex x = b.var(t.var1);
    const Ex q = t.var1 == t.var2 ? b.pow(x, 2.0) : b.prod({x, b.var(t.var2)});
    terms.push_back(t.coeff == 1.0 ? q : b.prod({b.constant(t.coeff), q}));
  }
  for (const AffTerm& t : e.affine().terms()) {
    const Ex x = b.var(t.var);
    terms.push_back(t.coeff == 1.0 ? x : b.prod({b.constant(t.coeff), x}));
  }
  if (e.constant() != 0.0 || terms.empty()) {
    terms.push_back(b.constant(e.constant()));
  }
  return b.build(b.sum(terms));
}

NlpEvaluator::NlpEvaluator(const Model& model) : model_(&model) {
  dims_.n = model.num_vars();
  objective_scale_ =
      model.objective_sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  objective_ = model.nl_objective() ? *model.nl_objective()
                                    : to_graph(model, model.objective());

  std::vector<Row> g_rows, h_rows;
  auto add_row = [&](ExprGraph graph, Sense sense, double rhs,
                     int32_t source) {
    Row r;
    r.graph = std::move(graph);
    r.source = source;
    if (sense == Sense::kGreaterEqual) {
      r.scale = -1.0;
      r.offset = rhs;
    } else {
      r.offset = -rhs;
    }
    (sense == Sense::kEqual ? h_rows : g_rows).push_back(std::move(r));
  };
  const auto& cons = model.constraints();
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const auto* sc = std::get_if<ScalarConstraint>(&cons[i]);
    if (sc == nullptr) {
      throw ModelError("cone constraint " + std::to_string(i) +
                       " is not supported by the NLP evaluator");
    }
    add_row(to_graph(model, sc->body), sc->sense, sc->rhs,
            static_cast<int32_t>(i));
  }
  const auto& nl = model.nl_constraints();
  for (std::size_t i = 0; i < nl.size(); ++i) {
    add_row(nl[i].body, nl[i].sense, nl[i].rhs,
            static_cast<int32_t>(cons.size() + i));
  }
  dims_.m_g = static_cast<int32_t>(g_rows.size());
  dims_.m_h = static_cast<int32_t>(h_rows.size());
  rows_ = std::move(g_rows);
  for (Row& r : h_rows) rows_.push_back(std::move(r));

  jacobian_row_start_.reserve(rows_.size() + 1);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    jacobian_row_start_.push_back(
        static_cast<int32_t>(jacobian_structure_.size()));
    for (int32_t v : rows_[i].graph.variables()) {
      jacobian_structure_.emplace_back(static_cast<int32_t>(i), v);
    }
  }
  jacobian_row_start_.push_back(
      static_cast<int32_t>(jacobian_structure_.size()));

  // One joint pattern and coloring for all weights.
  std::vector<const ExprGraph*> curved;
  auto consider = [&](const ExprGraph& g, bool& in_hessian) {
    in_hessian = false;
    if (!has_curvature(g)) return;
    if (g.has_user_calls()) {
      excluded_user_ = true;
      return;
    }
    in_hessian = true;
    curved.push_back(&g);
  };
  consider(objective_, objective_in_hessian_);
  for (Row& r : rows_) consider(r.graph, r.in_hessian);
  if (excluded_user_) {
    std::cerr << "warning: second-order derivatives of user-defined "
                 "functions are not supported; their terms are left out of "
                 "the Hessian of the Lagrangian\n";
  }
  pattern_ = detect_sparsity(curved, dims_.n);
  coloring_ = color(pattern_);

  perm_.resize(pattern_.entries.size());
  std::iota(perm_.begin(), perm_.end(), 0);
  std::sort(perm_.begin(), perm_.end(), [&](int32_t a, int32_t b) {
    const auto& ea = pattern_.entries[a];
    const auto& eb = pattern_.entries[b];
    if (ea.second != eb.second) return ea.second < eb.second;
    return ea.first < eb.first;
  });
  hessian_structure_.reserve(perm_.size());
  for (int32_t k : perm_) {
    hessian_structure_.emplace_back(pattern_.entries[k].second,
                                    pattern_.entries[k].first);
  }
}

double NlpEvaluator::objective(std::span<const double> x,
                               NlpWorkspace& ws) const {
  return objective_scale_ *
         evaluate(objective_, x, model_->parameters(), ws.rev.value);
}

double NlpEvaluator::objective_gradient(std::span<const double> x,
                                        NlpWorkspace& ws,
                                        std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  return objective_scale_ *
         accumulate_gradient(objective_, x, model_->parameters(),
                             objective_scale_, ws.rev, grad);
}

void NlpEvaluator::constraints(std::span<const double> x, NlpWorkspace& ws,
                               std::span<double> out) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& r = rows_[i];
    try {
      out[i] = r.scale * evaluate(r.graph, x, model_->parameters(),
                                  ws.rev.value) +
               r.offset;
    } catch (const EvaluationError& e) {
      throw EvaluationError(std::string(e.what()) + " in constraint row " +
                                std::to_string(i),
                            e.node(), static_cast<int32_t>(i));
    }
  }
}

void NlpEvaluator::jacobian(std::span<const double> x, NlpWorkspace& ws,
                            std::span<double> values) const {
  ws.dense.assign(dims_.n, 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& r = rows_[i];
    try {
      accumulate_gradient(r.graph, x, model_->parameters(), r.scale, ws.rev,
                          ws.dense);
    } catch (const EvaluationError& e) {
      throw EvaluationError(std::string(e.what()) + " in constraint row " +
                                std::to_string(i),
                            e.node(), static_cast<int32_t>(i));
    }
    int32_t k = jacobian_row_start_[i];
    for (int32_t v : r.graph.variables()) {
      values[k++] = ws.dense[v];
      ws.dense[v] = 0.0;
    }
  }
}

void NlpEvaluator::hessian_lagrangian(std::span<const double> x, double sigma,
                                      std::span<const double> lambda,
                                      NlpWorkspace& ws,
                                      std::span<double> values) const {
  const int32_t n = dims_.n;
  const int32_t k = coloring_.num_colors;
  ws.products.assign(static_cast<std::size_t>(k) * n, 0.0);
  ws.direction.assign(n, 0.0);
  const auto params = model_->parameters();
  for (int32_t c = 0; c < k; ++c) {
    for (int32_t v = 0; v < n; ++v) {
      ws.direction[v] = coloring_.color[v] == c ? 1.0 : 0.0;
    }
    std::span<double> column(ws.products.data() + static_cast<std::size_t>(c) * n,
                             n);
    if (objective_in_hessian_ && sigma != 0.0) {
      accumulate_hvp(objective_, x, ws.direction, params,
                     sigma * objective_scale_, ws.rev, column);
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Row& r = rows_[i];
      if (!r.in_hessian || lambda[i] == 0.0) continue;
      accumulate_hvp(r.graph, x, ws.direction, params, lambda[i] * r.scale,
                     ws.rev, column);
    }
  }
  const std::vector<double> h = recover(pattern_, coloring_, ws.products);
  for (std::size_t j = 0; j < perm_.size(); ++j) values[j] = h[perm_[j]];
}

}  // namespace amlkit
