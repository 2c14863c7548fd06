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

#include "amlkit/cutting_plane.h"

#include <algorithm>
#include <cmath>
#include <variant>

#include "amlkit/errors.h"
#include "amlkit/nlp_evaluator.h"

namespace amlkit {
namespace {

void collect_support(const AffExpr& e, std::vector<int32_t>& out) {
  for (const AffTerm& t : e.terms()) {
    out.push_back(static_cast<int32_t>(t.var.index));
  }
}

void sort_unique(std::vector<int32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

double objective_value(const Model& model, std::span<const double> x) {
  if (model.nl_objective()) {
    return evaluate(*model.nl_objective(), x, model.parameters());
  }
  return model.objective().evaluate(x);
}

}  // namespace

ConeCut::ConeCut(const ConeConstraint& cone)
    : t_(canonicalize(cone.t)), r_(cone.x.size()) {
  x_.reserve(cone.x.size());
  for (const AffExpr& e : cone.x) x_.push_back(canonicalize(e));
  collect_support(t_, support_);
  for (const AffExpr& e : x_) collect_support(e, support_);
  sort_unique(support_);
}

double ConeCut::evaluate(std::span<const double> x, std::span<double> grad) {
  double sq = 0.0;
  for (std::size_t k = 0; k < x_.size(); ++k) {
    r_[k] = x_[k].evaluate(x);
    sq += r_[k] * r_[k];
  }
  const double norm = std::sqrt(sq);
  for (int32_t j : support_) grad[j] = 0.0;
  for (const AffTerm& t : t_.terms()) grad[t.var.index] -= t.coeff;
  if (norm > 0.0) {
    for (std::size_t k = 0; k < x_.size(); ++k) {
      const double w = r_[k] / norm;
      for (const AffTerm& t : x_[k].terms()) grad[t.var.index] += w * t.coeff;
    }
  }
  return norm - t_.evaluate(x);
}

GraphCut::GraphCut(const Model& model, ExprGraph body, Sense sense,
                   double rhs, AffExpr extra)
    : body_(std::move(body)),
      extra_(canonicalize(extra)),
      sign_(sense == Sense::kGreaterEqual ? -1.0 : 1.0),
      rhs_(rhs),
      params_(model.parameters().begin(), model.parameters().end()),
      dense_(model.num_vars(), 0.0) {
  if (sense == Sense::kEqual) {
    throw ModelError(
        "nonlinear equality constraints cannot be outer-approximated");
  }
  support_.assign(body_.variables().begin(), body_.variables().end());
  collect_support(extra_, support_);
  sort_unique(support_);
}

double GraphCut::evaluate(std::span<const double> x, std::span<double> grad) {
  for (int32_t j : support_) dense_[j] = 0.0;
  const double f = accumulate_gradient(body_, x, params_, 1.0, ws_, dense_);
  for (const AffTerm& t : extra_.terms()) dense_[t.var.index] += t.coeff;
  for (int32_t j : support_) grad[j] = sign_ * dense_[j];
  return sign_ * (f + extra_.evaluate(x) - rhs_);
}

FunctionCut::FunctionCut(std::vector<int32_t> support, Oracle oracle)
    : oracle_(std::move(oracle)) {
  support_ = std::move(support);
  sort_unique(support_);
}

SolveResult cutting_plane_solve(SolverSession& session,
                                std::span<CutGenerator* const> generators,
                                const CuttingPlaneOptions& options,
                                std::span<const double> start) {
  if (!(options.tol >= kMinCutTol)) {
    throw ModelError("cut tolerance must be at least 1e-9");
  }
  Model& model = session.model();
  const int32_t n = model.num_vars();
  const int64_t cap =
      options.max_rounds > 0 ? options.max_rounds : 10 * int64_t{n} + 100;
  const double sense =
      model.objective_sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  std::vector<double> grad(n, 0.0);
  int64_t cuts = 0;

  // Adds the tangent cut at v; returns c(v).
  auto tangent = [&](CutGenerator& g, std::span<const double> v,
                     bool only_violated) {
    const double c = g.evaluate(v, grad);
    if (only_violated && !(c > options.tol)) return c;
    if (!std::isfinite(c)) {
      throw EvaluationError("cut generator returned a non-finite value", -1);
    }
    AffExpr row;
    row.reserve(g.support().size());
    double rhs = -c;
    for (int32_t j : g.support()) {
      if (grad[j] == 0.0) continue;
      row.add_term(grad[j], model.var(j));
      rhs += grad[j] * v[j];
    }
    if (row.terms().empty()) return c;
    model.add_constraint(QuadExpr(std::move(row)), Sense::kLessEqual, rhs);
    ++cuts;
    return c;
  };

  if (!start.empty()) {
    for (CutGenerator* g : generators) tangent(*g, start, false);
  }

  SolveResult out;
  int64_t pivots = 0;
  for (int64_t round = 0;; ++round) {
    SolveResult r = options.warm ? session.solve() : session.cold_solve();
    pivots += r.pivots;
    out.status = r.status;
    out.objective = r.objective;
    out.x = std::move(r.x);
    if (r.status != SolveStatus::kOptimal) break;
    out.trace.push_back(
        {static_cast<int32_t>(round), out.objective, static_cast<int32_t>(cuts)});
    if (sense * out.objective >= options.cutoff) break;
    const int64_t before = cuts;
    for (CutGenerator* g : generators) tangent(*g, out.x, true);
    if (cuts == before) break;
    ++out.iterations;
    if (round + 1 >= cap) {
      out.status = SolveStatus::kIterationLimit;
      break;
    }
  }
  out.pivots = pivots;
  out.cuts = cuts;
  return out;
}

std::vector<CutGenerator*> Relaxation::generator_pointers() const {
  std::vector<CutGenerator*> out;
  out.reserve(generators.size());
  for (const auto& g : generators) out.push_back(g.get());
  return out;
}

Relaxation make_relaxation(const Model& source) {
  Relaxation rel{source, source.num_vars(), false, {}, {}};
  Model& m = rel.model;
  const bool nonlinear_objective =
      m.nl_objective().has_value() || !canonicalize(m.objective()).is_affine();

  std::vector<std::unique_ptr<CutGenerator>>& gens = rel.generators;
  for (const Constraint& c : source.constraints()) {
    if (const auto* cone = std::get_if<ConeConstraint>(&c)) {
      gens.push_back(std::make_unique<ConeCut>(*cone));
      continue;
    }
    const auto& sc = std::get<ScalarConstraint>(c);
    if (canonicalize(sc.body).is_affine()) continue;
    gens.push_back(std::make_unique<GraphCut>(source, to_graph(source, sc.body),
                                              sc.sense, sc.rhs));
  }
  for (const NlConstraint& c : source.nl_constraints()) {
    gens.push_back(std::make_unique<GraphCut>(source, c.body, c.sense, c.rhs));
  }

  bool any_start = false;
  for (double s : source.start_values()) any_start |= !std::isnan(s);

  if (nonlinear_objective) {
    const ObjectiveSense sense = source.objective_sense();
    ExprGraph f = source.nl_objective() ? *source.nl_objective()
                                        : to_graph(source, source.objective());
    const VarId t = m.add_variable();
    // min: f - t <= 0; max: f - t >= 0.
    AffExpr minus_t;
    minus_t.add_term(-1.0, t);
    gens.push_back(std::make_unique<GraphCut>(
        m, std::move(f),
        sense == ObjectiveSense::kMaximize ? Sense::kGreaterEqual
                                           : Sense::kLessEqual,
        0.0, std::move(minus_t)));
    QuadExpr obj;
    obj.add_term(1.0, t);
    m.set_objective(sense, std::move(obj));
    rel.has_epigraph = true;
  }

  if (any_start || rel.has_epigraph) {
    const int32_t n = m.num_vars();
    rel.start.resize(n);
    for (int32_t j = 0; j < rel.num_original; ++j) {
      const double s = source.start_values()[j];
      rel.start[j] =
          std::clamp(std::isnan(s) ? 0.0 : s, source.lower_bounds()[j],
                     source.upper_bounds()[j]);
    }
    if (rel.has_epigraph) {
      rel.start[n - 1] = objective_value(source, rel.start);
    }
  }
  return rel;
}

SolveResult cutting_plane_solve(const Model& model,
                                const CuttingPlaneOptions& options) {
  Relaxation rel = make_relaxation(model);
  const std::vector<CutGenerator*> gens = rel.generator_pointers();
  SolverSession session(rel.model);
  SolveResult r = cutting_plane_solve(session, gens, options, rel.start);
  if (!r.x.empty()) {
    r.x.resize(rel.num_original);
    r.objective = objective_value(model, r.x);
  }
  return r;
}

}  // namespace amlkit
