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

#include "amlkit/model.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <utility>

#include "amlkit/errors.h"

namespace amlkit {
namespace {

std::atomic<uint32_t> next_model_id{1};

bool var_less(const AffTerm& a, const AffTerm& b) { return a.var < b.var; }

bool pair_less(const QuadTerm& a, const QuadTerm& b) {
  if (a.var1 != b.var1) return a.var1 < b.var1;
  return a.var2 < b.var2;
}

}  // namespace

double AffExpr::evaluate(std::span<const double> x) const {
  double s = constant_;
  for (const AffTerm& t : terms_) s += t.coeff * x[t.var.index];
  return s;
}

AffExpr& AffExpr::operator+=(const AffExpr& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  constant_ += o.constant_;
  return *this;
}

AffExpr& AffExpr::operator-=(const AffExpr& o) {
  terms_.reserve(terms_.size() + o.terms_.size());
  for (const AffTerm& t : o.terms_) terms_.push_back({-t.coeff, t.var});
  constant_ -= o.constant_;
  return *this;
}

AffExpr& AffExpr::operator*=(double s) {
  for (AffTerm& t : terms_) t.coeff *= s;
  constant_ *= s;
  return *this;
}

AffExpr operator+(AffExpr a, const AffExpr& b) { return a += b; }
AffExpr operator-(AffExpr a, const AffExpr& b) { return a -= b; }
AffExpr operator*(double s, AffExpr a) { return a *= s; }
AffExpr operator-(AffExpr a) { return a *= -1.0; }

double QuadExpr::evaluate(std::span<const double> x) const {
  double s = affine_.evaluate(x);
  for (const QuadTerm& t : quad_terms_) {
    s += t.coeff * x[t.var1.index] * x[t.var2.index];
  }
  return s;
}

QuadExpr& QuadExpr::operator+=(const QuadExpr& o) {
  quad_terms_.insert(quad_terms_.end(), o.quad_terms_.begin(),
                     o.quad_terms_.end());
  affine_ += o.affine_;
  return *this;
}

QuadExpr& QuadExpr::operator*=(double s) {
  for (QuadTerm& t : quad_terms_) t.coeff *= s;
  affine_ *= s;
  return *this;
}

AffExpr canonicalize(const AffExpr& e) {
  std::vector<AffTerm> terms = e.terms();
  std::stable_sort(terms.begin(), terms.end(), var_less);
  AffExpr out(e.constant());
  out.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size();) {
    double c = 0.0;
    std::size_t j = i;
    for (; j < terms.size() && terms[j].var == terms[i].var; ++j) {
      c += terms[j].coeff;
    }
    if (c != 0.0) out.add_term(c, terms[i].var);
    i = j;
  }
  return out;
}

QuadExpr canonicalize(const QuadExpr& e) {
  std::vector<QuadTerm> terms = e.quad_terms();
  for (QuadTerm& t : terms) {
    if (t.var2 < t.var1) std::swap(t.var1, t.var2);
  }
  std::stable_sort(terms.begin(), terms.end(), pair_less);
  QuadExpr out(canonicalize(e.affine()));
  out.mutable_quad_terms().reserve(terms.size());
  for (std::size_t i = 0; i < terms.size();) {
    double c = 0.0;
    std::size_t j = i;
    for (; j < terms.size() && terms[j].var1 == terms[i].var1 &&
           terms[j].var2 == terms[i].var2;
         ++j) {
      c += terms[j].coeff;
    }
    if (c != 0.0) {
      out.mutable_quad_terms().push_back({c, terms[i].var1, terms[i].var2});
    }
    i = j;
  }
  return out;
}

bool is_canonical(const AffExpr& e) {
  const auto& t = e.terms();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].coeff == 0.0) return false;
    if (i > 0 && !(t[i - 1].var < t[i].var)) return false;
  }
  return true;
}

bool is_canonical(const QuadExpr& e) {
  const auto& t = e.quad_terms();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].coeff == 0.0 || t[i].var2 < t[i].var1) return false;
    if (i > 0 && !pair_less(t[i - 1], t[i])) return false;
  }
  return is_canonical(e.affine());
}

Model::Model()
    : id_(next_model_id.fetch_add(1)),
      functions_(std::make_shared<FunctionRegistry>()) {}

// A copy is an independent model with the same contents. It keeps the
// owner id so that VarIds and graphs built for the original stay valid.
Model::Model(const Model& o)
    : id_(o.id_),
      revision_(o.revision_),
      lb_(o.lb_),
      ub_(o.ub_),
      is_integer_(o.is_integer_),
      start_(o.start_),
      constraints_(o.constraints_),
      num_scalar_rows_(o.num_scalar_rows_),
      objective_(o.objective_),
      sense_(o.sense_),
      nl_objective_(o.nl_objective_),
      nl_constraints_(o.nl_constraints_),
      params_(o.params_),
      functions_(std::make_shared<FunctionRegistry>(*o.functions_)) {}

Model& Model::operator=(const Model& o) {
  if (this == &o) return *this;
  Model tmp(o);
  std::vector<ModelListener*> keep = std::move(listeners_);
  *this = std::move(tmp);
  listeners_ = std::move(keep);
  touch();
  return *this;
}

Model::Model(Model&& o) noexcept = default;
Model& Model::operator=(Model&& o) noexcept = default;

void Model::touch() {
  ++revision_;
  for (ModelListener* l : listeners_) l->on_structure_changed(*this);
}

VarId Model::add_variable(double lb, double ub, bool integer) {
  if (std::isnan(lb) || std::isnan(ub) || lb > ub) {
    throw BoundOrderError("add_variable: lower bound " + std::to_string(lb) +
                          " exceeds upper bound " + std::to_string(ub));
  }
  const VarId v{static_cast<uint32_t>(lb_.size()), id_};
  lb_.push_back(lb);
  ub_.push_back(ub);
  is_integer_.push_back(integer);
  start_.push_back(std::nan(""));
  touch();
  return v;
}

std::vector<VarId> Model::add_variables(std::size_t count, double lb,
                                        double ub, bool integer) {
  std::vector<VarId> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(add_variable(lb, ub, integer));
  }
  return out;
}

void Model::set_bounds(VarId v, double lb, double ub) {
  check_owned(v);
  if (std::isnan(lb) || std::isnan(ub) || lb > ub) {
    throw BoundOrderError("set_bounds: lower bound exceeds upper bound");
  }
  lb_[v.index] = lb;
  ub_[v.index] = ub;
  ++revision_;
  for (ModelListener* l : listeners_) l->on_bounds_changed(*this, v);
}

void Model::set_start(VarId v, double value) {
  check_owned(v);
  start_[v.index] = value;
  ++revision_;
}

void Model::check_owned(VarId v) const {
  if (v.owner != id_ || v.index >= lb_.size()) {
    throw OwnershipError("variable " + std::to_string(v.index) +
                         " does not belong to this model");
  }
}

void Model::check_owned(ParamId p) const {
  if (p.owner != id_ || p.index >= params_.size()) {
    throw OwnershipError("parameter " + std::to_string(p.index) +
                         " does not belong to this model");
  }
}

void Model::check_expr(const AffExpr& e) const {
  for (const AffTerm& t : e.terms()) check_owned(t.var);
}

void Model::check_expr(const QuadExpr& e) const {
  for (const QuadTerm& t : e.quad_terms()) {
    check_owned(t.var1);
    check_owned(t.var2);
  }
  check_expr(e.affine());
}

ConstraintId Model::add_constraint(Constraint c) {
  if (auto* s = std::get_if<ScalarConstraint>(&c)) {
    check_expr(s->body);
    ++num_scalar_rows_;
  } else {
    const auto& cone = std::get<ConeConstraint>(c);
    check_expr(cone.t);
    for (const AffExpr& e : cone.x) check_expr(e);
  }
  const ConstraintId id{static_cast<uint32_t>(constraints_.size())};
  constraints_.push_back(std::move(c));
  ++revision_;
  for (ModelListener* l : listeners_) l->on_constraint_added(*this, id);
  return id;
}

ConstraintId Model::add_constraint(QuadExpr body, Sense sense, double rhs) {
  return add_constraint(ScalarConstraint{std::move(body), sense, rhs});
}

ConstraintId Model::add_cone(AffExpr t, std::vector<AffExpr> x) {
  return add_constraint(ConeConstraint{std::move(t), std::move(x)});
}

void Model::set_objective(ObjectiveSense sense, QuadExpr objective) {
  check_expr(objective);
  sense_ = sense;
  objective_ = std::move(objective);
  nl_objective_.reset();
  touch();
}

void Model::set_nl_objective(ObjectiveSense sense, ExprGraph objective) {
  if (objective.owner() != id_) {
    throw OwnershipError("objective graph was built for another model");
  }
  sense_ = sense;
  objective_ = QuadExpr();
  nl_objective_ = std::move(objective);
  touch();
}

int32_t Model::add_nl_constraint(ExprGraph body, Sense sense, double rhs) {
  if (body.owner() != id_) {
    throw OwnershipError("constraint graph was built for another model");
  }
  nl_constraints_.push_back({std::move(body), sense, rhs});
  touch();
  return static_cast<int32_t>(nl_constraints_.size()) - 1;
}

ParamId Model::add_parameter(double value) {
  params_.push_back(value);
  ++revision_;
  return ParamId{static_cast<uint32_t>(params_.size() - 1), id_};
}

void Model::set_parameter(ParamId p, double value) {
  check_owned(p);
  params_[p.index] = value;
  ++revision_;
}

double Model::parameter(ParamId p) const {
  check_owned(p);
  return params_[p.index];
}

void Model::register_function(UserFunction fn) {
  // Graphs already built hold the previous registry; the registry is
  // append-only, so sharing a copy-on-write snapshot keeps them valid.
  auto next = std::make_shared<FunctionRegistry>(*functions_);
  next->add(std::move(fn));
  functions_ = std::move(next);
  ++revision_;
}

void Model::register_function(
    std::string name, int arity,
    std::function<double(std::span<const double>)> value,
    std::function<void(std::span<const double>, std::span<double>)> grad) {
  UserFunction fn;
  fn.name = std::move(name);
  fn.arity = arity;
  fn.autodiff = false;
  fn.value = std::move(value);
  fn.gradient = std::move(grad);
  register_function(std::move(fn));
}

void Model::add_listener(ModelListener* l) { listeners_.push_back(l); }

void Model::remove_listener(ModelListener* l) {
  std::erase(listeners_, l);
}

}  // namespace amlkit
