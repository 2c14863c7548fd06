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

#include "amlkit/standard_form.h"

#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "amlkit/errors.h"
#include "amlkit/model.h"
#include "json.hpp"

namespace amlkit {
namespace {

using Json = nlohmann::ordered_json;

// Plain column reference: a single unit term and no constant.
int32_t plain_column(const AffExpr& canonical) {
  if (canonical.constant() != 0.0 || canonical.terms().size() != 1) return -1;
  const AffTerm& t = canonical.terms()[0];
  return t.coeff == 1.0 ? static_cast<int32_t>(t.var.index) : -1;
}

void append_row(StandardForm& sf, const AffExpr& canonical, Sense sense,
                double rhs) {
  const int32_t row = sf.num_rows();
  for (const AffTerm& t : canonical.terms()) {
    sf.a.rows.push_back(row);
    sf.a.cols.push_back(static_cast<int32_t>(t.var.index));
    sf.a.vals.push_back(t.coeff);
  }
  sf.b.push_back(rhs - canonical.constant());
  sf.senses.push_back(sense);
}

struct Lifter {
  StandardForm& sf;
  std::vector<std::pair<AffExpr, int32_t>> links;

  int32_t column_for(const AffExpr& e) {
    AffExpr ce = canonicalize(e);
    if (int32_t col = plain_column(ce); col >= 0) return col;
    const int32_t col = sf.num_vars++;
    sf.c.push_back(0.0);
    sf.lb.push_back(-std::numeric_limits<double>::infinity());
    sf.ub.push_back(std::numeric_limits<double>::infinity());
    links.emplace_back(std::move(ce), col);
    return col;
  }
};

Json bound_json(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  return v;
}

double bound_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ModelError("invalid bound string '" + s + "'");
  }
  return j.get<double>();
}

const char* sense_name(Sense s) {
  switch (s) {
    case Sense::kLessEqual:
      return "LE";
    case Sense::kEqual:
      return "EQ";
    case Sense::kGreaterEqual:
      return "GE";
  }
  return "?";
}

Sense sense_from_name(const std::string& s) {
  if (s == "LE") return Sense::kLessEqual;
  if (s == "EQ") return Sense::kEqual;
  if (s == "GE") return Sense::kGreaterEqual;
  throw ModelError("invalid row sense '" + s + "'");
}

Json triplets_json(const Triplets& t) {
  Json j;
  j["rows"] = t.rows;
  j["cols"] = t.cols;
  j["vals"] = t.vals;
  return j;
}

Triplets triplets_from_json(const Json& j) {
  Triplets t;
  t.rows = j.at("rows").get<std::vector<int32_t>>();
  t.cols = j.at("cols").get<std::vector<int32_t>>();
  t.vals = j.at("vals").get<std::vector<double>>();
  if (t.rows.size() != t.vals.size() || t.cols.size() != t.vals.size()) {
    throw ModelError("triplet arrays differ in length");
  }
  return t;
}

}  // namespace

StandardForm to_standard_form(const Model& model) {
  if (model.has_nonlinear()) {
    throw ModelError(
        "model has nonlinear parts; use the NLP evaluator instead");
  }
  StandardForm sf;
  const int32_t n = model.num_vars();
  sf.num_vars = n;
  sf.num_model_vars = n;
  sf.lb = model.lower_bounds();
  sf.ub = model.upper_bounds();
  for (int32_t j = 0; j < n; ++j) {
    if (model.integer_flags()[j]) sf.integers.push_back(j);
  }

  const double s =
      model.objective_sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  sf.negated = s < 0.0;
  const QuadExpr obj = canonicalize(model.objective());
  sf.c.assign(n, 0.0);
  for (const AffTerm& t : obj.affine().terms()) sf.c[t.var.index] = s * t.coeff;
  for (const QuadTerm& t : obj.quad_terms()) {
    sf.qobj.rows.push_back(static_cast<int32_t>(t.var1.index));
    sf.qobj.cols.push_back(static_cast<int32_t>(t.var2.index));
    sf.qobj.vals.push_back(s * t.coeff);
  }
  sf.objective_constant = s * obj.constant();

  Lifter lifter{sf, {}};
  for (std::size_t r = 0; r < model.constraints().size(); ++r) {
    const Constraint& con = model.constraints()[r];
    if (const auto* sc = std::get_if<ScalarConstraint>(&con)) {
      if (!sc->body.is_affine()) {
        QuadExpr body = canonicalize(sc->body);
        if (!body.is_affine()) {
          throw ModelError("constraint " + std::to_string(r) +
                           " is quadratic; standard form holds linear rows "
                           "and cones only");
        }
      }
      append_row(sf, canonicalize(sc->body.affine()), sc->sense, sc->rhs);
    } else {
      const auto& cone = std::get<ConeConstraint>(con);
      ConeIndex ci;
      ci.t = lifter.column_for(cone.t);
      for (const AffExpr& e : cone.x) ci.x.push_back(lifter.column_for(e));
      sf.cones.push_back(std::move(ci));
    }
  }
  // Linking rows: expr - aux = 0.
  for (auto& [expr, col] : lifter.links) {
    AffExpr row = expr;
    row.add_term(-1.0, VarId{static_cast<uint32_t>(col), model.id()});
    append_row(sf, row, Sense::kEqual, 0.0);
  }
  return sf;
}

std::vector<double> extend_point(const Model& model, const StandardForm& sf,
                                 std::span<const double> x) {
  std::vector<double> out(x.begin(), x.begin() + sf.num_model_vars);
  out.resize(sf.num_vars, 0.0);
  int32_t next = sf.num_model_vars;
  for (const Constraint& con : model.constraints()) {
    const auto* cone = std::get_if<ConeConstraint>(&con);
    if (cone == nullptr) continue;
    auto fill = [&](const AffExpr& e) {
      if (plain_column(canonicalize(e)) < 0) out[next++] = e.evaluate(x);
    };
    fill(cone->t);
    for (const AffExpr& e : cone->x) fill(e);
  }
  return out;
}

double objective_value(const StandardForm& sf, std::span<const double> x) {
  double v = sf.objective_constant;
  for (int32_t j = 0; j < sf.num_vars; ++j) v += sf.c[j] * x[j];
  for (std::size_t k = 0; k < sf.qobj.size(); ++k) {
    v += sf.qobj.vals[k] * x[sf.qobj.rows[k]] * x[sf.qobj.cols[k]];
  }
  return v;
}

std::vector<double> row_activity(const StandardForm& sf,
                                 std::span<const double> x) {
  std::vector<double> ax(sf.num_rows(), 0.0);
  for (std::size_t k = 0; k < sf.a.size(); ++k) {
    ax[sf.a.rows[k]] += sf.a.vals[k] * x[sf.a.cols[k]];
  }
  return ax;
}

Triplets half_scaled_qobj(const StandardForm& sf) {
  Triplets q = sf.qobj;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q.rows[k] == q.cols[k]) q.vals[k] *= 2.0;
  }
  return q;
}

std::string to_json(const StandardForm& sf, int indent) {
  Json j;
  j["num_vars"] = sf.num_vars;
  j["c"] = sf.c;
  j["qobj"] = triplets_json(sf.qobj);
  j["A"] = triplets_json(sf.a);
  j["b"] = sf.b;
  Json senses = Json::array();
  for (Sense s : sf.senses) senses.push_back(sense_name(s));
  j["senses"] = std::move(senses);
  Json lb = Json::array(), ub = Json::array();
  for (double v : sf.lb) lb.push_back(bound_json(v));
  for (double v : sf.ub) ub.push_back(bound_json(v));
  j["lb"] = std::move(lb);
  j["ub"] = std::move(ub);
  Json cones = Json::array();
  for (const ConeIndex& c : sf.cones) {
    Json e;
    e["t"] = c.t;
    e["x"] = c.x;
    cones.push_back(std::move(e));
  }
  j["cones"] = std::move(cones);
  j["integers"] = sf.integers;
  return j.dump(indent) + "\n";
}

StandardForm standard_form_from_json(const std::string& text) {
  StandardForm sf;
  try {
    const Json j = Json::parse(text);
    sf.num_vars = j.at("num_vars").get<int32_t>();
    sf.num_model_vars = sf.num_vars;
    sf.c = j.at("c").get<std::vector<double>>();
    sf.qobj = triplets_from_json(j.at("qobj"));
    sf.a = triplets_from_json(j.at("A"));
    sf.b = j.at("b").get<std::vector<double>>();
    for (const auto& s : j.at("senses")) {
      sf.senses.push_back(sense_from_name(s.get<std::string>()));
    }
    for (const auto& v : j.at("lb")) sf.lb.push_back(bound_from_json(v));
    for (const auto& v : j.at("ub")) sf.ub.push_back(bound_from_json(v));
    for (const auto& c : j.at("cones")) {
      sf.cones.push_back(
          {c.at("t").get<int32_t>(), c.at("x").get<std::vector<int32_t>>()});
    }
    sf.integers = j.at("integers").get<std::vector<int32_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("invalid standard-form JSON: ") + e.what());
  }
  const auto n = static_cast<std::size_t>(sf.num_vars);
  if (sf.num_vars < 0 || sf.c.size() != n || sf.lb.size() != n ||
      sf.ub.size() != n || sf.senses.size() != sf.b.size()) {
    throw ModelError("standard-form JSON has inconsistent dimensions");
  }
  auto check_col = [&](int32_t c) {
    if (c < 0 || c >= sf.num_vars) {
      throw ModelError("column index out of range in standard-form JSON");
    }
  };
  for (int32_t c : sf.a.cols) check_col(c);
  for (int32_t r : sf.a.rows) {
    if (r < 0 || r >= sf.num_rows()) {
      throw ModelError("row index out of range in standard-form JSON");
    }
  }
  for (std::size_t k = 0; k < sf.qobj.size(); ++k) {
    check_col(sf.qobj.rows[k]);
    check_col(sf.qobj.cols[k]);
  }
  for (const ConeIndex& c : sf.cones) {
    check_col(c.t);
    for (int32_t x : c.x) check_col(x);
  }
  for (int32_t c : sf.integers) check_col(c);
  return sf;
}

Model model_from_standard_form(const StandardForm& sf) {
  Model m;
  std::vector<bool> integer(sf.num_vars, false);
  for (int32_t j : sf.integers) integer[j] = true;
  for (int32_t j = 0; j < sf.num_vars; ++j) {
    m.add_variable(sf.lb[j], sf.ub[j], integer[j]);
  }
  QuadExpr obj(sf.objective_constant);
  for (int32_t j = 0; j < sf.num_vars; ++j) {
    if (sf.c[j] != 0.0) obj.add_term(sf.c[j], m.var(j));
  }
  for (std::size_t k = 0; k < sf.qobj.size(); ++k) {
    obj.add_term(sf.qobj.vals[k], m.var(sf.qobj.rows[k]),
                 m.var(sf.qobj.cols[k]));
  }
  m.set_objective(ObjectiveSense::kMinimize, std::move(obj));
  std::vector<AffExpr> rows(sf.num_rows());
  for (std::size_t k = 0; k < sf.a.size(); ++k) {
    rows[sf.a.rows[k]].add_term(sf.a.vals[k], m.var(sf.a.cols[k]));
  }
  for (int32_t r = 0; r < sf.num_rows(); ++r) {
    m.add_constraint(QuadExpr(std::move(rows[r])), sf.senses[r], sf.b[r]);
  }
  for (const ConeIndex& c : sf.cones) {
    std::vector<AffExpr> x;
    for (int32_t j : c.x) x.emplace_back(m.var(j));
    m.add_cone(AffExpr(m.var(c.t)), std::move(x));
  }
  return m;
}

}  // namespace amlkit
