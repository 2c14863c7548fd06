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

// Incremental model building.
//
// Expressions are flat term lists. Appending a term is amortized O(1) and
// duplicates are kept until canonicalize() merges them, so generating a
// sum of K terms costs O(K) regardless of how many variables repeat:
//
//   QuadExpr q = expr_sum(d * d, [&](QuadExpr& acc) {
//     acc.add_constant(1.0);
//     for (...) {
//       acc.add_term(-w, x[i][j], x[0][j]);
//       acc.add_term(w, x[0][j]);
//     }
//   });
//
// Quadratic terms store the coefficient of x_i * x_j exactly as written (no
// implicit 1/2).

#ifndef AMLKIT_MODEL_H_
#define AMLKIT_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "amlkit/expr_graph.h"
#include "amlkit/ids.h"

namespace amlkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct AffTerm {
  double coeff = 0.0;
  VarId var;
};

struct QuadTerm {
  double coeff = 0.0;
  VarId var1;
  VarId var2;
};

class AffExpr {
 public:
  AffExpr() = default;
  explicit AffExpr(double constant) : constant_(constant) {}
  AffExpr(VarId v) { add_term(1.0, v); }  // NOLINT

  void add_term(double coeff, VarId v) { terms_.push_back({coeff, v}); }
  void add_constant(double c) { constant_ += c; }
  void reserve(std::size_t n) { terms_.reserve(n); }

  const std::vector<AffTerm>& terms() const { return terms_; }
  std::vector<AffTerm>& mutable_terms() { return terms_; }
  double constant() const { return constant_; }
  void set_constant(double c) { constant_ = c; }

  // Evaluation indexes x by VarId::index.
  double evaluate(std::span<const double> x) const;

  AffExpr& operator+=(const AffExpr& o);
  AffExpr& operator-=(const AffExpr& o);
  AffExpr& operator*=(double s);
  AffExpr& operator+=(double c) {
    constant_ += c;
    return *this;
  }

 private:
  std::vector<AffTerm> terms_;
  double constant_ = 0.0;
};

AffExpr operator+(AffExpr a, const AffExpr& b);
AffExpr operator-(AffExpr a, const AffExpr& b);
AffExpr operator*(double s, AffExpr a);
AffExpr operator-(AffExpr a);

class QuadExpr {
 public:
  QuadExpr() = default;
  explicit QuadExpr(double constant) : affine_(constant) {}
  QuadExpr(AffExpr a) : affine_(std::move(a)) {}  // NOLINT

  // One term per call: coeff * v1 * v2, or coeff * v1 when v2 is empty.
  void add_term(double coeff, VarId v1, std::optional<VarId> v2 = {}) {
    if (v2) {
      quad_terms_.push_back({coeff, v1, *v2});
    } else {
      affine_.add_term(coeff, v1);
    }
  }
  void add_constant(double c) { affine_.add_constant(c); }
  void reserve(std::size_t quad, std::size_t affine) {
    quad_terms_.reserve(quad);
    affine_.reserve(affine);
  }

  const std::vector<QuadTerm>& quad_terms() const { return quad_terms_; }
  std::vector<QuadTerm>& mutable_quad_terms() { return quad_terms_; }
  const AffExpr& affine() const { return affine_; }
  AffExpr& mutable_affine() { return affine_; }
  double constant() const { return affine_.constant(); }
  bool is_affine() const { return quad_terms_.empty(); }

  double evaluate(std::span<const double> x) const;

  QuadExpr& operator+=(const QuadExpr& o);
  QuadExpr& operator*=(double s);

 private:
  std::vector<QuadTerm> quad_terms_;
  AffExpr affine_;
};

// Sorted by VarId, duplicates merged, zero coefficients dropped. Quadratic
// pairs are normalized to var1 <= var2 and sorted lexicographically.
AffExpr canonicalize(const AffExpr& e);
QuadExpr canonicalize(const QuadExpr& e);
bool is_canonical(const AffExpr& e);
bool is_canonical(const QuadExpr& e);

// Accumulates generated terms into one pre-sized expression. `size_hint`
// reserves that many quadratic and affine slots; when it is exact the term
// storage is allocated exactly once per list.
template <typename Generator>
QuadExpr expr_sum(std::size_t size_hint, Generator&& gen) {
  QuadExpr out;
  out.reserve(size_hint, size_hint);
  gen(out);
  return out;
}

struct ScalarConstraint {
  QuadExpr body;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// ||x||_2 <= t
struct ConeConstraint {
  AffExpr t;
  std::vector<AffExpr> x;
};

using Constraint = std::variant<ScalarConstraint, ConeConstraint>;

struct NlConstraint {
  ExprGraph body;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// Observer notified by Model mutations. Used by solver sessions to mirror
// row additions incrementally.
class ModelListener {
 public:
  virtual ~ModelListener() = default;
  virtual void on_constraint_added(const Model& model, ConstraintId id) = 0;
  virtual void on_bounds_changed(const Model& model, VarId v) {
    (void)v;
    on_structure_changed(model);
  }
  // Any other mutation that changes the optimization problem.
  virtual void on_structure_changed(const Model& model) = 0;
};

class Model {
 public:
  Model();
  Model(const Model& other);
  Model& operator=(const Model& other);
  Model(Model&& other) noexcept;
  Model& operator=(Model&& other) noexcept;
  ~Model() = default;

  uint32_t id() const { return id_; }
  uint64_t revision() const { return revision_; }

  // Throws BoundOrderError when lb > ub or either bound is NaN.
  VarId add_variable(double lb = -kInf, double ub = kInf,
                     bool integer = false);
  std::vector<VarId> add_variables(std::size_t count, double lb = -kInf,
                                   double ub = kInf, bool integer = false);
  void set_bounds(VarId v, double lb, double ub);
  void set_start(VarId v, double value);

  int32_t num_vars() const { return static_cast<int32_t>(lb_.size()); }
  VarId var(int32_t index) const {
    return VarId{static_cast<uint32_t>(index), id_};
  }
  const std::vector<double>& lower_bounds() const { return lb_; }
  const std::vector<double>& upper_bounds() const { return ub_; }
  const std::vector<bool>& integer_flags() const { return is_integer_; }
  // NaN where no start value was given.
  const std::vector<double>& start_values() const { return start_; }

  // Throws OwnershipError when an expression references a foreign VarId.
  ConstraintId add_constraint(Constraint c);
  ConstraintId add_constraint(QuadExpr body, Sense sense, double rhs);
  ConstraintId add_cone(AffExpr t, std::vector<AffExpr> x);
  const std::vector<Constraint>& constraints() const { return constraints_; }
  int32_t num_constraints() const {
    return static_cast<int32_t>(constraints_.size());
  }
  int32_t num_scalar_rows() const { return num_scalar_rows_; }
  int32_t num_cones() const { return num_constraints() - num_scalar_rows_; }

  void set_objective(ObjectiveSense sense, QuadExpr objective);
  const QuadExpr& objective() const { return objective_; }
  ObjectiveSense objective_sense() const { return sense_; }

  // Nonlinear parts, evaluated through the AD engine.
  void set_nl_objective(ObjectiveSense sense, ExprGraph objective);
  int32_t add_nl_constraint(ExprGraph body, Sense sense, double rhs);
  const std::optional<ExprGraph>& nl_objective() const {
    return nl_objective_;
  }
  const std::vector<NlConstraint>& nl_constraints() const {
    return nl_constraints_;
  }
  bool has_nonlinear() const {
    return nl_objective_.has_value() || !nl_constraints_.empty();
  }

  ParamId add_parameter(double value);
  void set_parameter(ParamId p, double value);
  double parameter(ParamId p) const;
  std::span<const double> parameters() const { return params_; }

  // Throws RegistrationError (see FunctionRegistry::add).
  void register_function(UserFunction fn);
  // Generic body, differentiated with dual numbers.
  template <typename Body>
  void register_function(std::string name, int arity, Body body) {
    register_function(make_autodiff_function(std::move(name), arity, body));
  }
  // Hand-coded derivatives (no autodiff).
  void register_function(
      std::string name, int arity,
      std::function<double(std::span<const double>)> value,
      std::function<void(std::span<const double>, std::span<double>)> grad);
  std::shared_ptr<const FunctionRegistry> functions() const {
    return functions_;
  }

  void check_owned(VarId v) const;
  void check_owned(ParamId p) const;

  void add_listener(ModelListener* l);
  void remove_listener(ModelListener* l);

 private:
  void check_expr(const AffExpr& e) const;
  void check_expr(const QuadExpr& e) const;
  void touch();

  uint32_t id_;
  uint64_t revision_ = 0;
  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<bool> is_integer_;
  std::vector<double> start_;
  std::vector<Constraint> constraints_;
  int32_t num_scalar_rows_ = 0;
  QuadExpr objective_;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  std::optional<ExprGraph> nl_objective_;
  std::vector<NlConstraint> nl_constraints_;
  std::vector<double> params_;
  std::shared_ptr<FunctionRegistry> functions_;
  // Not copied: listeners observe one specific Model object.
  std::vector<ModelListener*> listeners_;
};

}  // namespace amlkit

#endif  // AMLKIT_MODEL_H_
