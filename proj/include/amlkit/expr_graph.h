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

// Nonlinear expressions as flat, topologically ordered operation graphs.
//
// A graph is an append-only array of nodes; every child index is smaller
// than its parent's index and the root is the last node. Graphs are built
// with GraphBuilder through the `Ex` handle, which overloads the usual
// arithmetic operators:
//
//   GraphBuilder b(model);
//   Ex x = b.var(vx), y = b.var(vy);
//   ExprGraph g = b.build(exp(pow(x, 2) + pow(y, 2)));
//
// Variable leaves are shared within one graph. No other common
// subexpressions are detected.

#ifndef AMLKIT_EXPR_GRAPH_H_
#define AMLKIT_EXPR_GRAPH_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amlkit/builtins.h"
#include "amlkit/dual.h"
#include "amlkit/ids.h"

namespace amlkit {

class Model;

enum class NodeKind : uint8_t {
  kConstant,
  kVariable,
  kParameter,
  kSum,
  kProd,
  kPow,
  kNeg,
  kDiv,
  kCall,
  kUserCall,
};

struct Node {
  NodeKind kind = NodeKind::kConstant;
  Builtin builtin = Builtin::kAbs;  // kCall only
  // Variable index, parameter index or user function id.
  int32_t index = -1;
  // Constant value, or the exponent of kPow.
  double value = 0.0;
  uint32_t first_child = 0;
  uint32_t num_children = 0;
};

// A registered user-defined function. Bodies must be pure.
struct UserFunction {
  std::string name;
  int arity = 0;
  bool autodiff = true;
  std::function<double(std::span<const double>)> value;
  // Generic body instantiated on dual numbers; required when autodiff.
  std::function<Dual(std::span<const Dual>)> dual_value;
  // Hand-coded gradient; required when !autodiff.
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

// Append-only registry; ids are insertion indices.
class FunctionRegistry {
 public:
  // Throws RegistrationError on a duplicate name (including builtin names),
  // arity < 1, or missing callbacks.
  int32_t add(UserFunction fn);
  std::optional<int32_t> find(std::string_view name) const;
  const UserFunction& at(int32_t id) const { return functions_[id]; }
  int32_t size() const { return static_cast<int32_t>(functions_.size()); }

 private:
  std::vector<UserFunction> functions_;
};

// Wraps a generic body (callable on std::span<const double> and on
// std::span<const Dual>) into an autodiff user function.
template <typename Body>
UserFunction make_autodiff_function(std::string name, int arity, Body body) {
  UserFunction fn;
  fn.name = std::move(name);
  fn.arity = arity;
  fn.autodiff = true;
  fn.value = [body](std::span<const double> args) -> double {
    return body(args);
  };
  fn.dual_value = [body](std::span<const Dual> args) -> Dual {
    return body(args);
  };
  return fn;
}

class ExprGraph {
 public:
  ExprGraph() = default;

  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(int32_t i) const { return nodes_[i]; }
  std::span<const int32_t> children(const Node& n) const {
    return std::span<const int32_t>(children_).subspan(n.first_child,
                                                       n.num_children);
  }
  int32_t size() const { return static_cast<int32_t>(nodes_.size()); }
  int32_t root() const { return size() - 1; }
  bool empty() const { return nodes_.empty(); }

  // Sorted, unique indices of referenced variables.
  std::span<const int32_t> variables() const { return variables_; }
  bool has_user_calls() const { return has_user_calls_; }
  const FunctionRegistry* functions() const { return functions_.get(); }
  uint32_t owner() const { return owner_; }

  // One line per node, `index: kind[attr](children...)`.
  std::string dump() const;

  // Every child index smaller than its parent and every n-ary node non-empty.
  bool is_topologically_valid() const;

 private:
  friend class GraphBuilder;

  std::vector<Node> nodes_;
  std::vector<int32_t> children_;
  std::vector<int32_t> variables_;
  std::shared_ptr<const FunctionRegistry> functions_;
  bool has_user_calls_ = false;
  uint32_t owner_ = 0;
};

class GraphBuilder;

// Handle to a node under construction.
class Ex {
 public:
  Ex() = default;
  int32_t node() const { return node_; }
  GraphBuilder* builder() const { return builder_; }

 private:
  friend class GraphBuilder;
  Ex(GraphBuilder* b, int32_t node) : builder_(b), node_(node) {}

  GraphBuilder* builder_ = nullptr;
  int32_t node_ = -1;
};

class GraphBuilder {
 public:
  // The model supplies variable ownership, parameters and the function
  // registry; it must outlive the builder.
  explicit GraphBuilder(const Model& model);

  Ex constant(double v);
  // Throws OwnershipError for VarIds / ParamIds of another model.
  Ex var(VarId v);
  Ex param(ParamId p);

  Ex sum(std::span<const Ex> terms);
  Ex sum(std::initializer_list<Ex> terms) {
    return sum(std::span<const Ex>(terms.begin(), terms.size()));
  }
  Ex prod(std::span<const Ex> factors);
  Ex prod(std::initializer_list<Ex> factors) {
    return prod(std::span<const Ex>(factors.begin(), factors.size()));
  }
  Ex pow(Ex base, double exponent);
  Ex neg(Ex a);
  Ex div(Ex num, Ex den);
  Ex call(Builtin op, std::span<const Ex> args);
  // Builtins by name first, then registered user functions. Unknown names
  // and arity mismatches throw RegistrationError.
  Ex call(std::string_view name, std::span<const Ex> args);
  Ex call(std::string_view name, std::initializer_list<Ex> args) {
    return call(name, std::span<const Ex>(args.begin(), args.size()));
  }

  // Extracts the subgraph reachable from `root` and resets the builder.
  ExprGraph build(Ex root);

 private:
  Ex push(Node n, std::span<const Ex> kids);
  void check(Ex e) const;

  const Model* model_;
  std::vector<Node> nodes_;
  std::vector<int32_t> children_;
  std::unordered_map<uint32_t, int32_t> var_nodes_;
};

Ex operator+(Ex a, Ex b);
Ex operator+(Ex a, double b);
Ex operator+(double a, Ex b);
Ex operator-(Ex a, Ex b);
Ex operator-(Ex a, double b);
Ex operator-(double a, Ex b);
Ex operator-(Ex a);
Ex operator*(Ex a, Ex b);
Ex operator*(Ex a, double b);
Ex operator*(double a, Ex b);
Ex operator/(Ex a, Ex b);
Ex operator/(Ex a, double b);
Ex operator/(double a, Ex b);
Ex pow(Ex base, double exponent);
Ex abs(Ex a);
Ex exp(Ex a);
Ex log(Ex a);
Ex sqrt(Ex a);
Ex sin(Ex a);
Ex cos(Ex a);
Ex tan(Ex a);
Ex erf(Ex a);
Ex min(Ex a, Ex b);
Ex max(Ex a, Ex b);

// Forward sweep in topological order; returns the root value. Domain
// violations throw EvaluationError carrying the node index. `values`
// receives one entry per node.
double evaluate(const ExprGraph& g, std::span<const double> x,
                std::span<const double> params, std::vector<double>& values);
double evaluate(const ExprGraph& g, std::span<const double> x,
                std::span<const double> params = {});

}  // namespace amlkit

#endif  // AMLKIT_EXPR_GRAPH_H_
