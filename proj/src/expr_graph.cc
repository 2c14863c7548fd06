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

#include "amlkit/expr_graph.h"

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>

#include "amlkit/errors.h"
#include "amlkit/model.h"
#include "graph_sweep.h"

namespace amlkit {

int32_t FunctionRegistry::add(UserFunction fn) {
  if (fn.name.empty()) throw RegistrationError("function name is empty");
  if (find_builtin(fn.name) || find(fn.name)) {
    throw RegistrationError("function '" + fn.name + "' is already defined");
  }
  if (fn.arity < 1) {
    throw RegistrationError("function '" + fn.name + "' needs arity >= 1");
  }
  if (!fn.value) {
    throw RegistrationError("function '" + fn.name + "' has no body");
  }
  if (fn.autodiff && !fn.dual_value) {
    throw RegistrationError("function '" + fn.name +
                            "' requests autodiff but has no generic body");
  }
  if (!fn.autodiff && !fn.gradient) {
    throw RegistrationError("function '" + fn.name +
                            "' has autodiff disabled and no derivative "
                            "callback");
  }
  functions_.push_back(std::move(fn));
  return static_cast<int32_t>(functions_.size()) - 1;
}

std::optional<int32_t> FunctionRegistry::find(std::string_view name) const {
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    if (functions_[i].name == name) return static_cast<int32_t>(i);
  }
  return std::nullopt;
}

namespace {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::kConstant:
      return "const";
    case NodeKind::kVariable:
      return "var";
    case NodeKind::kParameter:
      return "param";
    case NodeKind::kSum:
      return "sum";
    case NodeKind::kProd:
      return "prod";
    case NodeKind::kPow:
      return "pow";
    case NodeKind::kNeg:
      return "neg";
    case NodeKind::kDiv:
      return "div";
    case NodeKind::kCall:
      return "call";
    case NodeKind::kUserCall:
      return "user";
  }
  return "?";
}

bool is_nary(NodeKind k) {
  return k == NodeKind::kSum || k == NodeKind::kProd;
}

}  // namespace

std::string ExprGraph::dump() const {
  std::ostringstream os;
  os.precision(17);
  for (int32_t i = 0; i < size(); ++i) {
    const Node& n = nodes_[i];
    os << i << ": " << kind_name(n.kind);
    switch (n.kind) {
      case NodeKind::kConstant:
      case NodeKind::kPow:
        os << '[' << n.value << ']';
        break;
      case NodeKind::kVariable:
        os << "[x" << n.index << ']';
        break;
      case NodeKind::kParameter:
        os << "[p" << n.index << ']';
        break;
      case NodeKind::kCall:
        os << '[' << builtin_info(n.builtin).name << ']';
        break;
      case NodeKind::kUserCall:
        os << '[' << functions_->at(n.index).name << ']';
        break;
      default:
        break;
    }
    os << '(';
    const auto ch = children(n);
    for (std::size_t k = 0; k < ch.size(); ++k) {
      if (k > 0) os << ',';
      os << ch[k];
    }
    os << ")\n";
  }
  return os.str();
}

bool ExprGraph::is_topologically_valid() const {
  for (int32_t i = 0; i < size(); ++i) {
    const Node& n = nodes_[i];
    if (n.first_child + n.num_children > children_.size()) return false;
    if (is_nary(n.kind) && n.num_children == 0) return false;
    for (int32_t c : children(n)) {
      if (c < 0 || c >= i) return false;
    }
  }
  return true;
}

GraphBuilder::GraphBuilder(const Model& model) : model_(&model) {}

void GraphBuilder::check(Ex e) const {
  if (e.builder_ != this || e.node_ < 0 ||
      e.node_ >= static_cast<int32_t>(nodes_.size())) {
    throw ModelError("expression handle belongs to another builder");
  }
}

Ex GraphBuilder::push(Node n, std::span<const Ex> kids) {
  n.first_child = static_cast<uint32_t>(children_.size());
  n.num_children = static_cast<uint32_t>(kids.size());
  for (const Ex& k : kids) {
    check(k);
    children_.push_back(k.node_);
  }
  nodes_.push_back(n);
  return Ex(this, static_cast<int32_t>(nodes_.size()) - 1);
}

Ex GraphBuilder::constant(double v) {
  Node n;
  n.kind = NodeKind::kConstant;
  n.value = v;
  return push(n, {});
}

Ex GraphBuilder::var(VarId v) {
  model_->check_owned(v);
  if (auto it = var_nodes_.find(v.index); it != var_nodes_.end()) {
    return Ex(this, it->second);
  }
  Node n;
  n.kind = NodeKind::kVariable;
  n.index = static_cast<int32_t>(v.index);
  Ex e = push(n, {});
  var_nodes_.emplace(v.index, e.node_);
  return e;
}

Ex GraphBuilder::param(ParamId p) {
  model_->check_owned(p);
  Node n;
  n.kind = NodeKind::kParameter;
  n.index = static_cast<int32_t>(p.index);
  return push(n, {});
}

Ex GraphBuilder::sum(std::span<const Ex> terms) {
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return terms[0];
  Node n;
  n.kind = NodeKind::kSum;
  return push(n, terms);
}

Ex GraphBuilder::prod(std::span<const Ex> factors) {
  if (factors.empty()) return constant(1.0);
  if (factors.size() == 1) return factors[0];
  Node n;
  n.kind = NodeKind::kProd;
  return push(n, factors);
}

Ex GraphBuilder::pow(Ex base, double exponent) {
  Node n;
  n.kind = NodeKind::kPow;
  n.value = exponent;
  return push(n, std::span<const Ex>(&base, 1));
}

Ex GraphBuilder::neg(Ex a) {
  Node n;
  n.kind = NodeKind::kNeg;
  return push(n, std::span<const Ex>(&a, 1));
}

Ex GraphBuilder::div(Ex num, Ex den) {
  Node n;
  n.kind = NodeKind::kDiv;
  const Ex kids[2] = {num, den};
  return push(n, kids);
}

Ex GraphBuilder::call(Builtin op, std::span<const Ex> args) {
  const BuiltinInfo& info = builtin_info(op);
  if (static_cast<int>(args.size()) != info.arity) {
    throw RegistrationError(std::string(info.name) + " expects " +
                            std::to_string(info.arity) + " argument(s)");
  }
  Node n;
  n.kind = NodeKind::kCall;
  n.builtin = op;
  return push(n, args);
}

Ex GraphBuilder::call(std::string_view name, std::span<const Ex> args) {
  if (auto op = find_builtin(name)) return call(*op, args);
  const auto registry = model_->functions();
  const auto id = registry->find(name);
  if (!id) {
    throw RegistrationError("unknown function '" + std::string(name) + "'");
  }
  const UserFunction& fn = registry->at(*id);
  if (static_cast<int>(args.size()) != fn.arity) {
    throw RegistrationError(fn.name + " expects " + std::to_string(fn.arity) +
                            " argument(s)");
  }
  Node n;
  n.kind = NodeKind::kUserCall;
  n.index = *id;
  return push(n, args);
}

ExprGraph GraphBuilder::build(Ex root) {
  check(root);
  const int32_t r = root.node_;
  // Mark nodes reachable from the root; children always precede parents.
  std::vector<char> live(r + 1, 0);
  live[r] = 1;
  for (int32_t i = r; i >= 0; --i) {
    if (!live[i]) continue;
    const Node& n = nodes_[i];
    for (uint32_t k = 0; k < n.num_children; ++k) {
      live[children_[n.first_child + k]] = 1;
    }
  }
  std::vector<int32_t> remap(r + 1, -1);
  ExprGraph g;
  for (int32_t i = 0; i <= r; ++i) {
    if (!live[i]) continue;
    Node n = nodes_[i];
    const uint32_t first = n.first_child;
    n.first_child = static_cast<uint32_t>(g.children_.size());
    for (uint32_t k = 0; k < n.num_children; ++k) {
      g.children_.push_back(remap[children_[first + k]]);
    }
    if (n.kind == NodeKind::kVariable) g.variables_.push_back(n.index);
    if (n.kind == NodeKind::kUserCall) g.has_user_calls_ = true;
    remap[i] = static_cast<int32_t>(g.nodes_.size());
    g.nodes_.push_back(n);
  }
  std::sort(g.variables_.begin(), g.variables_.end());
  g.variables_.erase(std::unique(g.variables_.begin(), g.variables_.end()),
                     g.variables_.end());
  g.functions_ = model_->functions();
  g.owner_ = model_->id();

  nodes_.clear();
  children_.clear();
  var_nodes_.clear();
  return g;
}

namespace {

GraphBuilder& builder_of(Ex a) {
  if (a.builder() == nullptr) throw ModelError("empty expression handle");
  return *a.builder();
}

}  // namespace

Ex operator+(Ex a, Ex b) { return builder_of(a).sum({a, b}); }
Ex operator+(Ex a, double b) {
  return builder_of(a).sum({a, builder_of(a).constant(b)});
}
Ex operator+(double a, Ex b) {
  return builder_of(b).sum({builder_of(b).constant(a), b});
}
Ex operator-(Ex a, Ex b) {
  return builder_of(a).sum({a, builder_of(a).neg(b)});
}
Ex operator-(Ex a, double b) { return a + (-b); }
Ex operator-(double a, Ex b) {
  return builder_of(b).sum({builder_of(b).constant(a), builder_of(b).neg(b)});
}
Ex operator-(Ex a) { return builder_of(a).neg(a); }
Ex operator*(Ex a, Ex b) { return builder_of(a).prod({a, b}); }
Ex operator*(Ex a, double b) {
  return builder_of(a).prod({a, builder_of(a).constant(b)});
}
Ex operator*(double a, Ex b) {
  return builder_of(b).prod({builder_of(b).constant(a), b});
}
Ex operator/(Ex a, Ex b) { return builder_of(a).div(a, b); }
Ex operator/(Ex a, double b) {
  return builder_of(a).div(a, builder_of(a).constant(b));
}
Ex operator/(double a, Ex b) {
  return builder_of(b).div(builder_of(b).constant(a), b);
}
Ex pow(Ex base, double exponent) { return builder_of(base).pow(base, exponent); }

namespace {

Ex unary(Builtin op, Ex a) {
  return builder_of(a).call(op, std::span<const Ex>(&a, 1));
}

Ex binary(Builtin op, Ex a, Ex b) {
  const Ex args[2] = {a, b};
  return builder_of(a).call(op, args);
}

}  // namespace

Ex abs(Ex a) { return unary(Builtin::kAbs, a); }
Ex exp(Ex a) { return unary(Builtin::kExp, a); }
Ex log(Ex a) { return unary(Builtin::kLog, a); }
Ex sqrt(Ex a) { return unary(Builtin::kSqrt, a); }
Ex sin(Ex a) { return unary(Builtin::kSin, a); }
Ex cos(Ex a) { return unary(Builtin::kCos, a); }
Ex tan(Ex a) { return unary(Builtin::kTan, a); }
Ex erf(Ex a) { return unary(Builtin::kErf, a); }
Ex min(Ex a, Ex b) { return binary(Builtin::kMin, a, b); }
Ex max(Ex a, Ex b) { return binary(Builtin::kMax, a, b); }

double evaluate(const ExprGraph& g, std::span<const double> x,
                std::span<const double> params, std::vector<double>& values) {
  if (g.empty()) return 0.0;
  values.resize(g.size());
  return internal::forward_sweep<double>(g, x, params, values);
}

double evaluate(const ExprGraph& g, std::span<const double> x,
                std::span<const double> params) {
  std::vector<double> values;
  return evaluate(g, x, params, values);
}

}  // namespace amlkit
