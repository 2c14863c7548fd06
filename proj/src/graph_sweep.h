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

// Forward and reverse sweeps over an ExprGraph, generic over the scalar
// type (double or Dual). Instantiating the reverse sweep on Dual gives
// forward-over-reverse second-order products.

#ifndef AMLKIT_SRC_GRAPH_SWEEP_H_
#define AMLKIT_SRC_GRAPH_SWEEP_H_

#include <cmath>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "amlkit/builtins.h"
#include "amlkit/dual.h"
#include "amlkit/errors.h"
#include "amlkit/expr_graph.h"

namespace amlkit::internal {

inline double primal(double v) { return v; }
inline double primal(const Dual& v) { return v.value; }

[[noreturn]] inline void domain_error(const std::string& what, int32_t node) {
  throw EvaluationError(what + " at node " + std::to_string(node), node);
}

template <typename T>
T call_user_forward(const UserFunction& fn, std::span<const T> args) {
  if constexpr (std::is_same_v<T, double>) {
    return fn.value(args);
  } else {
    if (fn.dual_value) return fn.dual_value(args);
    std::vector<double> xv(args.size()), grad(args.size(), 0.0);
    for (std::size_t k = 0; k < args.size(); ++k) xv[k] = args[k].value;
    fn.gradient(xv, grad);
    Dual out(fn.value(xv), 0.0);
    for (std::size_t k = 0; k < args.size(); ++k) {
      out.deriv += grad[k] * args[k].deriv;
    }
    return out;
  }
}

// Gradient of a user function at `args`: the hand-coded callback when
// present, otherwise one dual evaluation per argument.
inline void user_gradient(const UserFunction& fn, std::span<const double> args,
                          std::span<double> grad) {
  if (fn.gradient) {
    fn.gradient(args, grad);
    return;
  }
  std::vector<Dual> seed(args.begin(), args.end());
  for (std::size_t k = 0; k < args.size(); ++k) {
    seed[k].deriv = 1.0;
    grad[k] = fn.dual_value(seed).deriv;
    seed[k].deriv = 0.0;
  }
}

// Fills values[i] for every node. x is indexed by variable index.
template <typename T>
T forward_sweep(const ExprGraph& g, std::span<const T> x,
                std::span<const double> params, std::span<T> values) {
  const auto nodes = g.nodes();
  for (int32_t i = 0; i < static_cast<int32_t>(nodes.size()); ++i) {
    const Node& n = nodes[i];
    const auto ch = g.children(n);
    T v{};
    switch (n.kind) {
      case NodeKind::kConstant:
        v = T(n.value);
        break;
      case NodeKind::kVariable:
        v = x[n.index];
        break;
      case NodeKind::kParameter:
        v = T(params[n.index]);
        break;
      case NodeKind::kSum:
        v = values[ch[0]];
        for (std::size_t k = 1; k < ch.size(); ++k) v += values[ch[k]];
        break;
      case NodeKind::kProd:
        v = values[ch[0]];
        for (std::size_t k = 1; k < ch.size(); ++k) v *= values[ch[k]];
        break;
      case NodeKind::kPow: {
        const T& b = values[ch[0]];
        if (!pow_in_domain(primal(b), n.value)) {
          domain_error("negative base with non-integer exponent", i);
        }
        v = apply_pow(b, n.value);
        break;
      }
      case NodeKind::kNeg:
        v = -values[ch[0]];
        break;
      case NodeKind::kDiv:
        if (primal(values[ch[1]]) == 0.0) domain_error("division by zero", i);
        v = values[ch[0]] / values[ch[1]];
        break;
      case NodeKind::kCall:
        if (builtin_info(n.builtin).arity == 2) {
          const int sel = binary_selected(n.builtin, primal(values[ch[0]]),
                                          primal(values[ch[1]]));
          v = values[ch[sel]];
        } else {
          const T& a = values[ch[0]];
          if (!unary_in_domain(n.builtin, primal(a))) {
            domain_error(std::string(builtin_info(n.builtin).name) +
                             " argument outside its domain",
                         i);
          }
          v = apply_unary(n.builtin, a);
        }
        break;
      case NodeKind::kUserCall: {
        std::vector<T> args(ch.size());
        for (std::size_t k = 0; k < ch.size(); ++k) args[k] = values[ch[k]];
        v = call_user_forward<T>(g.functions()->at(n.index),
                                 std::span<const T>(args));
        break;
      }
    }
    if (!std::isfinite(primal(v))) domain_error("non-finite value", i);
    values[i] = v;
  }
  return values[nodes.size() - 1];
}

// Reverse sweep after forward_sweep. Adds weight * d(root)/d(x_j) into
// out[j]. With T = Dual the values and adjoints carry a tangent, and the
// tangent part of out is the Hessian-vector product.
template <typename T>
void reverse_sweep(const ExprGraph& g, std::span<const T> values,
                   std::span<T> adjoint, T weight, std::span<T> out) {
  const auto nodes = g.nodes();
  const int32_t root = static_cast<int32_t>(nodes.size()) - 1;
  for (int32_t i = 0; i < root; ++i) adjoint[i] = T(0.0);
  adjoint[root] = weight;
  std::vector<T> prefix;
  for (int32_t i = root; i >= 0; --i) {
    const Node& n = nodes[i];
    const T a = adjoint[i];
    const auto ch = g.children(n);
    switch (n.kind) {
      case NodeKind::kConstant:
      case NodeKind::kParameter:
        break;
      case NodeKind::kVariable:
        out[n.index] += a;
        break;
      case NodeKind::kSum:
        for (int32_t c : ch) adjoint[c] += a;
        break;
      case NodeKind::kProd: {
        // Partial for factor k is prefix(k) * suffix(k).
        const std::size_t m = ch.size();
        prefix.assign(m, T(1.0));
        for (std::size_t k = 1; k < m; ++k) {
          prefix[k] = prefix[k - 1] * values[ch[k - 1]];
        }
        T suffix(1.0);
        for (std::size_t k = m; k-- > 0;) {
          adjoint[ch[k]] += a * prefix[k] * suffix;
          suffix *= values[ch[k]];
        }
        break;
      }
      case NodeKind::kPow:
        adjoint[ch[0]] += a * apply_pow_d1(values[ch[0]], n.value);
        break;
      case NodeKind::kNeg:
        adjoint[ch[0]] -= a;
        break;
      case NodeKind::kDiv: {
        const T q = a / values[ch[1]];
        adjoint[ch[0]] += q;
        adjoint[ch[1]] -= q * values[i];
        break;
      }
      case NodeKind::kCall:
        if (builtin_info(n.builtin).arity == 2) {
          const int sel = binary_selected(n.builtin, primal(values[ch[0]]),
                                          primal(values[ch[1]]));
          adjoint[ch[sel]] += a;
        } else {
          adjoint[ch[0]] += a * apply_unary_d1(n.builtin, values[ch[0]]);
        }
        break;
      case NodeKind::kUserCall: {
        const UserFunction& fn = g.functions()->at(n.index);
        if constexpr (std::is_same_v<T, double>) {
          std::vector<double> args(ch.size()), grad(ch.size(), 0.0);
          for (std::size_t k = 0; k < ch.size(); ++k) args[k] = values[ch[k]];
          user_gradient(fn, args, grad);
          for (std::size_t k = 0; k < ch.size(); ++k) {
            adjoint[ch[k]] += a * grad[k];
          }
        } else {
          throw UnsupportedSecondOrderError(
              "second-order derivatives of user function '" + fn.name +
              "' are not supported");
        }
        break;
      }
    }
  }
}

}  // namespace amlkit::internal

#endif  // AMLKIT_SRC_GRAPH_SWEEP_H_
