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

#include "amlkit/autodiff.h"

#include <algorithm>

#include "amlkit/errors.h"
#include "graph_sweep.h"

namespace amlkit {

double accumulate_gradient(const ExprGraph& g, std::span<const double> x,
                           std::span<const double> params, double weight,
                           ReverseWorkspace& ws, std::span<double> grad) {
  if (g.empty()) return 0.0;
  ws.resize(g);
  const double f = internal::forward_sweep<double>(
      g, x, params, std::span<double>(ws.value));
  if (weight != 0.0) {
    internal::reverse_sweep<double>(g, ws.value, ws.adjoint, weight, grad);
  }
  return f;
}

double gradient(const ExprGraph& g, std::span<const double> x,
                std::span<const double> params, ReverseWorkspace& ws,
                std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  return accumulate_gradient(g, x, params, 1.0, ws, grad);
}

std::vector<double> gradient(const ExprGraph& g, std::span<const double> x,
                             std::span<const double> params) {
  ReverseWorkspace ws;
  std::vector<double> grad(x.size(), 0.0);
  gradient(g, x, params, ws, grad);
  return grad;
}

std::pair<double, double> forward_dual(const ExprGraph& g,
                                       std::span<const double> x,
                                       std::span<const double> d,
                                       std::span<const double> params) {
  if (g.empty()) return {0.0, 0.0};
  std::vector<Dual> dx(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) dx[j] = Dual(x[j], d[j]);
  std::vector<Dual> values(g.size());
  const Dual r = internal::forward_sweep<Dual>(g, dx, params, values);
  return {r.value, r.deriv};
}

std::pair<double, double> forward_dual(const UserFunction& fn,
                                       std::span<const double> x,
                                       std::span<const double> d) {
  std::vector<Dual> dx(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) dx[j] = Dual(x[j], d[j]);
  const Dual r = internal::call_user_forward<Dual>(fn, dx);
  return {r.value, r.deriv};
}

void accumulate_hvp(const ExprGraph& g, std::span<const double> x,
                    std::span<const double> d, std::span<const double> params,
                    double weight, ReverseWorkspace& ws,
                    std::span<double> hv) {
  if (g.empty() || weight == 0.0) return;
  if (g.has_user_calls()) {
    throw UnsupportedSecondOrderError(
        "Hessian-vector products through user-defined functions are not "
        "supported");
  }
  ws.resize_dual(g, x.size());
  // Only the referenced variables are touched, so the cost is independent
  // of x.size().
  for (int32_t j : g.variables()) {
    ws.dx[j] = Dual(x[j], d[j]);
    ws.dout[j] = Dual(0.0);
  }
  internal::forward_sweep<Dual>(g, ws.dx, params, std::span<Dual>(ws.dvalue));
  internal::reverse_sweep<Dual>(g, ws.dvalue, ws.dadjoint, Dual(weight),
                                ws.dout);
  for (int32_t j : g.variables()) hv[j] += ws.dout[j].deriv;
}

void hessian_vector_product(const ExprGraph& g, std::span<const double> x,
                            std::span<const double> d,
                            std::span<const double> params,
                            ReverseWorkspace& ws, std::span<double> hv) {
  std::fill(hv.begin(), hv.end(), 0.0);
  accumulate_hvp(g, x, d, params, 1.0, ws, hv);
}

std::vector<double> hessian_vector_product(const ExprGraph& g,
                                           std::span<const double> x,
                                           std::span<const double> d,
                                           std::span<const double> params) {
  ReverseWorkspace ws;
  std::vector<double> hv(x.size(), 0.0);
  hessian_vector_product(g, x, d, params, ws, hv);
  return hv;
}

bool has_curvature(const ExprGraph& g) {
  const auto nodes = g.nodes();
  std::vector<char> dep(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    const auto ch = g.children(n);
    int dep_children = 0;
    for (int32_t c : ch) dep_children += dep[c];
    dep[i] = n.kind == NodeKind::kVariable || dep_children > 0;
    if (dep_children == 0) continue;
    switch (n.kind) {
      case NodeKind::kProd:
        if (dep_children >= 2) return true;
        break;
      case NodeKind::kPow:
        if (n.value != 0.0 && n.value != 1.0) return true;
        break;
      case NodeKind::kDiv:
        if (dep[ch[1]]) return true;
        break;
      case NodeKind::kCall:
        if (builtin_info(n.builtin).smooth) return true;
        break;
      case NodeKind::kUserCall:
        return true;
      default:
        break;
    }
  }
  return false;
}

}  // namespace amlkit
