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

// Derivatives of expression graphs.
//
// gradient() runs one forward sweep and one reverse sweep. The Hessian-
// vector product runs the same reverse sweep on dual numbers seeded with
// the direction d: the tangent of each adjoint is then the directional
// derivative of that adjoint, and the tangent of the gradient is H d.
//
// All entry points take a caller-owned workspace; concurrent callers need
// one workspace each.

#ifndef AMLKIT_AUTODIFF_H_
#define AMLKIT_AUTODIFF_H_

#include <span>
#include <utility>
#include <vector>

#include "amlkit/dual.h"
#include "amlkit/expr_graph.h"

namespace amlkit {

struct ReverseWorkspace {
  std::vector<double> value;
  std::vector<double> adjoint;
  std::vector<Dual> dvalue;
  std::vector<Dual> dadjoint;
  std::vector<Dual> dx;
  std::vector<Dual> dout;

  void resize(const ExprGraph& g) {
    value.resize(g.size());
    adjoint.resize(g.size());
  }
  void resize_dual(const ExprGraph& g, std::size_t n) {
    dvalue.resize(g.size());
    dadjoint.resize(g.size());
    dx.resize(n);
    dout.resize(n);
  }
};

// Dense gradient over all x.size() variables; returns f(x).
double gradient(const ExprGraph& g, std::span<const double> x,
                std::span<const double> params, ReverseWorkspace& ws,
                std::span<double> grad);
std::vector<double> gradient(const ExprGraph& g, std::span<const double> x,
                             std::span<const double> params = {});
// grad += weight * df/dx; returns f(x).
double accumulate_gradient(const ExprGraph& g, std::span<const double> x,
                           std::span<const double> params, double weight,
                           ReverseWorkspace& ws, std::span<double> grad);

// (f(x), grad f(x)' d) in one dual forward sweep.
std::pair<double, double> forward_dual(const ExprGraph& g,
                                       std::span<const double> x,
                                       std::span<const double> d,
                                       std::span<const double> params = {});
// Evaluates a user function body on dual numbers.
std::pair<double, double> forward_dual(const UserFunction& fn,
                                       std::span<const double> x,
                                       std::span<const double> d);

// hv = H(x) d. Throws UnsupportedSecondOrderError on graphs with user calls.
void hessian_vector_product(const ExprGraph& g, std::span<const double> x,
                            std::span<const double> d,
                            std::span<const double> params,
                            ReverseWorkspace& ws, std::span<double> hv);
std::vector<double> hessian_vector_product(const ExprGraph& g,
                                           std::span<const double> x,
                                           std::span<const double> d,
                                           std::span<const double> params = {});
// hv += weight * H(x) d.
void accumulate_hvp(const ExprGraph& g, std::span<const double> x,
                    std::span<const double> d, std::span<const double> params,
                    double weight, ReverseWorkspace& ws, std::span<double> hv);

// False when the graph is affine in the variables, so its Hessian is zero.
bool has_curvature(const ExprGraph& g);

}  // namespace amlkit

#endif  // AMLKIT_AUTODIFF_H_
