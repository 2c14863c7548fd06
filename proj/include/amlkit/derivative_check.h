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

// Randomized derivative verification over every expression of a model:
// the objective, each scalar row, each nonlinear row and each cone (as
// ||x|| - t). At each random point within the bounds:
//
//   gradient     reverse mode vs central differences, step 1e-6 (1 + |x_i|)
//   hvp          forward-over-reverse vs differences of gradients
//   directional  reverse-mode grad'd vs one forward dual sweep
//   hessian      colored recovery of sum_g w_g H_g vs columns H e_i
//
// Graphs with user-defined calls skip the second-order checks.

#ifndef AMLKIT_DERIVATIVE_CHECK_H_
#define AMLKIT_DERIVATIVE_CHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "amlkit/expr_graph.h"
#include "amlkit/hessian_structure.h"

namespace amlkit {

class Model;

inline constexpr double kGradientTol = 1e-6;
inline constexpr double kHvpTol = 1e-5;
inline constexpr double kDirectionalTol = 1e-12;
inline constexpr double kHessianTol = 1e-8;

struct DerivativeCheckOptions {
  uint64_t seed = 1;
  int32_t points = 10;
  // Hessian columns compared per point; all columns when n is at most this.
  int32_t hessian_columns = 64;
  // Negative control: perturbs every reverse-mode gradient.
  bool corrupt_gradient = false;
};

struct DerivativeReport {
  int32_t graphs = 0;
  int32_t points = 0;
  double max_gradient_error = 0.0;
  double max_hvp_error = 0.0;
  double max_directional_error = 0.0;
  double max_hessian_error = 0.0;
  int32_t colors = 0;
  bool hessian_diagonal = false;
  bool coloring_valid = true;

  // Name of the first failing check, empty when all pass.
  std::string failure() const;
  bool passed() const { return failure().empty(); }
};

// All expressions of the model as graphs (objective first).
std::vector<ExprGraph> model_graphs(const Model& model);

DerivativeReport check_derivatives(const Model& model,
                                   const DerivativeCheckOptions& options = {});

}  // namespace amlkit

#endif  // AMLKIT_DERIVATIVE_CHECK_H_
