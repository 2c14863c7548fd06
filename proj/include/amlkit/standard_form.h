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

// Sparse standard-form extraction:
//
//   min  c'x + sum_{(i,j,q) in qobj} q x_i x_j + constant
//   s.t. A x (<=,=,>=) b,  lb <= x <= ub,  ||x_K|| <= x_t for each cone.
//
// Maximization models are negated at extraction. Cones are lifted so that
// every cone member is a plain column; auxiliary columns and their linking
// equality rows are appended after the model's own columns and rows.

#ifndef AMLKIT_STANDARD_FORM_H_
#define AMLKIT_STANDARD_FORM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "amlkit/ids.h"

namespace amlkit {

class Model;

struct Triplets {
  std::vector<int32_t> rows;
  std::vector<int32_t> cols;
  std::vector<double> vals;

  std::size_t size() const { return vals.size(); }
};

struct ConeIndex {
  int32_t t = 0;               // column index of the cone's radius
  std::vector<int32_t> x;      // column indices of the cone's members
};

struct StandardForm {
  int32_t num_vars = 0;
  // Columns [0, num_model_vars) are the model's own variables.
  int32_t num_model_vars = 0;
  std::vector<double> c;
  Triplets qobj;  // row <= col, coefficient of x_row * x_col as written
  Triplets a;     // row-major
  std::vector<double> b;
  std::vector<Sense> senses;
  std::vector<double> lb;
  std::vector<double> ub;
  std::vector<ConeIndex> cones;
  std::vector<int32_t> integers;
  // Not serialized.
  double objective_constant = 0.0;
  bool negated = false;  // model sense was maximize

  int32_t num_rows() const { return static_cast<int32_t>(b.size()); }
};

// Throws ModelError when the model has nonlinear parts or quadratic rows.
StandardForm to_standard_form(const Model& model);

// Extends a point over the model's variables with the values of the
// auxiliary cone columns.
std::vector<double> extend_point(const Model& model, const StandardForm& sf,
                                 std::span<const double> x);

// Minimization objective (including the constant) at x.
double objective_value(const StandardForm& sf, std::span<const double> x);
// A x
std::vector<double> row_activity(const StandardForm& sf,
                                 std::span<const double> x);

// Q with the 1/2 x'Qx convention, upper triangle: diagonal doubled.
Triplets half_scaled_qobj(const StandardForm& sf);

// JSON schema: num_vars, c, qobj{rows,cols,vals}, A{rows,cols,vals}, b,
// senses (LE/EQ/GE), lb, ub, cones[{t,x}], integers. Infinite bounds are
// written as "inf" / "-inf".
std::string to_json(const StandardForm& sf, int indent = 1);
// Throws ModelError on schema violations.
StandardForm standard_form_from_json(const std::string& text);

// Rebuilds a Model (linear/quadratic objective, linear rows, cones,
// binaries) from a standard form.
Model model_from_standard_form(const StandardForm& sf);

}  // namespace amlkit

#endif  // AMLKIT_STANDARD_FORM_H_
