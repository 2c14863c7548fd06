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

// Solver-facing derivative oracle for
//
//   min f(x)  s.t.  g_i(x) <= 0,  h_i(x) = 0.
//
// Rows are taken from the model's scalar constraints (in insertion order)
// followed by its nonlinear constraints. Inequalities become g rows
// (body - rhs for <=, rhs - body for >=) and come first; equalities become
// h rows (body - rhs). Maximization objectives are negated.
//
// Sparsity lists are sorted lexicographically and value arrays align with
// them index for index. The Hessian of the Lagrangian is returned as its
// lower triangle (row >= col).
//
// User-defined functions have no second-order support: graphs calling them
// are left out of the Hessian, with a warning on stderr.

#ifndef AMLKIT_NLP_EVALUATOR_H_
#define AMLKIT_NLP_EVALUATOR_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "amlkit/autodiff.h"
#include "amlkit/expr_graph.h"
#include "amlkit/hessian_structure.h"

namespace amlkit {

class Model;
class QuadExpr;

// Expression graph of a linear or quadratic expression.
ExprGraph to_graph(const Model& model, const QuadExpr& e);

struct NlpDims {
  int32_t n = 0;
  int32_t m_g = 0;
  int32_t m_h = 0;
};

struct NlpWorkspace {
  ReverseWorkspace rev;
  std::vector<double> dense;
  std::vector<double> direction;
  std::vector<double> products;
};

class NlpEvaluator {
 public:
  // The model must outlive the evaluator; parameter values are read at
  // each call. Throws ModelError for models with cone constraints.
  explicit NlpEvaluator(const Model& model);

  NlpDims dims() const { return dims_; }
  int32_t num_rows() const { return dims_.m_g + dims_.m_h; }

  double objective(std::span<const double> x, NlpWorkspace& ws) const;
  // Returns f(x).
  double objective_gradient(std::span<const double> x, NlpWorkspace& ws,
                            std::span<double> grad) const;
  // g values then h values. Domain errors carry the row index.
  void constraints(std::span<const double> x, NlpWorkspace& ws,
                   std::span<double> out) const;

  const std::vector<std::pair<int32_t, int32_t>>& jacobian_structure() const {
    return jacobian_structure_;
  }
  void jacobian(std::span<const double> x, NlpWorkspace& ws,
                std::span<double> values) const;

  const std::vector<std::pair<int32_t, int32_t>>& hessian_structure() const {
    return hessian_structure_;
  }
  // sigma * Hf + sum_i lambda_i * Hc_i, lower triangle.
  void hessian_lagrangian(std::span<const double> x, double sigma,
                          std::span<const double> lambda, NlpWorkspace& ws,
                          std::span<double> values) const;

  const SparsityPattern& hessian_pattern() const { return pattern_; }
  const Coloring& hessian_coloring() const { return coloring_; }
  bool hessian_excludes_user_functions() const { return excluded_user_; }

  const ExprGraph& objective_graph() const { return objective_; }
  const ExprGraph& row_graph(int32_t row) const { return rows_[row].graph; }

 private:
  struct Row {
    ExprGraph graph;
    double scale = 1.0;   // row = scale * graph + offset
    double offset = 0.0;
    int32_t source = 0;   // model constraint or nl constraint index
    bool in_hessian = false;
  };

  const Model* model_;
  NlpDims dims_;
  ExprGraph objective_;
  double objective_scale_ = 1.0;
  bool objective_in_hessian_ = false;
  std::vector<Row> rows_;
  std::vector<std::pair<int32_t, int32_t>> jacobian_structure_;
  std::vector<int32_t> jacobian_row_start_;
  SparsityPattern pattern_;
  Coloring coloring_;
  // hessian_structure_[k] is the transpose of pattern_.entries[perm_[k]].
  std::vector<std::pair<int32_t, int32_t>> hessian_structure_;
  std::vector<int32_t> perm_;
  bool excluded_user_ = false;
};

}  // namespace amlkit

#endif  // AMLKIT_NLP_EVALUATOR_H_
