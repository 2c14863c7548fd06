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

// Kelley outer approximation. Each convex constraint c(x) <= 0 is replaced
// by tangent cuts c(v) + grad c(v)'(x - v) <= 0 added at LP solutions v that
// violate it. Convexity of every c is assumed, not checked; for a
// nonconvex c the cuts may remove feasible points.

#ifndef AMLKIT_CUTTING_PLANE_H_
#define AMLKIT_CUTTING_PLANE_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "amlkit/autodiff.h"
#include "amlkit/expr_graph.h"
#include "amlkit/model.h"
#include "amlkit/simplex.h"

namespace amlkit {

class CutGenerator {
 public:
  virtual ~CutGenerator() = default;

  // Model variables c depends on, ascending.
  const std::vector<int32_t>& support() const { return support_; }
  // Returns c(x) and writes dc/dx_j to grad[j] for every j in support().
  virtual double evaluate(std::span<const double> x,
                          std::span<double> grad) = 0;

 protected:
  std::vector<int32_t> support_;
};

// ||x(v)||_2 - t(v) for a second-order cone constraint.
class ConeCut : public CutGenerator {
 public:
  explicit ConeCut(const ConeConstraint& cone);
  double evaluate(std::span<const double> x, std::span<double> grad) override;

 private:
  AffExpr t_;
  std::vector<AffExpr> x_;
  std::vector<double> r_;
};

// body(x) + extra(x) - rhs for <=, rhs - body(x) - extra(x) for >=.
// Gradients come from reverse-mode AD. Parameter values are captured at
// construction.
class GraphCut : public CutGenerator {
 public:
  // Throws ModelError for equality rows (not convex in general).
  GraphCut(const Model& model, ExprGraph body, Sense sense, double rhs,
           AffExpr extra = AffExpr());
  double evaluate(std::span<const double> x, std::span<double> grad) override;

 private:
  ExprGraph body_;
  AffExpr extra_;
  double sign_;
  double rhs_;
  std::vector<double> params_;
  ReverseWorkspace ws_;
  std::vector<double> dense_;
};

// Hand-written value and gradient oracle.
class FunctionCut : public CutGenerator {
 public:
  using Oracle =
      std::function<double(std::span<const double>, std::span<double>)>;
  FunctionCut(std::vector<int32_t> support, Oracle oracle);
  double evaluate(std::span<const double> x, std::span<double> grad) override {
    return oracle_(x, grad);
  }

 private:
  Oracle oracle_;
};

// Smallest accepted cut tolerance. Tighter values are below the LP
// feasibility tolerance and cannot be met.
inline constexpr double kMinCutTol = 1e-9;

struct CuttingPlaneOptions {
  double tol = 1e-6;  // ModelError when below kMinCutTol
  int64_t max_rounds = 0;  // 0: 10 * num_vars + 100
  // false: every round re-solves from the all-slack basis.
  bool warm = true;
  // Stop once the LP bound (in minimization form) reaches this value.
  double cutoff = std::numeric_limits<double>::infinity();
};

// Runs the loop on the session's model; cuts are added to that model with
// add_constraint and therefore reach the tableau incrementally. When
// `start` is non-empty, one tangent cut per generator is added at that
// point before the first LP.
SolveResult cutting_plane_solve(SolverSession& session,
                                std::span<CutGenerator* const> generators,
                                const CuttingPlaneOptions& options,
                                std::span<const double> start = {});

// A model prepared for the loop: quadratic and nonlinear objectives are
// moved into an epigraph variable, and every cone, quadratic row and
// nonlinear constraint gets a generator.
struct Relaxation {
  Model model;
  int32_t num_original = 0;
  bool has_epigraph = false;
  std::vector<std::unique_ptr<CutGenerator>> generators;
  // Start point for the initial tangent cuts; empty when the model has no
  // start values and no epigraph variable.
  std::vector<double> start;

  std::vector<CutGenerator*> generator_pointers() const;
};

Relaxation make_relaxation(const Model& model);

// Solves a model through make_relaxation. x and objective refer to the
// original model.
SolveResult cutting_plane_solve(const Model& model,
                                const CuttingPlaneOptions& options = {});

}  // namespace amlkit

#endif  // AMLKIT_CUTTING_PLANE_H_
