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

// Dense-tableau bounded simplex and the solver session that keeps it in
// sync with a Model.
//
// Every row i gets a slack s_i with a_i x + s_i = b_i; its bounds encode the
// sense ([0, inf) for <=, (-inf, 0] for >=, [0, 0] for =). The tableau holds
// B^-1 [A | I], so the slack columns are B^-1 itself.
//
// A cold solve starts from the all-slack basis, adds one artificial column
// per violated row, and runs primal simplex twice (phase 1 then phase 2).
// After a row is added to a solved problem the old basis stays dual
// feasible and dual simplex restores primal feasibility.
//
// Intended for desk-scale problems: rows + columns beyond 5000 only warn.

#ifndef AMLKIT_SIMPLEX_H_
#define AMLKIT_SIMPLEX_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "amlkit/ids.h"
#include "amlkit/model.h"

namespace amlkit {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* status_name(SolveStatus s);

class DenseSimplex {
 public:
  struct Options {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    int64_t max_iterations = 0;  // 0: 50 * (rows + columns) + 1000
  };

  DenseSimplex() = default;
  explicit DenseSimplex(Options options) : options_(options) {}

  // Structural columns. Clears all rows and any basis.
  void reset(std::span<const double> cost, std::span<const double> lb,
             std::span<const double> ub);
  // Appends a row. With a basis present the row is expressed in terms of
  // the current basis and its slack becomes basic.
  void add_row(std::span<const int32_t> cols, std::span<const double> vals,
               Sense sense, double rhs);
  // Keeps a solved basis dual feasible by moving a nonbasic column to the
  // bound matching the sign of its reduced cost.
  void set_bounds(int32_t col, double lb, double ub);

  // Warm when a basis exists (dual simplex, then primal clean-up), cold
  // otherwise.
  SolveStatus solve();
  SolveStatus cold_solve();

  int32_t num_structural() const { return n_; }
  int32_t num_rows() const { return m_; }
  bool has_basis() const { return has_basis_; }
  std::span<const double> values() const {
    return std::span<const double>(x_).first(n_);
  }
  double objective() const;
  // Pivots (including bound flips) of the last solve() / cold_solve().
  int64_t last_pivots() const { return last_pivots_; }
  bool used_bland() const { return used_bland_; }

 private:
  struct Candidate {
    int32_t col = 0;
    double ratio = 0.0;
    double alpha = 0.0;
  };
  struct SparseRow {
    std::vector<int32_t> cols;
    std::vector<double> vals;
    double rhs = 0.0;
  };

  int32_t num_cols() const { return static_cast<int32_t>(x_.size()); }
  int32_t slack(int32_t row) const { return slack_col_[row]; }
  void add_column(double cost, double lb, double ub, double value);
  void rebuild_tableau();
  void compute_reduced_costs(std::span<const double> cost);
  void refresh_basic_values();
  // Recomputes B^-1 [A | I] from the original rows, then the reduced costs
  // and basic values. Returns false (tableau kept) when B is singular.
  bool reinvert();
  double max_row_residual() const;
  bool primal_feasible() const;
  // Reinverts and re-optimizes an optimal basis whose rows drifted.
  SolveStatus polish(SolveStatus status);
  void pivot(int32_t row, int32_t col);
  bool nonbasic_dual_feasible(int32_t j) const;
  bool basis_dual_feasible() const;
  double nonbasic_start(int32_t j) const;
  SolveStatus primal();
  SolveStatus dual();
  SolveStatus dual_loop();
  int64_t iteration_cap() const;

  Options options_;
  int32_t n_ = 0;
  int32_t m_ = 0;
  std::vector<double> cost_;       // per column
  std::vector<double> lo_, up_;    // per column
  std::vector<double> x_;          // per column
  std::vector<int32_t> basic_row_; // per column, -1 when nonbasic
  std::vector<int32_t> head_;      // per row: basic column
  std::vector<int32_t> slack_col_; // per row
  std::vector<int32_t> art_row_;   // per column: row of an artificial, -1
  std::vector<double> art_sign_;   // per column: +-1 for artificials
  std::vector<SparseRow> rows_;
  std::vector<std::vector<double>> tab_;  // m x num_cols
  std::vector<double> d_;                 // reduced costs
  std::vector<double> active_cost_;       // cost behind d_
  std::vector<int32_t> nz_;               // pivot row pattern
  std::vector<Candidate> candidates_;     // dual ratio test
  bool has_basis_ = false;
  int64_t last_pivots_ = 0;
  int64_t pivots_since_refresh_ = 0;
  int64_t pivots_since_reinvert_ = 0;
  bool used_bland_ = false;
  bool warned_size_ = false;
};

struct TraceEntry {
  int32_t iteration = 0;
  double objective = 0.0;
  int32_t cuts = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kOptimal;
  double objective = 0.0;  // in the model's sense
  std::vector<double> x;   // over the model's variables
  int64_t pivots = 0;
  int64_t cuts = 0;
  int64_t nodes = 0;
  int64_t iterations = 0;  // cut rounds that added at least one cut
  std::vector<TraceEntry> trace;
};

// {"status","objective","x":[...],"pivots","cuts","nodes"}
std::string to_json(const SolveResult& r);

// Mirrors the linear part of a Model in a DenseSimplex. Linear rows added
// to the model while the session is attached are pushed to the tableau
// incrementally; bound changes are applied in place. Cone, quadratic and
// nonlinear constraints are not loaded (they are handled by cut
// generators). Any other mutation marks the session for a full rebuild at
// the next solve. The model must outlive the session and must not be moved
// while it is attached.
class SolverSession : public ModelListener {
 public:
  explicit SolverSession(Model& model,
                         DenseSimplex::Options options = DenseSimplex::Options());
  ~SolverSession() override;
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  // Throws ModelError when the objective is not linear.
  SolveResult solve();
  // Discards the basis and solves from the all-slack basis.
  SolveResult cold_solve();

  int64_t rows_added_incrementally() const { return rows_added_; }
  int64_t full_rebuilds() const { return rebuilds_; }
  int64_t total_pivots() const { return total_pivots_; }
  int32_t num_rows() const { return engine_.num_rows(); }
  Model& model() { return *model_; }

  void on_constraint_added(const Model& model, ConstraintId id) override;
  void on_bounds_changed(const Model& model, VarId v) override;
  void on_structure_changed(const Model& model) override;

 private:
  void load();
  void push_row(const ScalarConstraint& c);
  SolveResult finish(SolveStatus status);

  Model* model_;
  DenseSimplex engine_;
  bool loaded_ = false;
  bool dirty_ = false;
  int64_t rows_added_ = 0;
  int64_t rebuilds_ = 0;
  int64_t total_pivots_ = 0;
};

SolveResult lp_solve(SolverSession& session);
// Adds the rows to the session's model (each is pushed incrementally) and
// re-optimizes from the previous basis.
SolveResult resolve_after_row_add(SolverSession& session,
                                  std::span<const ScalarConstraint> rows);

}  // namespace amlkit

#endif  // AMLKIT_SIMPLEX_H_
