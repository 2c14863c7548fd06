// Copyright 2026 The amlkit Authors
//
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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "amlkit/bench.h"
#include "amlkit/branch_and_bound.h"
#include "amlkit/cutting_plane.h"
#include "amlkit/errors.h"
#include "amlkit/model.h"
#include "amlkit/simplex.h"
#include "amlkit/standard_form.h"
#include "oracles.h"

namespace amlkit {
namespace {

QuadExpr lin(std::initializer_list<std::pair<double, VarId>> terms,
             double constant = 0.0) {
  QuadExpr e(constant);
  for (const auto& [c, v] : terms) e.add_term(c, v);
  return e;
}

TEST(Simplex, BoxOnlyProblem) {
  DenseSimplex s;
  s.reset(std::vector<double>{1.0, -2.0}, std::vector<double>{-1.0, 0.0},
          std::vector<double>{3.0, 4.0});
  ASSERT_EQ(s.solve(), SolveStatus::kOptimal);
  EXPECT_EQ(s.values()[0], -1.0);
  EXPECT_EQ(s.values()[1], 4.0);
  EXPECT_EQ(s.objective(), -9.0);
}

TEST(Simplex, SmallLpWithEveryRowSense) {
  // max x + y  s.t. x + 2y <= 4, 3x + y >= 3, x - y = 0.5, x, y >= 0.
  DenseSimplex s;
  s.reset(std::vector<double>{-1.0, -1.0}, std::vector<double>{0.0, 0.0},
          std::vector<double>{kInf, kInf});
  const std::vector<int32_t> cols{0, 1};
  s.add_row(cols, std::vector<double>{1.0, 2.0}, Sense::kLessEqual, 4.0);
  s.add_row(cols, std::vector<double>{3.0, 1.0}, Sense::kGreaterEqual, 3.0);
  s.add_row(cols, std::vector<double>{1.0, -1.0}, Sense::kEqual, 0.5);
  ASSERT_EQ(s.solve(), SolveStatus::kOptimal);
  EXPECT_NEAR(s.values()[0], 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.values()[1], 7.0 / 6.0, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  DenseSimplex a;
  a.reset(std::vector<double>{1.0}, std::vector<double>{0.0},
          std::vector<double>{1.0});
  a.add_row(std::vector<int32_t>{0}, std::vector<double>{1.0},
            Sense::kGreaterEqual, 2.0);
  EXPECT_EQ(a.solve(), SolveStatus::kInfeasible);

  DenseSimplex b;
  b.reset(std::vector<double>{-1.0, 0.0}, std::vector<double>{0.0, 0.0},
          std::vector<double>{kInf, kInf});
  b.add_row(std::vector<int32_t>{0, 1}, std::vector<double>{1.0, -1.0},
            Sense::kLessEqual, 1.0);
  EXPECT_EQ(b.solve(), SolveStatus::kUnbounded);
}

TEST(Session, RedundantRowNeedsNoPivots) {
  Model m;
  const VarId x = m.add_variable(0.0, 10.0), y = m.add_variable(0.0, 10.0);
  m.add_constraint(lin({{1.0, x}, {1.0, y}}), Sense::kLessEqual, 4.0);
  m.set_objective(ObjectiveSense::kMaximize, lin({{2.0, x}, {1.0, y}}));
  SolverSession session(m);
  SolveResult r = lp_solve(session);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(r.objective, 8.0);

  const std::vector<ScalarConstraint> rows{{lin({{1.0, x}}), Sense::kLessEqual, 100.0}};
  r = resolve_after_row_add(session, rows);
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.pivots, 0);
  EXPECT_DOUBLE_EQ(r.objective, 8.0);
  EXPECT_EQ(session.rows_added_incrementally(), 1);
  EXPECT_EQ(session.full_rebuilds(), 0);

  // A binding row is handled by the dual simplex from the old basis.
  r = resolve_after_row_add(
      session, std::vector<ScalarConstraint>{{lin({{1.0, x}}), Sense::kLessEqual, 1.0}});
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(r.objective, 5.0);
  EXPECT_GT(r.pivots, 0);
  EXPECT_EQ(session.full_rebuilds(), 0);
}

TEST(Session, BoundChangesStayIncremental) {
  Model m;
  const VarId x = m.add_variable(0.0, 10.0), y = m.add_variable(0.0, 10.0);
  m.add_constraint(lin({{1.0, x}, {1.0, y}}), Sense::kLessEqual, 4.0);
  m.set_objective(ObjectiveSense::kMaximize, lin({{2.0, x}, {1.0, y}}));
  SolverSession session(m);
  session.solve();
  m.set_bounds(x, 0.0, 1.5);
  const SolveResult r = session.solve();
  EXPECT_DOUBLE_EQ(r.objective, 4.0 + 1.5);
  EXPECT_EQ(session.full_rebuilds(), 0);
  // A new variable invalidates the loaded problem.
  m.add_variable(0.0, 1.0);
  session.solve();
  EXPECT_EQ(session.full_rebuilds(), 1);
}

TEST(Session, QuadraticObjectiveIsRejected) {
  Model m;
  const VarId x = m.add_variable(0.0, 1.0);
  QuadExpr obj;
  obj.add_term(1.0, x, x);
  m.set_objective(ObjectiveSense::kMinimize, obj);
  SolverSession session(m);
  EXPECT_THROW(session.solve(), ModelError);
}

TEST(Session, FiveNodeMinCostFlow) {
  MinCostFlowModel mcf = build_mincostflow(MinCostFlowData::five_node());
  SolverSession session(mcf.model);
  const SolveResult r = session.solve();
  const oracle::FlowSolution want = oracle::five_node_path_enumeration();
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, want.cost, 1e-9);
  for (std::size_t e = 0; e < mcf.flow.size(); ++e) {
    EXPECT_NEAR(r.x[mcf.flow[e].index], want.edge_flow[e], 1e-9) << e;
  }
  const std::string json = to_json(r);
  EXPECT_NE(json.find("\"status\":\"optimal\""), std::string::npos);
}

TEST(Session, LayeredFlowPicksCheapestPath) {
  MinCostFlowModel mcf = build_mincostflow(MinCostFlowData::layered(30));
  SolverSession session(mcf.model);
  const SolveResult r = session.solve();
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  const MinCostFlowData data = MinCostFlowData::layered(30);
  // Brute force: route along the cheapest two-edge paths by capacity.
  std::vector<std::pair<double, double>> paths;  // cost, capacity
  for (const auto& a : data.edges) {
    if (a.from != 1) continue;
    for (const auto& b : data.edges) {
      if (b.from == a.to && b.to == data.n) {
        paths.push_back({a.cost + b.cost, std::min(a.capacity, b.capacity)});
      }
    }
  }
  std::sort(paths.begin(), paths.end());
  double left = 1.0, cost = 0.0;
  for (const auto& [c, cap] : paths) {
    const double f = std::min(left, cap);
    cost += f * c;
    left -= f;
  }
  ASSERT_EQ(left, 0.0);
  EXPECT_NEAR(r.objective, cost, 1e-9);
}

TEST(CuttingPlane, UnitBallInTwoDimensions) {
  const L2BallModel ball = build_l2ball(2);
  const SolveResult r = cutting_plane_solve(ball.model);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, std::numbers::sqrt2, 1e-5);
  EXPECT_EQ(r.cuts, r.iterations);
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    EXPECT_LE(r.trace[k].objective, r.trace[k - 1].objective + 1e-12);
  }
  EXPECT_NEAR(r.x[0], std::numbers::sqrt2 / 2, 1e-3);
}

TEST(CuttingPlane, WarmStartsNeedFewerPivotsOnTheSameCuts) {
  // Record the cuts of one run, then replay them into two fresh sessions.
  const L2BallModel ball = build_l2ball(2);
  Relaxation rel = make_relaxation(ball.model);
  const int32_t base_rows = rel.model.num_constraints();
  {
    SolverSession session(rel.model);
    const auto gens = rel.generator_pointers();
    ASSERT_EQ(cutting_plane_solve(session, gens, {}).status,
              SolveStatus::kOptimal);
  }
  std::vector<ScalarConstraint> cuts;
  for (int32_t i = base_rows; i < rel.model.num_constraints(); ++i) {
    cuts.push_back(std::get<ScalarConstraint>(rel.model.constraints()[i]));
  }
  ASSERT_GE(cuts.size(), 5u);

  Relaxation warm_rel = make_relaxation(ball.model);
  Relaxation cold_rel = make_relaxation(ball.model);
  SolverSession warm(warm_rel.model), cold(cold_rel.model);
  int64_t warm_pivots = warm.solve().pivots;
  int64_t cold_pivots = cold.cold_solve().pivots;
  for (const ScalarConstraint& c : cuts) {
    warm_rel.model.add_constraint(c);
    cold_rel.model.add_constraint(c);
    const SolveResult w = warm.solve();
    const SolveResult k = cold.cold_solve();
    ASSERT_EQ(w.status, SolveStatus::kOptimal);
    ASSERT_EQ(k.status, SolveStatus::kOptimal);
    EXPECT_NEAR(w.objective, k.objective, 1e-9);
    warm_pivots += w.pivots;
    cold_pivots += k.pivots;
  }
  EXPECT_LT(warm_pivots, cold_pivots);
  EXPECT_EQ(warm.full_rebuilds(), 0);
  EXPECT_EQ(warm.rows_added_incrementally(), static_cast<int64_t>(cuts.size()));
}

TEST(CuttingPlane, ColdAndWarmAgree) {
  const L2BallModel ball = build_l2ball(3);
  CuttingPlaneOptions cold;
  cold.warm = false;
  const SolveResult a = cutting_plane_solve(ball.model);
  const SolveResult b = cutting_plane_solve(ball.model, cold);
  ASSERT_EQ(a.status, SolveStatus::kOptimal);
  ASSERT_EQ(b.status, SolveStatus::kOptimal);
  EXPECT_NEAR(a.objective, std::sqrt(3.0), 1e-5);
  EXPECT_NEAR(b.objective, std::sqrt(3.0), 1e-5);
}

TEST(CuttingPlane, NonlinearObjectiveUsesAnEpigraph) {
  // min (x - 0.3)^2 + exp(y) - y over the box.
  Model m;
  const VarId x = m.add_variable(-1.0, 1.0), y = m.add_variable(-1.0, 1.0);
  GraphBuilder b(m);
  m.set_nl_objective(ObjectiveSense::kMinimize,
                     b.build(b.pow(b.var(x) - 0.3, 2.0) + exp(b.var(y)) - b.var(y)));
  const Relaxation rel = make_relaxation(m);
  EXPECT_TRUE(rel.has_epigraph);
  EXPECT_EQ(rel.model.num_vars(), 3);
  const SolveResult r = cutting_plane_solve(m, {.tol = 1e-9});
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-6);
  EXPECT_NEAR(r.x[0], 0.3, 1e-3);
  EXPECT_EQ(r.x.size(), 2u);
}

TEST(CuttingPlane, UserFunctionModelFromStartPoint) {
  Model m;
  const std::vector<VarId> x = m.add_variables(2);
  for (const VarId v : x) m.set_start(v, 0.5);
  m.register_function("squareroot", 1, [](auto args) {
    using std::abs;
    auto v = args[0];
    auto z = v;
    while (abs(z * z - v) > 1e-13) z = z - (z * z - v) / (2.0 * z);
    return z;
  });
  m.set_objective(ObjectiveSense::kMaximize, lin({{1.0, x[0]}, {1.0, x[1]}}));
  GraphBuilder b(m);
  m.add_nl_constraint(
      b.build(b.call("squareroot", {b.pow(b.var(x[0]), 2.0) + b.pow(b.var(x[1]), 2.0)})),
      Sense::kLessEqual, 1.0);
  const SolveResult r = cutting_plane_solve(m);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, std::numbers::sqrt2, 1e-5);
  // Without a start point the first relaxation is unbounded.
  Model bare = m;
  for (const VarId v : x) bare.set_start(v, std::nan(""));
  EXPECT_EQ(cutting_plane_solve(bare).status, SolveStatus::kUnbounded);
}

TEST(CuttingPlane, ToleranceBelowTheLpToleranceIsRejected) {
  CuttingPlaneOptions o;
  o.tol = 1e-12;
  EXPECT_THROW(cutting_plane_solve(build_l2ball(2).model, o), ModelError);
  BranchAndBoundOptions b;
  b.cut_tol = 0.0;
  EXPECT_THROW(branch_and_bound(build_fac({1, 1}).model, b), ModelError);
}

TEST(CuttingPlane, NonlinearEqualityIsRejected) {
  EXPECT_THROW(make_relaxation(build_clnlbeam({.n = 3}).model), ModelError);
}

TEST(BranchAndBound, InfeasibleBinaries) {
  Model m;
  const VarId a = m.add_variable(0.0, 1.0, true), b = m.add_variable(0.0, 1.0, true);
  m.add_constraint(lin({{1.0, a}, {1.0, b}}), Sense::kEqual, 3.0);
  EXPECT_EQ(branch_and_bound(m).status, SolveStatus::kInfeasible);
}

TEST(BranchAndBound, FractionalRelaxationBranches) {
  // max 5a + 4b + 3c  s.t. 2a + 3b + c <= 5, 4a + b + 2c <= 11 (binaries).
  Model m;
  const std::vector<VarId> v = m.add_variables(3, 0.0, 1.0, true);
  m.add_constraint(lin({{2.0, v[0]}, {3.0, v[1]}, {1.0, v[2]}}),
                   Sense::kLessEqual, 4.5);
  m.add_constraint(lin({{4.0, v[0]}, {1.0, v[1]}, {2.0, v[2]}}),
                   Sense::kLessEqual, 6.5);
  m.set_objective(ObjectiveSense::kMaximize,
                  lin({{5.0, v[0]}, {4.0, v[1]}, {3.0, v[2]}}));
  const SolveResult r = branch_and_bound(m);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  // Enumerate the eight assignments.
  double best = -1.0;
  for (int code = 0; code < 8; ++code) {
    const int a = code & 1, b = (code >> 1) & 1, c = (code >> 2) & 1;
    if (2 * a + 3 * b + c <= 4.5 && 4 * a + b + 2 * c <= 6.5) {
      best = std::max(best, 5.0 * a + 4.0 * b + 3.0 * c);
    }
  }
  EXPECT_NEAR(r.objective, best, 1e-9);
  EXPECT_GT(r.nodes, 0);
  for (double xi : r.x) EXPECT_NEAR(xi, std::round(xi), 1e-6);
}

TEST(BranchAndBound, TotallyUnimodularFlowNeedsNoBranching) {
  MinCostFlowData data = MinCostFlowData::layered(8);
  for (auto& e : data.edges) e.capacity = 1.0;
  StandardForm sf = to_standard_form(build_mincostflow(data).model);
  for (int32_t j = 0; j < sf.num_vars; ++j) sf.integers.push_back(j);
  const Model m = model_from_standard_form(sf);
  const SolveResult r = branch_and_bound(m);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.nodes, 0);
  for (double xi : r.x) EXPECT_TRUE(xi == 0.0 || xi == 1.0) << xi;
}

TEST(BranchAndBound, NonBinaryIntegersAreRejected) {
  Model m;
  m.add_variable(0.0, 3.0, true);
  EXPECT_THROW(branch_and_bound(m), ModelError);
}

TEST(BranchAndBound, FacilityLocationSmall) {
  const FacModel fac = build_fac({1, 1});
  const SolveResult r = branch_and_bound(fac.model);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, std::numbers::sqrt2 / 2, 1e-9);
}

TEST(BranchAndBound, FacilityLocationMatchesEnumeration) {
  const SolveResult r = branch_and_bound(build_fac({2, 2}).model);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.objective, oracle::fac_brute_force(2, 2), 1e-9);
  EXPECT_NEAR(r.objective, std::sqrt(5.0) / 4.0, 1e-9);
}

}  // namespace
}  // namespace amlkit
