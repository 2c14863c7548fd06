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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "amlkit/bench.h"
#include "amlkit/errors.h"
#include "amlkit/model.h"
#include "amlkit/standard_form.h"
#include "oracles.h"

namespace amlkit {
namespace {

TEST(Variables, BoundOrderIsChecked) {
  Model m;
  EXPECT_THROW(m.add_variable(1.0, 0.0), BoundOrderError);
  EXPECT_THROW(m.add_variable(std::nan(""), 1.0), BoundOrderError);
  EXPECT_EQ(m.num_vars(), 0);
  const VarId v = m.add_variable(0.0, 0.0);
  EXPECT_EQ(v.index, 0u);
  EXPECT_THROW(m.set_bounds(v, 2.0, 1.0), BoundOrderError);
  EXPECT_NO_THROW(m.set_bounds(v, -kInf, kInf));
}

TEST(Variables, ForeignIdsAreRejected) {
  Model a, b;
  const VarId va = a.add_variable();
  b.add_variable();
  EXPECT_NE(a.id(), b.id());
  QuadExpr e;
  e.add_term(1.0, va);
  EXPECT_THROW(b.add_constraint(e, Sense::kLessEqual, 1.0), OwnershipError);
  EXPECT_THROW(b.set_start(va, 1.0), OwnershipError);
  EXPECT_EQ(b.num_constraints(), 0);
}

TEST(Variables, CopyKeepsOwnershipButNotState) {
  Model a;
  const VarId v = a.add_variable(0.0, 1.0);
  Model b = a;
  QuadExpr e;
  e.add_term(2.0, v);
  EXPECT_NO_THROW(b.add_constraint(e, Sense::kLessEqual, 1.0));
  EXPECT_EQ(a.num_constraints(), 0);
  EXPECT_EQ(b.num_constraints(), 1);
}

TEST(Variables, RevisionAdvancesOnEveryMutation) {
  Model m;
  uint64_t r = m.revision();
  const VarId v = m.add_variable();
  EXPECT_GT(m.revision(), r);
  r = m.revision();
  m.set_bounds(v, 0.0, 1.0);
  EXPECT_GT(m.revision(), r);
  r = m.revision();
  m.add_constraint(QuadExpr(AffExpr(v)), Sense::kEqual, 0.5);
  EXPECT_GT(m.revision(), r);
}

TEST(Expressions, CanonicalizeMergesSortsAndDrops) {
  Model m;
  const std::vector<VarId> x = m.add_variables(3);
  QuadExpr q;
  q.add_term(1.0, x[2]);
  q.add_term(2.0, x[0]);
  q.add_term(-1.0, x[2]);
  q.add_term(3.0, x[1], x[0]);
  q.add_term(1.0, x[0], x[1]);
  q.add_term(4.0, x[2], x[2]);
  q.add_constant(5.0);
  EXPECT_FALSE(is_canonical(q));
  const QuadExpr c = canonicalize(q);
  EXPECT_TRUE(is_canonical(c));
  ASSERT_EQ(c.affine().terms().size(), 1u);
  EXPECT_EQ(c.affine().terms()[0].var, x[0]);
  EXPECT_EQ(c.affine().terms()[0].coeff, 2.0);
  ASSERT_EQ(c.quad_terms().size(), 2u);
  EXPECT_EQ(c.quad_terms()[0].var1, x[0]);
  EXPECT_EQ(c.quad_terms()[0].var2, x[1]);
  EXPECT_EQ(c.quad_terms()[0].coeff, 4.0);
  EXPECT_EQ(c.quad_terms()[1].coeff, 4.0);
  EXPECT_EQ(c.constant(), 5.0);

  const std::vector<double> at{1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(q.evaluate(at), c.evaluate(at));
  EXPECT_DOUBLE_EQ(c.evaluate(at), 5.0 + 2.0 + 4.0 * 2.0 + 4.0 * 9.0);
}

TEST(Expressions, ExprSumKeepsEveryAppend) {
  Model m;
  const std::vector<VarId> x = m.add_variables(4);
  const QuadExpr q = expr_sum(100, [&](QuadExpr& acc) {
    for (int k = 0; k < 100; ++k) acc.add_term(1.0, x[k % 4]);
  });
  EXPECT_EQ(q.affine().terms().size(), 100u);
  EXPECT_EQ(canonicalize(q).affine().terms().size(), 4u);
}

TEST(Expressions, AffineOperators) {
  Model m;
  const VarId x = m.add_variable(), y = m.add_variable();
  const AffExpr e = 2.0 * (AffExpr(x) - AffExpr(y)) + AffExpr(1.5);
  const std::vector<double> at{3.0, 1.0};
  EXPECT_DOUBLE_EQ(e.evaluate(at), 5.5);
  EXPECT_DOUBLE_EQ((-e).evaluate(at), -5.5);
}

TEST(Cones, BookkeepingSeparatesScalarRows) {
  L2BallModel b = build_l2ball(3);
  EXPECT_EQ(b.model.num_cones(), 1);
  EXPECT_EQ(b.model.num_scalar_rows(), 0);
  QuadExpr row;
  row.add_term(1.0, b.x[0]);
  b.model.add_constraint(row, Sense::kLessEqual, 0.5);
  EXPECT_EQ(b.model.num_scalar_rows(), 1);
  EXPECT_EQ(b.model.num_constraints(), 2);
}

TEST(StandardForm, FiveNodeShape) {
  const MinCostFlowModel mcf = build_mincostflow(MinCostFlowData::five_node());
  const StandardForm sf = to_standard_form(mcf.model);
  EXPECT_EQ(sf.num_vars, 6);
  EXPECT_EQ(sf.num_rows(), 4);
  // Nodes 2, 3 and 4 each touch one in-edge and one out-edge; the sink
  // row has three in-edges.
  EXPECT_EQ(sf.a.size(), 9u);
  const std::vector<oracle::FlowEdge> edges = oracle::five_node_edges();
  for (int e = 0; e < 6; ++e) {
    EXPECT_EQ(sf.c[e], edges[e].cost);
    EXPECT_EQ(sf.lb[e], 0.0);
    EXPECT_EQ(sf.ub[e], edges[e].capacity);
  }
}

TEST(StandardForm, MaximizeIsNegated) {
  Model m;
  const VarId x = m.add_variable(0.0, 1.0);
  QuadExpr obj;
  obj.add_term(3.0, x);
  obj.add_constant(1.0);
  m.set_objective(ObjectiveSense::kMaximize, obj);
  const StandardForm sf = to_standard_form(m);
  EXPECT_TRUE(sf.negated);
  EXPECT_EQ(sf.c[0], -3.0);
  EXPECT_EQ(sf.objective_constant, -1.0);
}

TEST(StandardForm, QuadraticObjectiveConventions) {
  Model m;
  const VarId x = m.add_variable(), y = m.add_variable();
  QuadExpr obj;
  obj.add_term(3.0, x, x);
  obj.add_term(2.0, y, x);
  m.set_objective(ObjectiveSense::kMinimize, obj);
  const StandardForm sf = to_standard_form(m);
  ASSERT_EQ(sf.qobj.size(), 2u);
  const std::vector<double> at{2.0, 5.0};
  EXPECT_DOUBLE_EQ(objective_value(sf, at), 3.0 * 4.0 + 2.0 * 10.0);
  const Triplets half = half_scaled_qobj(sf);
  // 1/2 x'Qx with Q symmetric: diagonal 6, off-diagonal 2.
  double diag = 0.0, off = 0.0;
  for (std::size_t k = 0; k < half.size(); ++k) {
    (half.rows[k] == half.cols[k] ? diag : off) = half.vals[k];
  }
  EXPECT_EQ(diag, 6.0);
  EXPECT_EQ(off, 2.0);
}

TEST(StandardForm, RejectsQuadraticRowsAndNonlinearParts) {
  Model m;
  const VarId x = m.add_variable();
  QuadExpr row;
  row.add_term(1.0, x, x);
  m.add_constraint(row, Sense::kLessEqual, 1.0);
  EXPECT_THROW(to_standard_form(m), ModelError);
  EXPECT_THROW(to_standard_form(build_clnlbeam({}).model), ModelError);
}

TEST(StandardForm, ConesAreLiftedToColumns) {
  const FacModel fac = build_fac({1, 1});
  const StandardForm sf = to_standard_form(fac.model);
  EXPECT_EQ(sf.num_model_vars, fac.model.num_vars());
  ASSERT_EQ(static_cast<int>(sf.cones.size()), fac.model.num_cones());
  for (const ConeIndex& c : sf.cones) {
    EXPECT_GE(c.t, 0);
    EXPECT_LT(c.t, sf.num_vars);
    EXPECT_EQ(c.x.size(), 2u);
  }
  EXPECT_EQ(static_cast<int>(sf.integers.size()), 4);
  // Lifted columns satisfy the linking rows at any model point.
  std::vector<double> x(fac.model.num_vars(), 0.25);
  const std::vector<double> full = extend_point(fac.model, sf, x);
  const std::vector<double> act = row_activity(sf, full);
  for (int r = 0; r < sf.num_rows(); ++r) {
    if (sf.senses[r] == Sense::kEqual && r >= fac.model.num_scalar_rows()) {
      EXPECT_NEAR(act[r], sf.b[r], 1e-12) << r;
    }
  }
}

TEST(StandardForm, JsonRoundTrip) {
  const FacModel fac = build_fac({1, 2});
  const StandardForm sf = to_standard_form(fac.model);
  const std::string text = to_json(sf);
  const StandardForm back = standard_form_from_json(text);
  EXPECT_EQ(back.num_vars, sf.num_vars);
  EXPECT_EQ(back.c, sf.c);
  EXPECT_EQ(back.a.vals, sf.a.vals);
  EXPECT_EQ(back.a.rows, sf.a.rows);
  EXPECT_EQ(back.a.cols, sf.a.cols);
  EXPECT_EQ(back.b, sf.b);
  EXPECT_EQ(back.senses, sf.senses);
  EXPECT_EQ(back.lb, sf.lb);
  EXPECT_EQ(back.ub, sf.ub);
  EXPECT_EQ(back.integers, sf.integers);
  ASSERT_EQ(back.cones.size(), sf.cones.size());
  EXPECT_EQ(to_json(back), text);

  const Model rebuilt = model_from_standard_form(back);
  EXPECT_EQ(to_json(to_standard_form(rebuilt)), text);
}

TEST(StandardForm, JsonSchemaViolationsThrow) {
  EXPECT_THROW(standard_form_from_json("{"), ModelError);
  EXPECT_THROW(standard_form_from_json(R"({"num_vars": 1})"), ModelError);
  EXPECT_THROW(standard_form_from_json(
                   R"({"num_vars":1,"c":[0,0],"qobj":{"rows":[],"cols":[],"vals":[]},
                       "A":{"rows":[],"cols":[],"vals":[]},"b":[],"senses":[],
                       "lb":[0],"ub":[1],"cones":[],"integers":[]})"),
               ModelError);
}

TEST(StandardForm, GenerationIsDeterministic) {
  const std::string a = to_json(to_standard_form(build_lqcp({}).model));
  const std::string b = to_json(to_standard_form(build_lqcp({}).model));
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace amlkit
