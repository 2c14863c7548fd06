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
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "amlkit/errors.h"
#include "amlkit/expr_graph.h"
#include "amlkit/model.h"

namespace amlkit {
namespace {

ExprGraph exp_of_squares(const Model& m, VarId x, VarId y) {
  GraphBuilder b(m);
  return b.build(exp(b.pow(b.var(x), 2.0) + b.pow(b.var(y), 2.0)));
}

TEST(Graph, ExpOfSumOfSquaresHasSixNodes) {
  Model m;
  const VarId x = m.add_variable(), y = m.add_variable();
  const ExprGraph g = exp_of_squares(m, x, y);
  EXPECT_EQ(g.size(), 6);
  EXPECT_TRUE(g.is_topologically_valid());
  EXPECT_EQ(g.node(g.root()).kind, NodeKind::kCall);
  EXPECT_EQ(g.node(g.root()).builtin, Builtin::kExp);
  ASSERT_EQ(g.variables().size(), 2u);
  EXPECT_EQ(g.variables()[0], 0);
  EXPECT_EQ(g.variables()[1], 1);
}

TEST(Graph, Evaluate) {
  Model m;
  const VarId x = m.add_variable(), y = m.add_variable();
  const ExprGraph g = exp_of_squares(m, x, y);
  EXPECT_EQ(evaluate(g, std::vector<double>{0.0, 0.0}), 1.0);
  EXPECT_NEAR(evaluate(g, std::vector<double>{1.0, 1.0}),
              std::exp(2.0), 1e-15 * std::exp(2.0));
}

TEST(Graph, RepeatedVariableIsOneNode) {
  Model m;
  const VarId x = m.add_variable();
  GraphBuilder b(m);
  const Ex vx = b.var(x);
  const ExprGraph g = b.build(vx * vx + b.var(x));
  int vars = 0;
  for (const Node& n : g.nodes()) vars += n.kind == NodeKind::kVariable;
  EXPECT_EQ(vars, 1);
  EXPECT_EQ(evaluate(g, std::vector<double>{3.0}), 12.0);
}

TEST(Graph, BuildKeepsOnlyReachableNodes) {
  Model m;
  const VarId x = m.add_variable();
  GraphBuilder b(m);
  b.constant(7.0);  // unused
  const ExprGraph g = b.build(sin(b.var(x)));
  EXPECT_EQ(g.size(), 2);
  EXPECT_EQ(g.dump(), "0: var[x0]()\n1: call[sin](0)\n");
}

TEST(Graph, AllBuiltinsEvaluate) {
  Model m;
  const VarId x = m.add_variable(), y = m.add_variable();
  GraphBuilder b(m);
  const Ex vx = b.var(x), vy = b.var(y);
  const std::vector<Ex> terms{abs(vx), exp(vx), log(vx), sqrt(vx), sin(vx),
                              cos(vx), tan(vx), erf(vx), min(vx, vy),
                              max(vx, vy), vx / vy, 2.0 - vx, -vy};
  const ExprGraph g = b.build(b.sum(terms));
  const double a = 0.7, c = 1.3;
  const double want = std::fabs(a) + std::exp(a) + std::log(a) + std::sqrt(a) +
                      std::sin(a) + std::cos(a) + std::tan(a) + std::erf(a) +
                      std::min(a, c) + std::max(a, c) + a / c + (2.0 - a) - c;
  EXPECT_NEAR(evaluate(g, std::vector<double>{a, c}), want, 1e-14);
}

TEST(Graph, DomainErrorsNameTheNode) {
  Model m;
  const VarId x = m.add_variable();
  GraphBuilder b(m);
  const ExprGraph g = b.build(1.0 + log(b.var(x)));
  try {
    evaluate(g, std::vector<double>{-1.0});
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_EQ(g.node(e.node()).kind, NodeKind::kCall);
    EXPECT_NE(std::string(e.what()).find("log"), std::string::npos);
  }
  GraphBuilder b2(m);
  const ExprGraph q = b2.build(b2.constant(1.0) / b2.var(x));
  EXPECT_THROW(evaluate(q, std::vector<double>{0.0}), EvaluationError);
  GraphBuilder b3(m);
  const ExprGraph p = b3.build(b3.pow(b3.var(x), 0.5));
  EXPECT_THROW(evaluate(p, std::vector<double>{-4.0}), EvaluationError);
  EXPECT_EQ(evaluate(p, std::vector<double>{4.0}), 2.0);
}

TEST(Graph, ForeignVariableIsRejected) {
  Model a, other;
  a.add_variable();
  const VarId foreign = other.add_variable();
  GraphBuilder b(a);
  EXPECT_THROW(b.var(foreign), OwnershipError);
}

TEST(Parameters, MutationIsSeenWithoutRebuilding) {
  Model m;
  const VarId x = m.add_variable();
  const ParamId p = m.add_parameter(2.0);
  GraphBuilder b(m);
  const ExprGraph g = b.build(b.param(p) * b.var(x));
  const std::vector<double> at{3.0};
  EXPECT_EQ(evaluate(g, at, m.parameters()), 6.0);
  const uint64_t r = m.revision();
  m.set_parameter(p, -1.0);
  EXPECT_GT(m.revision(), r);
  EXPECT_EQ(m.parameter(p), -1.0);
  EXPECT_EQ(evaluate(g, at, m.parameters()), -3.0);
}

TEST(Parameters, ForeignParameterIsRejected) {
  Model a, other;
  const ParamId p = other.add_parameter(1.0);
  EXPECT_THROW(a.set_parameter(p, 2.0), OwnershipError);
  GraphBuilder b(a);
  EXPECT_THROW(b.param(p), OwnershipError);
}

TEST(UserFunctions, RegistrationRules) {
  Model m;
  auto twice = [](auto args) { return 2.0 * args[0]; };
  m.register_function("twice", 1, twice);
  EXPECT_THROW(m.register_function("twice", 1, twice), RegistrationError);
  EXPECT_THROW(m.register_function("sin", 1, twice), RegistrationError);
  EXPECT_THROW(m.register_function("nullary", 0, twice), RegistrationError);
  EXPECT_THROW(m.register_function(
                   "nograd", 1,
                   [](std::span<const double> a) { return a[0]; }, nullptr),
               RegistrationError);
  EXPECT_EQ(m.functions()->size(), 1);
}

TEST(UserFunctions, CallsResolveByNameAndArity) {
  Model m;
  const VarId x = m.add_variable(), y = m.add_variable();
  m.register_function("hyp", 2, [](auto a) {
    using std::sqrt;
    return sqrt(a[0] * a[0] + a[1] * a[1]);
  });
  GraphBuilder b(m);
  EXPECT_THROW(b.call("hyp", {b.var(x)}), RegistrationError);
  EXPECT_THROW(b.call("nope", {b.var(x)}), RegistrationError);
  EXPECT_THROW(b.call("sin", {b.var(x), b.var(y)}), RegistrationError);
  GraphBuilder b2(m);
  const ExprGraph g = b2.build(b2.call("hyp", {b2.var(x), b2.var(y)}));
  EXPECT_TRUE(g.has_user_calls());
  EXPECT_EQ(evaluate(g, std::vector<double>{3.0, 4.0}), 5.0);
}

TEST(UserFunctions, HandCodedGradient) {
  Model m;
  const VarId x = m.add_variable();
  m.register_function(
      "cube", 1, [](std::span<const double> a) { return a[0] * a[0] * a[0]; },
      [](std::span<const double> a, std::span<double> g) {
        g[0] = 3.0 * a[0] * a[0];
      });
  GraphBuilder b(m);
  const ExprGraph g = b.build(b.call("cube", {b.var(x)}));
  EXPECT_EQ(evaluate(g, std::vector<double>{2.0}), 8.0);
}

}  // namespace
}  // namespace amlkit
