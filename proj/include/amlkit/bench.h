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

// Benchmark model builders and the generation/derivative timing harness.
//
// Families:
//   mincostflow  min-cost unit flow from node 1 to node n
//   lqcp         discretized boundary control of a heat equation
//   fac          min-max facility placement on the (G+1)^2 unit grid
//   clnlbeam     discretized elastic beam (nonlinear objective and rows)
//   quadexample  1 + sum_ij |c_j - i| (1 - x_ij) x_1j with c_j = j
//   l2ball       max sum x over the unit ball, x in [-1, 1]^N

#ifndef AMLKIT_BENCH_H_
#define AMLKIT_BENCH_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "amlkit/model.h"

namespace amlkit {

struct MinCostFlowData {
  struct Edge {
    int32_t from = 0;  // 1-based node ids
    int32_t to = 0;
    double cost = 0.0;
    double capacity = 0.0;
  };
  int32_t n = 0;
  std::vector<Edge> edges;

  // Five nodes, six edges, three 1 -> k -> 5 paths.
  static MinCostFlowData five_node();
  // Source -> each of nodes 2..n-1 -> sink; n >= 3.
  static MinCostFlowData layered(int32_t n);
};

struct MinCostFlowModel {
  Model model;
  std::vector<VarId> flow;  // one per edge
};

// Conservation rows for nodes 2..n-1, then the unit sink-inflow row.
// Throws ModelError for edges naming a node outside 1..n or with a
// negative capacity.
MinCostFlowModel build_mincostflow(const MinCostFlowData& data);

struct LqcpParams {
  int32_t m = 4;  // time steps
  int32_t n = 4;  // space steps
  double a = 0.001;
  // Zero means the default: dx = 1/n, dt = 1/m, h2 = dx^2.
  double dx = 0.0;
  double dt = 0.0;
  double h2 = 0.0;
  // Target profile over j = 0..n; empty means 0.5 (1 - (j dx)^2).
  std::vector<double> target;

  LqcpParams resolved() const;
};

struct LqcpModel {
  Model model;
  LqcpParams params;                  // resolved
  std::vector<std::vector<VarId>> y;  // y[i][j], i = 0..m, j = 0..n
  std::vector<VarId> u;               // u[i], i = 0..m
};

// Throws ModelError unless m, n >= 2 and the constants are positive.
LqcpModel build_lqcp(const LqcpParams& params);

struct FacParams {
  int32_t g = 1;  // grid size; customers at (i/g, j/g)
  int32_t f = 1;  // facilities
};

struct FacModel {
  Model model;
  std::vector<std::array<double, 2>> customers;
  std::vector<std::array<VarId, 2>> y;  // facility positions
  std::vector<std::vector<VarId>> z;    // z[c][f], binary
  VarId d;
  double big_m = 0.0;
};

// min d  s.t.  ||x_c - y_f|| <= d + M (1 - z_cf),  sum_f z_cf = 1.
// d >= 0 and y in [0, 1]^2 are added as bounds.
FacModel build_fac(const FacParams& params);

struct ClnlbeamParams {
  int32_t n = 5;
  double alpha = 350.0;
  double h = 0.0;  // zero: 1/n

  ClnlbeamParams resolved() const;
};

struct ClnlbeamModel {
  Model model;
  ClnlbeamParams params;  // resolved
  std::vector<VarId> t, x, u;  // index 0..n
};

// Nonlinear objective, n nonlinear equality rows (x) and n linear equality
// rows (t). Fixings x_0 = x_n = t_0 = t_n = 0 are bounds.
ClnlbeamModel build_clnlbeam(const ClnlbeamParams& params);

struct QuadExampleModel {
  Model model;
  std::vector<std::vector<VarId>> x;  // d x d
};

// Accumulates the expression in one preallocated output (d^2 appends) and
// minimizes it.
QuadExampleModel build_quadexample(int32_t d);

struct L2BallModel {
  Model model;
  std::vector<VarId> x;
};

// max sum x, ||x|| <= 1 as a cone with constant t = 1.
L2BallModel build_l2ball(int32_t n);

// --- timing harness -------------------------------------------------------

struct BenchConfig {
  LqcpParams lqcp;
  ClnlbeamParams clnlbeam;
  int32_t threads = 1;
};

// Documented keys: {"lqcp": {"a","dx","dt","h2"}, "clnlbeam": {"alpha",
// "h"}, "threads"}. Unknown keys and wrong types throw ConfigError.
BenchConfig parse_bench_config(const std::string& json_text);

struct BenchRow {
  std::string family;
  int64_t size = 0;
  double build_ms = 0.0;
  double extract_ms = 0.0;
  double eval3_ms = 0.0;
};

struct BenchCase {
  std::string family;
  int64_t size = 0;
};

// Builds one model and times: build; extraction (standard form for purely
// algebraic families, evaluator setup with Hessian coloring for nonlinear
// ones); three rounds of objective gradient + Jacobian + Hessian of the
// Lagrangian (cut-generator evaluations for conic families) at a fixed
// interior point. Size is n for lqcp/clnlbeam/l2ball, d for quadexample,
// g (with f = 2) for fac, node count for mincostflow (0: the five-node data).
BenchRow run_bench_case(const BenchCase& c, const BenchConfig& config);

// Runs the cases on up to config.threads threads (capped by the
// AMLKIT_THREADS environment variable); rows keep the input order.
std::vector<BenchRow> timing_harness(std::span<const BenchCase> cases,
                                     const BenchConfig& config);

// Header family,size,build_ms,extract_ms,eval3_ms.
void write_csv(std::ostream& out, std::span<const BenchRow> rows);

// Fixed evaluation point: midpoint of finite bounds, one unit inside a
// single finite bound, 0.5 when free.
std::vector<double> interior_point(const Model& model);

}  // namespace amlkit

#endif  // AMLKIT_BENCH_H_
