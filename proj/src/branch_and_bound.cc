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

#include "amlkit/branch_and_bound.h"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "amlkit/cutting_plane.h"
#include "amlkit/errors.h"

namespace amlkit {
namespace {

struct BnbNode {
  std::vector<double> lb, ub;  // over the binaries
};

}  // namespace

SolveResult branch_and_bound(const Model& model,
                             const BranchAndBoundOptions& options) {
  std::vector<int32_t> binaries;
  for (int32_t j = 0; j < model.num_vars(); ++j) {
    if (!model.integer_flags()[j]) continue;
    if (model.lower_bounds()[j] < 0.0 || model.upper_bounds()[j] > 1.0) {
      throw ModelError("integer variable " + std::to_string(j) +
                       " is not binary; bounds must lie in [0, 1]");
    }
    binaries.push_back(j);
  }

  Relaxation rel = make_relaxation(model);
  Model& m = rel.model;
  const std::vector<CutGenerator*> gens = rel.generator_pointers();
  SolverSession session(m);
  const double sense =
      model.objective_sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;

  SolveResult out;
  out.status = SolveStatus::kInfeasible;
  double incumbent = std::numeric_limits<double>::infinity();
  bool incomplete = false;
  bool first = true;

  std::vector<BnbNode> stack;
  BnbNode root;
  for (int32_t j : binaries) {
    root.lb.push_back(std::ceil(model.lower_bounds()[j]));
    root.ub.push_back(std::floor(model.upper_bounds()[j]));
  }
  stack.push_back(std::move(root));

  while (!stack.empty()) {
    BnbNode node = std::move(stack.back());
    stack.pop_back();
    bool empty = false;
    for (std::size_t k = 0; k < binaries.size(); ++k) {
      if (node.lb[k] > node.ub[k]) {
        empty = true;
        break;
      }
      const VarId v = m.var(binaries[k]);
      if (m.lower_bounds()[v.index] != node.lb[k] ||
          m.upper_bounds()[v.index] != node.ub[k]) {
        m.set_bounds(v, node.lb[k], node.ub[k]);
      }
    }
    if (empty) continue;

    SolveResult r;
    if (gens.empty()) {
      r = session.solve();
    } else {
      CuttingPlaneOptions cp;
      cp.tol = options.cut_tol;
      cp.cutoff = incumbent - 1e-9;
      r = cutting_plane_solve(session, gens, cp,
                              first ? std::span<const double>(rel.start)
                                    : std::span<const double>());
    }
    first = false;
    out.pivots += r.pivots;
    out.cuts += r.cuts;
    if (r.status == SolveStatus::kInfeasible) continue;
    if (r.status == SolveStatus::kUnbounded) {
      out.status = SolveStatus::kUnbounded;
      out.x.clear();
      return out;
    }
    const double bound = sense * r.objective;
    if (bound >= incumbent - 1e-9) continue;

    int32_t pick = -1;
    double worst = options.integrality_tol;
    for (std::size_t k = 0; k < binaries.size(); ++k) {
      const double v = r.x[binaries[k]];
      const double frac = std::fabs(v - std::round(v));
      if (frac > worst) {
        worst = frac;
        pick = static_cast<int32_t>(k);
      }
    }
    if (pick < 0) {
      if (r.status != SolveStatus::kOptimal) {
        incomplete = true;
        continue;
      }
      incumbent = bound;
      out.status = SolveStatus::kOptimal;
      out.x.assign(r.x.begin(), r.x.begin() + rel.num_original);
      for (int32_t j : binaries) out.x[j] = std::round(out.x[j]);
      continue;
    }
    if (out.nodes + 2 > options.max_nodes) {
      out.status = SolveStatus::kIterationLimit;
      break;
    }
    const double v = r.x[binaries[pick]];
    BnbNode down = node, up = std::move(node);
    down.ub[pick] = 0.0;
    up.lb[pick] = 1.0;
    out.nodes += 2;
    // Nearer side on top of the stack.
    if (v >= 0.5) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    } else {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
  }
  if (incomplete && out.status == SolveStatus::kInfeasible) {
    out.status = SolveStatus::kIterationLimit;
  }
  if (!out.x.empty()) {
    out.objective = model.nl_objective()
                        ? evaluate(*model.nl_objective(), out.x,
                                   model.parameters())
                        : model.objective().evaluate(out.x);
  }
  return out;
}

}  // namespace amlkit
