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

// Depth-first branch-and-bound over binary variables. Relaxations are
// solved by the cutting-plane loop on one solver session; cuts are valid
// for the whole tree and are kept. Branches on the most fractional binary
// and explores the nearer side first.

#ifndef AMLKIT_BRANCH_AND_BOUND_H_
#define AMLKIT_BRANCH_AND_BOUND_H_

#include <cstdint>

#include "amlkit/model.h"
#include "amlkit/simplex.h"

namespace amlkit {

struct BranchAndBoundOptions {
  double integrality_tol = 1e-6;
  double cut_tol = 1e-9;  // at least kMinCutTol
  int64_t max_nodes = 100000;
};

// nodes counts child nodes created (0 when the root relaxation is
// integral). Throws ModelError unless every integer variable has bounds
// inside [0, 1].
SolveResult branch_and_bound(const Model& model,
                             const BranchAndBoundOptions& options = {});

}  // namespace amlkit

#endif  // AMLKIT_BRANCH_AND_BOUND_H_
