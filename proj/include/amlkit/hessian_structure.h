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

// Hessian sparsity detection, acyclic coloring and entry recovery.
//
// With an acyclic coloring of the Hessian's adjacency graph, k products
// H * s_c (s_c the indicator vector of color c) determine every entry.
// Diagonal entries are read directly: (H s_{color(i)})_i = h_ii because no
// neighbor of i shares its color. Off-diagonal entries are obtained by
// substitution along the trees of each two-colored subgraph.

#ifndef AMLKIT_HESSIAN_STRUCTURE_H_
#define AMLKIT_HESSIAN_STRUCTURE_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "amlkit/expr_graph.h"

namespace amlkit {

struct SparsityPattern {
  int32_t n = 0;
  // (i, j) with i <= j, sorted, unique.
  std::vector<std::pair<int32_t, int32_t>> entries;

  // Sorts and removes duplicates; swaps pairs into i <= j.
  void normalize();
  bool is_diagonal() const;
  // Vertices carrying at least one entry.
  std::vector<char> active() const;
};

// Conservative pattern of the Hessian of one graph (or of the sum of
// several), over n variables.
SparsityPattern detect_sparsity(const ExprGraph& g, int32_t n);
SparsityPattern detect_sparsity(std::span<const ExprGraph* const> graphs,
                                int32_t n);

struct RecoveryStep {
  int32_t entry = 0;   // index into pattern.entries
  int32_t color = 0;   // product column read
  int32_t row = 0;     // component of that column
  std::vector<int32_t> subtract;  // entries already recovered
};

struct Coloring {
  int32_t num_colors = 0;
  std::vector<int32_t> color;  // -1 for vertices without entries
  std::vector<RecoveryStep> plan;

  // k x n 0/1 seed vectors.
  std::vector<std::vector<double>> seeds() const;
  std::vector<std::vector<int32_t>> classes() const;
};

Coloring color(const SparsityPattern& pattern);

// Adjacent vertices differ in color and every two-colored subgraph is a
// forest.
bool verify_acyclic(const SparsityPattern& pattern,
                    std::span<const int32_t> color);

// products holds k columns of length n, back to back (column c at c * n).
// Throws RecoveryError when the sizes disagree with the coloring.
std::vector<double> recover(const SparsityPattern& pattern,
                            const Coloring& coloring,
                            std::span<const double> products);

// Line-oriented description: k, classes, seeds, plan length.
std::string describe(const SparsityPattern& pattern, const Coloring& coloring);

}  // namespace amlkit

#endif  // AMLKIT_HESSIAN_STRUCTURE_H_
