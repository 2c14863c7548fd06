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

#include "amlkit/hessian_structure.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "amlkit/errors.h"

namespace amlkit {
namespace {

using Entry = std::pair<int32_t, int32_t>;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int32_t find(int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // False when a and b were already joined.
  bool unite(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<int32_t> parent_;
};

// Adjacency of the off-diagonal pattern with one id per undirected edge.
struct Adjacency {
  std::vector<int32_t> offset;
  std::vector<int32_t> nbr;
  std::vector<int32_t> edge;  // index into pattern.entries

  explicit Adjacency(const SparsityPattern& p) {
    offset.assign(p.n + 1, 0);
    for (const Entry& e : p.entries) {
      if (e.first == e.second) continue;
      ++offset[e.first + 1];
      ++offset[e.second + 1];
    }
    std::partial_sum(offset.begin(), offset.end(), offset.begin());
    nbr.resize(offset[p.n]);
    edge.resize(offset[p.n]);
    std::vector<int32_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t k = 0; k < p.entries.size(); ++k) {
      const auto [i, j] = p.entries[k];
      if (i == j) continue;
      nbr[fill[i]] = j;
      edge[fill[i]++] = static_cast<int32_t>(k);
      nbr[fill[j]] = i;
      edge[fill[j]++] = static_cast<int32_t>(k);
    }
  }
  int32_t degree(int32_t v) const { return offset[v + 1] - offset[v]; }
};

// Marks which nodes need their variable set, then builds those sets.
std::vector<std::vector<int32_t>> variable_sets(const ExprGraph& g,
                                                std::vector<char>& coupling) {
  const auto nodes = g.nodes();
  const std::size_t size = nodes.size();
  coupling.assign(size, 0);
  std::vector<char> needed(size, 0);
  for (std::size_t i = 0; i < size; ++i) {
    const Node& n = nodes[i];
    switch (n.kind) {
      case NodeKind::kProd:
      case NodeKind::kDiv:
      case NodeKind::kUserCall:
        coupling[i] = 1;
        break;
      case NodeKind::kPow:
        coupling[i] = n.value != 0.0 && n.value != 1.0;
        break;
      case NodeKind::kCall:
        coupling[i] = builtin_info(n.builtin).smooth;
        break;
      default:
        break;
    }
    if (coupling[i]) {
      for (int32_t c : g.children(n)) needed[c] = 1;
    }
  }
  for (std::size_t i = size; i-- > 0;) {
    if (!needed[i]) continue;
    for (int32_t c : g.children(nodes[i])) needed[c] = 1;
  }
  std::vector<std::vector<int32_t>> sets(size);
  std::vector<int32_t> merged;
  for (std::size_t i = 0; i < size; ++i) {
    if (!needed[i]) continue;
    const Node& n = nodes[i];
    if (n.kind == NodeKind::kVariable) {
      sets[i] = {n.index};
      continue;
    }
    std::vector<int32_t>& s = sets[i];
    for (int32_t c : g.children(n)) {
      merged.clear();
      std::set_union(s.begin(), s.end(), sets[c].begin(), sets[c].end(),
                     std::back_inserter(merged));
      s.swap(merged);
    }
  }
  return sets;
}

void add_product(const std::vector<int32_t>& a, const std::vector<int32_t>& b,
                 std::vector<Entry>& out) {
  for (int32_t i : a) {
    for (int32_t j : b) out.emplace_back(std::min(i, j), std::max(i, j));
  }
}

void collect(const ExprGraph& g, std::vector<Entry>& out) {
  std::vector<char> coupling;
  const auto sets = variable_sets(g, coupling);
  const auto nodes = g.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!coupling[i]) continue;
    const Node& n = nodes[i];
    const auto ch = g.children(n);
    switch (n.kind) {
      case NodeKind::kProd:
        for (std::size_t a = 0; a < ch.size(); ++a) {
          for (std::size_t b = a + 1; b < ch.size(); ++b) {
            add_product(sets[ch[a]], sets[ch[b]], out);
          }
        }
        break;
      case NodeKind::kDiv:
        add_product(sets[ch[0]], sets[ch[1]], out);
        add_product(sets[ch[1]], sets[ch[1]], out);
        break;
      case NodeKind::kUserCall:
        for (std::size_t a = 0; a < ch.size(); ++a) {
          for (std::size_t b = a; b < ch.size(); ++b) {
            add_product(sets[ch[a]], sets[ch[b]], out);
          }
        }
        break;
      default:  // smooth unary, pow
        add_product(sets[ch[0]], sets[ch[0]], out);
        break;
    }
  }
}

uint64_t pair_key(int32_t v, int32_t c) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(v)) << 32) |
         static_cast<uint32_t>(c);
}

}  // namespace

void SparsityPattern::normalize() {
  for (Entry& e : entries) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
}

bool SparsityPattern::is_diagonal() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const Entry& e) { return e.first == e.second; });
}

std::vector<char> SparsityPattern::active() const {
  std::vector<char> a(n, 0);
  for (const Entry& e : entries) a[e.first] = a[e.second] = 1;
  return a;
}

SparsityPattern detect_sparsity(const ExprGraph& g, int32_t n) {
  const ExprGraph* one[1] = {&g};
  return detect_sparsity(one, n);
}

SparsityPattern detect_sparsity(std::span<const ExprGraph* const> graphs,
                                int32_t n) {
  SparsityPattern p;
  p.n = n;
  for (const ExprGraph* g : graphs) collect(*g, p.entries);
  p.normalize();
  return p;
}

std::vector<std::vector<double>> Coloring::seeds() const {
  std::vector<std::vector<double>> s(num_colors,
                                     std::vector<double>(color.size(), 0.0));
  for (std::size_t v = 0; v < color.size(); ++v) {
    if (color[v] >= 0) s[color[v]][v] = 1.0;
  }
  return s;
}

std::vector<std::vector<int32_t>> Coloring::classes() const {
  std::vector<std::vector<int32_t>> c(num_colors);
  for (std::size_t v = 0; v < color.size(); ++v) {
    if (color[v] >= 0) c[color[v]].push_back(static_cast<int32_t>(v));
  }
  return c;
}

Coloring color(const SparsityPattern& pattern) {
  const int32_t n = pattern.n;
  const Adjacency adj(pattern);
  const std::vector<char> active = pattern.active();

  std::vector<int32_t> order;
  for (int32_t v = 0; v < n; ++v) {
    if (active[v]) order.push_back(v);
  }
  std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    if (adj.degree(a) != adj.degree(b)) return adj.degree(a) > adj.degree(b);
    return a > b;
  });

  Coloring out;
  out.color.assign(n, -1);
  std::vector<int32_t>& col = out.color;
  // Union-find over edges: each set is one tree of a two-colored subgraph.
  DisjointSets trees(pattern.entries.size());
  std::vector<int32_t> forbidden(n + 1, -1);
  // Per tree: the last vertex that reached it, and through which neighbor.
  std::vector<int32_t> visit_source(pattern.entries.size(), -1);
  std::vector<int32_t> visit_via(pattern.entries.size(), -1);

  for (int32_t v : order) {
    for (int32_t k = adj.offset[v]; k < adj.offset[v + 1]; ++k) {
      const int32_t w = adj.nbr[k];
      if (col[w] >= 0) forbidden[col[w]] = v;
    }
    for (int32_t k = adj.offset[v]; k < adj.offset[v + 1]; ++k) {
      const int32_t w = adj.nbr[k];
      if (col[w] < 0) continue;
      for (int32_t l = adj.offset[w]; l < adj.offset[w + 1]; ++l) {
        const int32_t x = adj.nbr[l];
        if (col[x] < 0 || forbidden[col[x]] == v) continue;
        const int32_t t = trees.find(adj.edge[l]);
        if (visit_source[t] != v) {
          visit_source[t] = v;
          visit_via[t] = w;
        } else if (visit_via[t] != w) {
          // v would close a cycle through this tree.
          forbidden[col[x]] = v;
        }
      }
    }
    int32_t c = 0;
    while (forbidden[c] == v) ++c;
    col[v] = c;
    out.num_colors = std::max(out.num_colors, c + 1);

    std::unordered_map<int32_t, int32_t> first_edge_by_color;
    for (int32_t k = adj.offset[v]; k < adj.offset[v + 1]; ++k) {
      const int32_t w = adj.nbr[k];
      if (col[w] < 0) continue;
      auto [it, fresh] = first_edge_by_color.emplace(col[w], adj.edge[k]);
      if (!fresh) trees.unite(it->second, adj.edge[k]);
      for (int32_t l = adj.offset[w]; l < adj.offset[w + 1]; ++l) {
        const int32_t x = adj.nbr[l];
        if (x != v && col[x] == c) trees.unite(adj.edge[k], adj.edge[l]);
      }
    }
  }

  // Recovery plan. Diagonal entries first, then the trees of each color
  // pair, rooted at their lowest vertex and walked in post-order.
  for (std::size_t k = 0; k < pattern.entries.size(); ++k) {
    const auto [i, j] = pattern.entries[k];
    if (i == j) {
      out.plan.push_back({static_cast<int32_t>(k), col[i], i, {}});
    }
  }
  std::map<std::pair<int32_t, int32_t>, std::vector<int32_t>> by_pair;
  for (std::size_t k = 0; k < pattern.entries.size(); ++k) {
    const auto [i, j] = pattern.entries[k];
    if (i == j) continue;
    by_pair[{std::min(col[i], col[j]), std::max(col[i], col[j])}].push_back(
        static_cast<int32_t>(k));
  }
  std::vector<char> visited(n, 0);
  for (const auto& [colors, edges] : by_pair) {
    // Local adjacency of this two-colored forest.
    std::map<int32_t, std::vector<std::pair<int32_t, int32_t>>> local;
    for (int32_t k : edges) {
      const auto [i, j] = pattern.entries[k];
      local[i].emplace_back(j, k);
      local[j].emplace_back(i, k);
    }
    for (const auto& [root, unused] : local) {
      if (visited[root]) continue;
      // Iterative DFS producing a post-order of (vertex, parent, edge).
      struct Frame {
        int32_t v, parent, edge;
        std::size_t next;
      };
      std::vector<Frame> stack{{root, -1, -1, 0}};
      visited[root] = 1;
      while (!stack.empty()) {
        Frame& f = stack.back();
        const auto& nb = local[f.v];
        if (f.next < nb.size()) {
          const auto [u, k] = nb[f.next++];
          if (u == f.parent) continue;
          if (visited[u]) {
            throw RecoveryError("coloring is not acyclic");
          }
          visited[u] = 1;
          stack.push_back({u, f.v, k, 0});
          continue;
        }
        if (f.parent >= 0) {
          RecoveryStep step{f.edge, col[f.parent], f.v, {}};
          for (const auto& [u, k] : nb) {
            if (u != f.parent) step.subtract.push_back(k);
          }
          out.plan.push_back(std::move(step));
        }
        stack.pop_back();
      }
    }
    for (const auto& [v, unused] : local) visited[v] = 0;
  }
  return out;
}

bool verify_acyclic(const SparsityPattern& pattern,
                    std::span<const int32_t> color) {
  // Vertex v inside the subgraph of colors {color[v], c} is node (v, c).
  std::unordered_map<uint64_t, int32_t> id;
  auto node = [&](int32_t v, int32_t c) {
    return id.emplace(pair_key(v, c), static_cast<int32_t>(id.size()))
        .first->second;
  };
  std::vector<std::pair<int32_t, int32_t>> links;
  for (const Entry& e : pattern.entries) {
    if (color[e.first] < 0 || color[e.second] < 0) return false;
    if (e.first == e.second) continue;
    if (color[e.first] == color[e.second]) return false;
    links.emplace_back(node(e.first, color[e.second]),
                       node(e.second, color[e.first]));
  }
  DisjointSets sets(id.size());
  for (const auto& [a, b] : links) {
    if (!sets.unite(a, b)) return false;
  }
  return true;
}

std::vector<double> recover(const SparsityPattern& pattern,
                            const Coloring& coloring,
                            std::span<const double> products) {
  const std::size_t n = static_cast<std::size_t>(pattern.n);
  if (coloring.color.size() != n ||
      products.size() != static_cast<std::size_t>(coloring.num_colors) * n) {
    throw RecoveryError("expected " + std::to_string(coloring.num_colors) +
                        " product columns of length " + std::to_string(n) +
                        ", got " + std::to_string(products.size()) +
                        " values");
  }
  if (coloring.plan.size() != pattern.entries.size()) {
    throw RecoveryError("recovery plan does not match the pattern");
  }
  std::vector<double> h(pattern.entries.size(), 0.0);
  for (const RecoveryStep& s : coloring.plan) {
    double v = products[static_cast<std::size_t>(s.color) * n + s.row];
    for (int32_t k : s.subtract) v -= h[k];
    h[s.entry] = v;
  }
  return h;
}

std::string describe(const SparsityPattern& pattern,
                     const Coloring& coloring) {
  std::ostringstream os;
  os << "n: " << pattern.n << "\n";
  os << "entries: " << pattern.entries.size() << "\n";
  os << "colors: " << coloring.num_colors << "\n";
  const auto classes = coloring.classes();
  for (int32_t c = 0; c < coloring.num_colors; ++c) {
    os << "class " << c << ":";
    for (int32_t v : classes[c]) os << ' ' << v;
    os << "\n";
  }
  const auto seeds = coloring.seeds();
  for (int32_t c = 0; c < coloring.num_colors; ++c) {
    os << "seed " << c << ": ";
    for (double s : seeds[c]) os << (s != 0.0 ? '1' : '0');
    os << "\n";
  }
  os << "plan: " << coloring.plan.size() << " steps\n";
  return os.str();
}

}  // namespace amlkit
