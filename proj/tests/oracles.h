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

// Test-only reference computations. Nothing here calls into the library;
// every formula is written out again from the model definitions so that a
// transcription slip in the builders shows up as a disagreement.

#ifndef AMLKIT_TESTS_ORACLES_H_
#define AMLKIT_TESTS_ORACLES_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

// --- min-cost flow, five-node example ----------------------------------------

struct FlowEdge {
  int from, to;
  double cost, capacity;
};

inline std::vector<FlowEdge> five_node_edges() {
  return {{1, 2, 1, 0.5}, {1, 3, 2, 0.4}, {1, 4, 3, 0.6},
          {2, 5, 2, 0.3}, {3, 5, 2, 0.6}, {4, 5, 2, 0.5}};
}

struct FlowSolution {
  double cost = 0.0;
  std::vector<double> edge_flow;
};

// Enumerates every 1 -> k -> 5 path, then routes one unit greedily along
// the cheapest paths. The paths share no edge, so greedy is optimal.
inline FlowSolution five_node_path_enumeration() {
  const std::vector<FlowEdge> edges = five_node_edges();
  struct Path {
    int first, second;
    double cost, capacity;
  };
  std::vector<Path> paths;
  for (int a = 0; a < static_cast<int>(edges.size()); ++a) {
    if (edges[a].from != 1) continue;
    for (int b = 0; b < static_cast<int>(edges.size()); ++b) {
      if (edges[b].from != edges[a].to || edges[b].to != 5) continue;
      paths.push_back({a, b, edges[a].cost + edges[b].cost,
                       std::min(edges[a].capacity, edges[b].capacity)});
    }
  }
  std::sort(paths.begin(), paths.end(),
            [](const Path& p, const Path& q) { return p.cost < q.cost; });
  FlowSolution s;
  s.edge_flow.assign(edges.size(), 0.0);
  double left = 1.0;
  for (const Path& p : paths) {
    const double f = std::min(left, p.capacity);
    s.edge_flow[p.first] += f;
    s.edge_flow[p.second] += f;
    s.cost += f * p.cost;
    left -= f;
  }
  return s;
}

// --- 1 + sum_ij |c_j - i| (1 - x_ij) x_1j -----------------------------------

// Monomials keyed by flat variable index (i - 1) * d + (j - 1), 1-based i, j.
struct Expansion {
  double constant = 0.0;
  std::map<int, double> linear;
  std::map<std::pair<int, int>, double> quadratic;
  int raw_linear = 0;
  int raw_quadratic = 0;
};

inline Expansion quadexample_expansion(int d) {
  Expansion e;
  e.constant = 1.0;
  auto flat = [d](int i, int j) { return (i - 1) * d + (j - 1); };
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= d; ++j) {
      const double c = std::fabs(static_cast<double>(j) - i);  // c_j = j
      // c (1 - x_ij) x_1j = c x_1j - c x_ij x_1j
      e.linear[flat(1, j)] += c;
      ++e.raw_linear;
      int a = flat(i, j), b = flat(1, j);
      if (a > b) std::swap(a, b);
      e.quadratic[{a, b}] -= c;
      ++e.raw_quadratic;
    }
  }
  std::erase_if(e.linear, [](const auto& kv) { return kv.second == 0.0; });
  std::erase_if(e.quadratic, [](const auto& kv) { return kv.second == 0.0; });
  return e;
}

inline double quadexample_value(int d, const std::vector<double>& x) {
  double v = 1.0;
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= d; ++j) {
      v += std::fabs(static_cast<double>(j) - i) *
           (1.0 - x[(i - 1) * d + (j - 1)]) * x[j - 1];
    }
  }
  return v;
}

// --- lqcp ----------------------------------------------------------------------

struct LqcpData {
  int m = 0, n = 0;
  double a = 0.0, dx = 0.0, dt = 0.0, h2 = 0.0;
  std::vector<double> target;  // j = 0..n
};

// y is (m+1) x (n+1) row-major, u has m+1 entries.
inline double lqcp_objective(const LqcpData& p, const std::vector<double>& y,
                             const std::vector<double>& u) {
  auto Y = [&](int i, int j) { return y[i * (p.n + 1) + j]; };
  const int m = p.m, n = p.n;
  double s = std::pow(Y(m, 0) - p.target[0], 2) +
             std::pow(Y(m, n) - p.target[n], 2);
  for (int j = 1; j <= n - 1; ++j) s += 2.0 * std::pow(Y(m, j) - p.target[j], 2);
  double r = u[m] * u[m];
  for (int i = 1; i <= m - 1; ++i) r += 2.0 * u[i] * u[i];
  return 0.25 * p.dx * s + 0.25 * p.a * p.dt * r;
}

// Row residuals (lhs - rhs), grouped as: heat equation rows for i < m and
// 0 < j < n, y_0j = 0, the three-point rows at j = 0, the Neumann rows.
inline std::vector<double> lqcp_rows(const LqcpData& p,
                                     const std::vector<double>& y,
                                     const std::vector<double>& u) {
  auto Y = [&](int i, int j) { return y[i * (p.n + 1) + j]; };
  const int m = p.m, n = p.n;
  std::vector<double> out;
  for (int i = 0; i < m; ++i) {
    for (int j = 1; j < n; ++j) {
      const double lhs = (Y(i + 1, j) - Y(i, j)) / p.dt;
      const double rhs =
          (Y(i, j - 1) - 2 * Y(i, j) + Y(i, j + 1) + Y(i + 1, j - 1) -
           2 * Y(i + 1, j) + Y(i + 1, j + 1)) /
          (2.0 * p.h2);
      out.push_back(lhs - rhs);
    }
  }
  for (int j = 0; j <= n; ++j) out.push_back(Y(0, j));
  for (int i = 0; i <= m; ++i) {
    out.push_back(Y(i, 2) - 4 * Y(i, 1) + 3 * Y(i, 0));
  }
  for (int i = 0; i <= m; ++i) {
    const double lhs =
        (Y(i, n - 2) - 4 * Y(i, n - 1) + 3 * Y(i, n)) / (2.0 * p.dx);
    out.push_back(lhs - (u[i] - Y(i, n)));
  }
  return out;
}

// --- fac -----------------------------------------------------------------------

using Point = std::array<double, 2>;

inline std::vector<Point> fac_customers(int g) {
  std::vector<Point> c;
  for (int i = 0; i <= g; ++i) {
    for (int j = 0; j <= g; ++j) {
      c.push_back({static_cast<double>(i) / g, static_cast<double>(j) / g});
    }
  }
  return c;
}

inline double fac_big_m(const std::vector<Point>& c) {
  double m = 0.0;
  for (const Point& a : c) {
    for (const Point& b : c) m = std::max(m, std::hypot(a[0] - b[0], a[1] - b[1]));
  }
  return m;
}

// ||x_c - y_f|| - d - M (1 - z_cf) for every (c, f), c-major.
inline std::vector<double> fac_distance_rows(const std::vector<Point>& cust,
                                             double big_m, double d,
                                             const std::vector<Point>& y,
                                             const std::vector<double>& z) {
  std::vector<double> out;
  const int nf = static_cast<int>(y.size());
  for (int c = 0; c < static_cast<int>(cust.size()); ++c) {
    for (int f = 0; f < nf; ++f) {
      out.push_back(std::hypot(cust[c][0] - y[f][0], cust[c][1] - y[f][1]) - d -
                    big_m * (1.0 - z[c * nf + f]));
    }
  }
  return out;
}

// Radius of the smallest circle enclosing the points (0 when empty), by
// checking every circle through two or three of them.
inline double enclosing_radius(const std::vector<Point>& pts) {
  const int k = static_cast<int>(pts.size());
  if (k <= 1) return 0.0;
  auto covers = [&](Point c, double r) {
    for (const Point& p : pts) {
      if (std::hypot(p[0] - c[0], p[1] - c[1]) > r + 1e-12) return false;
    }
    return true;
  };
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const Point c{0.5 * (pts[a][0] + pts[b][0]), 0.5 * (pts[a][1] + pts[b][1])};
      const double r = 0.5 * std::hypot(pts[a][0] - pts[b][0], pts[a][1] - pts[b][1]);
      if (r < best && covers(c, r)) best = r;
      for (int e = b + 1; e < k; ++e) {
        const double ax = pts[a][0], ay = pts[a][1];
        const double bx = pts[b][0], by = pts[b][1];
        const double cx = pts[e][0], cy = pts[e][1];
        const double den = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        if (std::fabs(den) < 1e-14) continue;
        const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by,
                     c2 = cx * cx + cy * cy;
        const Point o{(a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / den,
                      (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / den};
        const double rr = std::hypot(ax - o[0], ay - o[1]);
        if (rr < best && covers(o, rr)) best = rr;
      }
    }
  }
  return best;
}

// min over all assignments of customers to facilities of the largest
// per-facility enclosing radius. F^C assignments.
inline double fac_brute_force(int g, int f) {
  const std::vector<Point> cust = fac_customers(g);
  const int nc = static_cast<int>(cust.size());
  int64_t total = 1;
  for (int c = 0; c < nc; ++c) total *= f;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Point>> groups(f);
  for (int64_t code = 0; code < total; ++code) {
    for (auto& gr : groups) gr.clear();
    int64_t rest = code;
    for (int c = 0; c < nc; ++c) {
      groups[rest % f].push_back(cust[c]);
      rest /= f;
    }
    double worst = 0.0;
    for (const auto& gr : groups) worst = std::max(worst, enclosing_radius(gr));
    best = std::min(best, worst);
  }
  return best;
}

// --- clnlbeam ------------------------------------------------------------------

// t, x, u each hold n + 1 entries (index 0..n).
inline double clnlbeam_objective(int n, double alpha, double h,
                                 const std::vector<double>& t,
                                 const std::vector<double>& u) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += h / 2 * (u[i + 1] * u[i + 1] + u[i] * u[i]) +
         alpha * h / 2 * (std::cos(t[i + 1]) + std::cos(t[i]));
  }
  return s;
}

// n rows in x, then n rows in t.
inline std::vector<double> clnlbeam_rows(int n, const std::vector<double>& t,
                                         const std::vector<double>& x,
                                         const std::vector<double>& u) {
  std::vector<double> out;
  const double w = 1.0 / (2.0 * n);
  for (int i = 0; i < n; ++i) {
    out.push_back(x[i + 1] - x[i] - w * (std::sin(t[i + 1]) + std::sin(t[i])));
  }
  for (int i = 0; i < n; ++i) {
    out.push_back(t[i + 1] - t[i] - w * u[i + 1] - w * u[i]);
  }
  return out;
}

// Diagonal of sigma * Hf + sum_i lambda_i * H(row_i), variables ordered
// t, x, u. Off-diagonal entries are zero by inspection of the formulas.
inline std::vector<double> clnlbeam_hessian_diagonal(
    int n, double alpha, double h, const std::vector<double>& t, double sigma,
    const std::vector<double>& lambda) {
  std::vector<double> diag(3 * (n + 1), 0.0);
  const double w = 1.0 / (2.0 * n);
  for (int i = 0; i < n; ++i) {
    for (int k : {i, i + 1}) {
      diag[k] += sigma * (-alpha * h / 2 * std::cos(t[k]));
      diag[2 * (n + 1) + k] += sigma * h;
      // d2/dt2 of -w sin t is w sin t.
      diag[k] += lambda[i] * w * std::sin(t[k]);
    }
  }
  return diag;
}

}  // namespace oracle

#endif  // AMLKIT_TESTS_ORACLES_H_
