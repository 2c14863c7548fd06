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

#include "amlkit/simplex.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <variant>

#include "amlkit/errors.h"
#include "amlkit/kernels.h"
#include "json.hpp"

namespace amlkit {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kRefreshInterval = 64;
constexpr int64_t kReinvertMin = 1000;
constexpr int64_t kReinvertPerRow = 10;
constexpr double kDropTol = 1e-14;
constexpr double kResidualTol = 1e-9;
constexpr double kCostShift = 1e-7;
constexpr int32_t kSoftCap = 5000;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// DenseSimplex

void DenseSimplex::reset(std::span<const double> cost,
                         std::span<const double> lb,
                         std::span<const double> ub) {
  n_ = static_cast<int32_t>(cost.size());
  m_ = 0;
  cost_.clear();
  lo_.clear();
  up_.clear();
  x_.clear();
  basic_row_.clear();
  art_row_.clear();
  art_sign_.clear();
  head_.clear();
  slack_col_.clear();
  rows_.clear();
  tab_.clear();
  d_.clear();
  has_basis_ = false;
  for (int32_t j = 0; j < n_; ++j) add_column(cost[j], lb[j], ub[j], 0.0);
  for (int32_t j = 0; j < n_; ++j) x_[j] = nonbasic_start(j);
}

void DenseSimplex::add_column(double cost, double lb, double ub,
                              double value) {
  cost_.push_back(cost);
  lo_.push_back(lb);
  up_.push_back(ub);
  x_.push_back(value);
  basic_row_.push_back(-1);
  art_row_.push_back(-1);
  art_sign_.push_back(0.0);
  d_.push_back(cost);
  active_cost_.push_back(cost);
  for (auto& row : tab_) row.push_back(0.0);
}

double DenseSimplex::nonbasic_start(int32_t j) const {
  if (finite(lo_[j])) return lo_[j];
  if (finite(up_[j])) return up_[j];
  return 0.0;
}

void DenseSimplex::add_row(std::span<const int32_t> cols,
                           std::span<const double> vals, Sense sense,
                           double rhs) {
  SparseRow sr;
  sr.cols.assign(cols.begin(), cols.end());
  sr.vals.assign(vals.begin(), vals.end());
  sr.rhs = rhs;
  const double inf = std::numeric_limits<double>::infinity();
  const double lb = sense == Sense::kGreaterEqual ? -inf : 0.0;
  const double ub = sense == Sense::kLessEqual ? inf : 0.0;

  const int32_t s = num_cols();
  add_column(0.0, lb, ub, 0.0);
  slack_col_.push_back(s);
  rows_.push_back(std::move(sr));
  ++m_;
  if (!warned_size_ && m_ + num_cols() > kSoftCap) {
    warned_size_ = true;
    std::cerr << "warning: dense simplex beyond " << kSoftCap
              << " rows + columns; expect slow solves\n";
  }
  if (!has_basis_) return;

  // Express the new row in the current basis; its slack becomes basic.
  std::vector<double> row(num_cols(), 0.0);
  double activity = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    row[cols[k]] += vals[k];
    activity += vals[k] * x_[cols[k]];
  }
  row[s] = 1.0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const int32_t i = basic_row_[cols[k]];
    if (i >= 0 && row[cols[k]] != 0.0) {
      kernels::axpy(-row[cols[k]], tab_[i], row);
      row[cols[k]] = 0.0;
    }
  }
  tab_.push_back(std::move(row));
  head_.push_back(s);
  basic_row_[s] = m_ - 1;
  x_[s] = rhs - activity;
  d_[s] = 0.0;
}

void DenseSimplex::set_bounds(int32_t col, double lb, double ub) {
  lo_[col] = lb;
  up_[col] = ub;
  if (!has_basis_) {
    x_[col] = nonbasic_start(col);
    return;
  }
  if (basic_row_[col] >= 0) return;
  const double old = x_[col];
  double v;
  const double tol = options_.optimality_tol;
  if (lb == ub) {
    v = lb;
  } else if (d_[col] > tol && finite(lb)) {
    v = lb;
  } else if (d_[col] < -tol && finite(ub)) {
    v = ub;
  } else {
    v = std::clamp(old, lb, ub);
    if (v != lb && v != ub && !(v == 0.0 && !finite(lb) && !finite(ub))) {
      v = finite(lb) && (!finite(ub) || v - lb <= ub - v) ? lb
          : finite(ub)                                    ? ub
                                                          : 0.0;
    }
  }
  const double delta = v - old;
  if (delta == 0.0) return;
  x_[col] = v;
  for (int32_t i = 0; i < m_; ++i) {
    const double a = tab_[i][col];
    if (a != 0.0) x_[head_[i]] -= a * delta;
  }
}

double DenseSimplex::objective() const {
  double v = 0.0;
  for (int32_t j = 0; j < n_; ++j) v += cost_[j] * x_[j];
  return v;
}

int64_t DenseSimplex::iteration_cap() const {
  if (options_.max_iterations > 0) return options_.max_iterations;
  return 50 * static_cast<int64_t>(m_ + num_cols()) + 1000;
}

void DenseSimplex::rebuild_tableau() {
  const int32_t nc = num_cols();
  tab_.assign(m_, std::vector<double>(nc, 0.0));
  for (int32_t i = 0; i < m_; ++i) {
    const SparseRow& r = rows_[i];
    for (std::size_t k = 0; k < r.cols.size(); ++k) {
      tab_[i][r.cols[k]] += r.vals[k];
    }
    tab_[i][slack(i)] = 1.0;
  }
}

void DenseSimplex::compute_reduced_costs(std::span<const double> cost) {
  active_cost_.assign(cost.begin(), cost.end());
  d_.assign(cost.begin(), cost.end());
  for (int32_t i = 0; i < m_; ++i) {
    const double cb = cost[head_[i]];
    if (cb != 0.0) kernels::axpy(-cb, tab_[i], d_);
  }
  for (int32_t i = 0; i < m_; ++i) d_[head_[i]] = 0.0;
}

void DenseSimplex::refresh_basic_values() {
  // r = b - N x_N, then x_B = B^-1 r with B^-1 read off the slack columns.
  std::vector<double> r(m_);
  for (int32_t k = 0; k < m_; ++k) {
    const SparseRow& row = rows_[k];
    double v = row.rhs;
    for (std::size_t t = 0; t < row.cols.size(); ++t) {
      if (basic_row_[row.cols[t]] < 0) v -= row.vals[t] * x_[row.cols[t]];
    }
    if (basic_row_[slack(k)] < 0) v -= x_[slack(k)];
    r[k] = v;
  }
  for (int32_t j = 0; j < num_cols(); ++j) {
    const int32_t k = art_row_[j];
    if (k >= 0 && basic_row_[j] < 0) r[k] -= art_sign_[j] * x_[j];
  }
  // A basic slack's column of B^-1 is a unit vector, so only rows with a
  // nonbasic slack contribute densely.
  std::vector<int32_t> dense_rows;
  for (int32_t k = 0; k < m_; ++k) {
    if (basic_row_[slack(k)] < 0) dense_rows.push_back(k);
  }
  std::vector<double> xb(m_, 0.0);
  for (int32_t k = 0; k < m_; ++k) {
    const int32_t i = basic_row_[slack(k)];
    if (i >= 0) xb[i] += r[k];
  }
  for (int32_t i = 0; i < m_; ++i) {
    const std::vector<double>& ti = tab_[i];
    double v = xb[i];
    for (int32_t k : dense_rows) v += ti[slack(k)] * r[k];
    x_[head_[i]] = v;
  }
  pivots_since_refresh_ = 0;
}

bool DenseSimplex::reinvert() {
  pivots_since_reinvert_ = 0;
  if (m_ == 0) return true;
  // Basis matrix B (row-major) from the original columns, inverted by
  // Gauss-Jordan with partial pivoting.
  std::vector<std::vector<double>> b(m_, std::vector<double>(m_, 0.0));
  std::vector<std::vector<int32_t>> row_cols(m_);
  for (int32_t k = 0; k < m_; ++k) {
    const SparseRow& row = rows_[k];
    for (std::size_t t = 0; t < row.cols.size(); ++t) {
      const int32_t i = basic_row_[row.cols[t]];
      if (i >= 0) b[k][i] += row.vals[t];
    }
    const int32_t si = basic_row_[slack(k)];
    if (si >= 0) b[k][si] += 1.0;
  }
  for (int32_t j = 0; j < num_cols(); ++j) {
    if (art_row_[j] >= 0 && basic_row_[j] >= 0) {
      b[art_row_[j]][basic_row_[j]] += art_sign_[j];
    }
  }
  std::vector<std::vector<double>> inv(m_, std::vector<double>(m_, 0.0));
  for (int32_t k = 0; k < m_; ++k) inv[k][k] = 1.0;
  for (int32_t c = 0; c < m_; ++c) {
    int32_t p = c;
    for (int32_t k = c + 1; k < m_; ++k) {
      if (std::fabs(b[k][c]) > std::fabs(b[p][c])) p = k;
    }
    if (std::fabs(b[p][c]) < 1e-11) return false;
    std::swap(b[p], b[c]);
    std::swap(inv[p], inv[c]);
    const double s = 1.0 / b[c][c];
    kernels::scale(s, b[c]);
    kernels::scale(s, inv[c]);
    for (int32_t k = 0; k < m_; ++k) {
      if (k == c) continue;
      const double f = b[k][c];
      if (f == 0.0) continue;
      kernels::axpy(-f, b[c], b[k]);
      kernels::axpy(-f, inv[c], inv[k]);
    }
  }
  // inv maps row space to basis positions: inv[i] is row i of B^-1, where
  // row i belongs to the basic column at position i.
  const int32_t nc = num_cols();
  std::vector<std::vector<double>> tab(m_, std::vector<double>(nc, 0.0));
  for (int32_t k = 0; k < m_; ++k) {
    const SparseRow& row = rows_[k];
    for (int32_t i = 0; i < m_; ++i) {
      const double w = inv[i][k];
      if (w == 0.0) continue;
      std::vector<double>& ti = tab[i];
      for (std::size_t t = 0; t < row.cols.size(); ++t) {
        ti[row.cols[t]] += w * row.vals[t];
      }
      ti[slack(k)] = w;
    }
  }
  for (int32_t j = 0; j < nc; ++j) {
    const int32_t k = art_row_[j];
    if (k < 0) continue;
    for (int32_t i = 0; i < m_; ++i) tab[i][j] = art_sign_[j] * inv[i][k];
  }
  // B^-1 B = I exactly on the basic columns.
  for (int32_t i = 0; i < m_; ++i) {
    for (int32_t r = 0; r < m_; ++r) tab[r][head_[i]] = r == i ? 1.0 : 0.0;
  }
  tab_ = std::move(tab);
  const std::vector<double> cost = active_cost_;
  compute_reduced_costs(cost);
  refresh_basic_values();
  return true;
}

double DenseSimplex::max_row_residual() const {
  std::vector<double> r(m_);
  for (int32_t k = 0; k < m_; ++k) {
    const SparseRow& row = rows_[k];
    double v = x_[slack(k)] - row.rhs;
    for (std::size_t t = 0; t < row.cols.size(); ++t) {
      v += row.vals[t] * x_[row.cols[t]];
    }
    r[k] = v;
  }
  for (int32_t j = 0; j < num_cols(); ++j) {
    if (art_row_[j] >= 0) r[art_row_[j]] += art_sign_[j] * x_[j];
  }
  double worst = 0.0;
  for (int32_t k = 0; k < m_; ++k) {
    worst = std::max(worst, std::fabs(r[k]) / (1.0 + std::fabs(rows_[k].rhs)));
  }
  return worst;
}

bool DenseSimplex::primal_feasible() const {
  const double tol = options_.feasibility_tol;
  for (int32_t i = 0; i < m_; ++i) {
    const int32_t b = head_[i];
    if (x_[b] < lo_[b] - tol || x_[b] > up_[b] + tol) return false;
  }
  return true;
}

void DenseSimplex::pivot(int32_t r, int32_t q) {
  std::vector<double>& pr = tab_[r];
  kernels::scale(1.0 / pr[q], pr);
  pr[q] = 1.0;
  nz_.clear();
  for (int32_t j = 0; j < static_cast<int32_t>(pr.size()); ++j) {
    if (std::fabs(pr[j]) < kDropTol) {
      pr[j] = 0.0;
    } else {
      nz_.push_back(j);
    }
  }
  // Cut rows leave most tableau rows sparse; fall back to the dense kernel
  // when the pivot row is not.
  const bool sparse = nz_.size() * 4 < pr.size();
  auto update = [&](double f, std::vector<double>& row) {
    if (sparse) {
      for (int32_t j : nz_) row[j] -= f * pr[j];
    } else {
      kernels::axpy(-f, pr, row);
    }
  };
  for (int32_t i = 0; i < m_; ++i) {
    if (i == r) continue;
    const double f = tab_[i][q];
    if (f == 0.0) continue;
    update(f, tab_[i]);
    tab_[i][q] = 0.0;
  }
  const double f = d_[q];
  if (f != 0.0) update(f, d_);
  d_[q] = 0.0;
  const int32_t leaving = head_[r];
  basic_row_[leaving] = -1;
  head_[r] = q;
  basic_row_[q] = r;
  ++last_pivots_;
  if (++pivots_since_reinvert_ >=
      kReinvertMin + kReinvertPerRow * int64_t{m_}) {
    reinvert();
  } else if (++pivots_since_refresh_ >= kRefreshInterval) {
    refresh_basic_values();
  }
}

bool DenseSimplex::nonbasic_dual_feasible(int32_t j) const {
  if (lo_[j] == up_[j]) return true;
  const double tol = options_.optimality_tol * 10.0;
  const bool can_up = x_[j] < up_[j];
  const bool can_down = x_[j] > lo_[j];
  if (can_up && d_[j] < -tol) return false;
  if (can_down && d_[j] > tol) return false;
  return true;
}

bool DenseSimplex::basis_dual_feasible() const {
  for (int32_t j = 0; j < num_cols(); ++j) {
    if (basic_row_[j] < 0 && !nonbasic_dual_feasible(j)) return false;
  }
  return true;
}

SolveStatus DenseSimplex::primal() {
  const double ftol = options_.feasibility_tol;
  const double otol = options_.optimality_tol;
  const int32_t nc = num_cols();
  const int64_t stall_limit = 3 * static_cast<int64_t>(n_ + m_);
  int64_t stalled = 0;
  bool bland = false;
  const int64_t cap = iteration_cap();
  for (int64_t it = 0;; ++it) {
    if (it >= cap) return SolveStatus::kIterationLimit;
    // Pricing.
    int32_t q = -1;
    double best = 0.0;
    for (int32_t j = 0; j < nc; ++j) {
      if (basic_row_[j] >= 0 || lo_[j] == up_[j]) continue;
      const double dj = d_[j];
      const bool eligible = (dj < -otol && x_[j] < up_[j]) ||
                            (dj > otol && x_[j] > lo_[j]);
      if (!eligible) continue;
      if (bland) {
        q = j;
        break;
      }
      if (std::fabs(dj) > best) {
        best = std::fabs(dj);
        q = j;
      }
    }
    if (q < 0) return SolveStatus::kOptimal;
    const double dir = d_[q] < 0.0 ? 1.0 : -1.0;

    // Ratio test.
    double t = up_[q] - lo_[q];
    int32_t r = -1;
    double r_alpha = 0.0;
    for (int32_t i = 0; i < m_; ++i) {
      const double alpha = tab_[i][q] * dir;
      if (std::fabs(alpha) < kPivotTol) continue;
      const int32_t b = head_[i];
      double limit;
      if (alpha > 0.0) {
        if (!finite(lo_[b])) continue;
        limit = (x_[b] - lo_[b]) / alpha;
      } else {
        if (!finite(up_[b])) continue;
        limit = (up_[b] - x_[b]) / -alpha;
      }
      limit = std::max(limit, 0.0);
      bool take = false;
      if (limit < t - 1e-12) {
        take = true;
      } else if (limit <= t + 1e-12 && r >= 0) {
        take = bland ? head_[i] < head_[r]
                     : std::fabs(alpha) > std::fabs(r_alpha);
      }
      if (take) {
        t = limit;
        r = i;
        r_alpha = alpha;
      }
    }
    if (r < 0 && !finite(t)) return SolveStatus::kUnbounded;

    if (t > 0.0) {
      x_[q] += dir * t;
      for (int32_t i = 0; i < m_; ++i) {
        const double a = tab_[i][q];
        if (a != 0.0) x_[head_[i]] -= a * dir * t;
      }
    }
    if (r < 0) {
      // Bound flip of the entering column.
      x_[q] = dir > 0 ? up_[q] : lo_[q];
      ++last_pivots_;
    } else {
      const int32_t b = head_[r];
      x_[b] = r_alpha > 0.0 ? lo_[b] : up_[b];
      pivot(r, q);
    }
    if (t <= ftol) {
      if (++stalled > stall_limit && !bland) {
        bland = true;
        used_bland_ = true;
      }
    } else {
      stalled = 0;
    }
  }
}

SolveStatus DenseSimplex::dual() {
  const int32_t nc = num_cols();
  // Shift the reduced costs of nonbasic columns away from zero, in their
  // dual feasible direction, so ties in the ratio test are rare. The true
  // costs are restored on exit; the caller's primal pass absorbs the
  // difference.
  const std::vector<double> true_cost = active_cost_;
  std::vector<double> shifted = true_cost;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<uint64_t>(nc));
  std::uniform_real_distribution<double> unit(1.0, 2.0);
  for (int32_t j = 0; j < nc; ++j) {
    if (basic_row_[j] >= 0 || lo_[j] == up_[j]) continue;
    const double eps = kCostShift * unit(rng) * (1.0 + std::fabs(true_cost[j]));
    if (x_[j] == lo_[j] && d_[j] >= 0.0) {
      shifted[j] += eps;
      d_[j] += eps;
    } else if (x_[j] == up_[j] && d_[j] <= 0.0) {
      shifted[j] -= eps;
      d_[j] -= eps;
    }
  }
  active_cost_ = shifted;
  const SolveStatus status = dual_loop();
  compute_reduced_costs(true_cost);
  return status;
}

SolveStatus DenseSimplex::dual_loop() {
  const double ftol = options_.feasibility_tol;
  const int32_t nc = num_cols();
  const int64_t stall_limit = 3 * static_cast<int64_t>(n_ + m_);
  int64_t stalled = 0;
  bool bland = false;
  const int64_t cap = iteration_cap();
  for (int64_t it = 0;; ++it) {
    if (it >= cap) return SolveStatus::kIterationLimit;
    int32_t r = -1;
    double worst = 0.0;
    for (int32_t i = 0; i < m_; ++i) {
      const int32_t b = head_[i];
      double infeas = 0.0;
      if (x_[b] < lo_[b] - ftol) infeas = lo_[b] - x_[b];
      if (x_[b] > up_[b] + ftol) infeas = x_[b] - up_[b];
      if (infeas <= 0.0) continue;
      if (bland) {
        if (r < 0 || b < head_[r]) r = i;
      } else if (infeas > worst) {
        worst = infeas;
        r = i;
      }
    }
    if (r < 0) return SolveStatus::kOptimal;
    const int32_t leaving = head_[r];
    const bool raise = x_[leaving] < lo_[leaving];
    const double target = raise ? lo_[leaving] : up_[leaving];

    const std::vector<double>& pr = tab_[r];
    candidates_.clear();
    for (int32_t j = 0; j < nc; ++j) {
      if (basic_row_[j] >= 0 || lo_[j] == up_[j]) continue;
      const double alpha = pr[j];
      if (std::fabs(alpha) < kPivotTol) continue;
      const bool can_up = x_[j] < up_[j];
      const bool can_down = x_[j] > lo_[j];
      // x_B moves by -alpha * delta_j.
      const bool ok = raise ? ((alpha < 0.0 && can_up) || (alpha > 0.0 && can_down))
                            : ((alpha > 0.0 && can_up) || (alpha < 0.0 && can_down));
      if (!ok) continue;
      candidates_.push_back({j, std::fabs(d_[j]) / std::fabs(alpha), alpha});
    }
    if (candidates_.empty()) return SolveStatus::kInfeasible;
    std::sort(candidates_.begin(), candidates_.end(),
              [](const Candidate& a, const Candidate& b) {
                return a.ratio < b.ratio ||
                       (a.ratio == b.ratio && a.col < b.col);
              });
    // Bound-flipping ratio test: boxed columns whose breakpoint is passed
    // move to their opposite bound as long as the leaving row stays
    // infeasible. Bland mode takes the first breakpoint.
    std::size_t k = 0;
    if (!bland) {
      double slope = std::fabs(x_[leaving] - target);
      for (; k < candidates_.size(); ++k) {
        const Candidate& c = candidates_[k];
        const double range = up_[c.col] - lo_[c.col];
        if (!finite(range)) break;
        const double next = slope - std::fabs(c.alpha) * range;
        if (next <= 0.0) break;
        slope = next;
      }
      if (k == candidates_.size()) return SolveStatus::kInfeasible;
      // Among near-ties at the chosen breakpoint take the largest |alpha|.
      std::size_t pick = k;
      for (std::size_t t = k + 1; t < candidates_.size() &&
                                  candidates_[t].ratio <= candidates_[k].ratio + 1e-12;
           ++t) {
        if (std::fabs(candidates_[t].alpha) > std::fabs(candidates_[pick].alpha)) {
          pick = t;
        }
      }
      std::swap(candidates_[k], candidates_[pick]);
      for (std::size_t t = 0; t < k; ++t) {
        const int32_t j = candidates_[t].col;
        const double to = x_[j] == lo_[j] ? up_[j] : lo_[j];
        const double step = to - x_[j];
        x_[j] = to;
        for (int32_t i = 0; i < m_; ++i) {
          const double a = tab_[i][j];
          if (a != 0.0) x_[head_[i]] -= a * step;
        }
        ++last_pivots_;
      }
    }
    const int32_t q = candidates_[k].col;
    const double q_alpha = candidates_[k].alpha;
    const double best = candidates_[k].ratio;

    const double delta = (x_[leaving] - target) / q_alpha;
    x_[q] += delta;
    for (int32_t i = 0; i < m_; ++i) {
      const double a = tab_[i][q];
      if (a != 0.0) x_[head_[i]] -= a * delta;
    }
    x_[leaving] = target;
    pivot(r, q);
    if (best <= 1e-12) {
      if (++stalled > stall_limit && !bland) {
        bland = true;
        used_bland_ = true;
      }
    } else {
      stalled = 0;
    }
  }
}

SolveStatus DenseSimplex::cold_solve() {
  last_pivots_ = 0;
  used_bland_ = false;
  // Drop artificial columns of earlier cold solves.
  {
    std::vector<int32_t> remap(num_cols(), -1);
    int32_t next = 0;
    for (int32_t j = 0; j < num_cols(); ++j) {
      if (art_row_[j] < 0) remap[j] = next++;
    }
    auto compact = [&](auto& v) {
      for (int32_t j = 0; j < num_cols(); ++j) {
        if (remap[j] >= 0) v[remap[j]] = v[j];
      }
      v.resize(next);
    };
    if (next != num_cols()) {
      compact(cost_);
      compact(lo_);
      compact(up_);
      compact(x_);
      for (int32_t& s : slack_col_) s = remap[s];
      basic_row_.assign(next, -1);
      art_row_.assign(next, -1);
      art_sign_.assign(next, 0.0);
      d_.resize(next);
    }
  }
  tab_.clear();
  pivots_since_reinvert_ = 0;
  const int32_t base_cols = num_cols();
  basic_row_.assign(base_cols, -1);
  art_row_.assign(base_cols, -1);
  art_sign_.assign(base_cols, 0.0);
  for (int32_t j = 0; j < n_; ++j) x_[j] = nonbasic_start(j);
  rebuild_tableau();
  head_.assign(m_, -1);

  const double ftol = options_.feasibility_tol;
  std::vector<std::pair<int32_t, double>> artificial;  // (row, sign)
  for (int32_t i = 0; i < m_; ++i) {
    const SparseRow& row = rows_[i];
    double activity = 0.0;
    for (std::size_t k = 0; k < row.cols.size(); ++k) {
      activity += row.vals[k] * x_[row.cols[k]];
    }
    const int32_t s = slack(i);
    const double sv = row.rhs - activity;
    if (sv >= lo_[s] - ftol && sv <= up_[s] + ftol) {
      x_[s] = sv;
      head_[i] = s;
      basic_row_[s] = i;
    } else {
      x_[s] = std::clamp(sv, lo_[s], up_[s]);
      artificial.emplace_back(i, sv - x_[s] > 0.0 ? 1.0 : -1.0);
    }
  }
  has_basis_ = true;
  if (!artificial.empty()) {
    for (const auto& [i, sign] : artificial) {
      const int32_t a = num_cols();
      const SparseRow& row = rows_[i];
      double activity = x_[slack(i)];
      for (std::size_t k = 0; k < row.cols.size(); ++k) {
        activity += row.vals[k] * x_[row.cols[k]];
      }
      add_column(0.0, 0.0, std::numeric_limits<double>::infinity(),
                 std::fabs(row.rhs - activity));
      art_row_[a] = i;
      art_sign_[a] = sign;
      // Row i scaled by sign so the artificial has coefficient 1.
      if (sign < 0.0) kernels::scale(-1.0, tab_[i]);
      tab_[i][a] = 1.0;
      head_[i] = a;
      basic_row_[a] = i;
    }
    std::vector<double> phase1(num_cols(), 0.0);
    for (int32_t j = 0; j < num_cols(); ++j) {
      if (art_row_[j] >= 0) phase1[j] = 1.0;
    }
    compute_reduced_costs(phase1);
    const SolveStatus s1 = primal();
    if (s1 == SolveStatus::kIterationLimit) return s1;
    refresh_basic_values();
    double infeasibility = 0.0;
    for (int32_t j = 0; j < num_cols(); ++j) {
      if (art_row_[j] >= 0) infeasibility += std::fabs(x_[j]);
    }
    if (infeasibility > 1e-7) {
      has_basis_ = false;
      return SolveStatus::kInfeasible;
    }
    for (int32_t j = 0; j < num_cols(); ++j) {
      if (art_row_[j] < 0) continue;
      up_[j] = 0.0;
      if (basic_row_[j] < 0) x_[j] = 0.0;
    }
  }
  compute_reduced_costs(cost_);
  const SolveStatus s2 = primal();
  refresh_basic_values();
  return polish(s2);
}

SolveStatus DenseSimplex::solve() {
  if (!has_basis_) return cold_solve();
  last_pivots_ = 0;
  used_bland_ = false;
  if (!basis_dual_feasible()) {
    if (!primal_feasible()) {
      const int64_t before = last_pivots_;
      const SolveStatus s = cold_solve();
      last_pivots_ += before;
      return s;
    }
    const SolveStatus s = primal();
    refresh_basic_values();
    return polish(s);
  }
  const SolveStatus s = dual();
  if (s != SolveStatus::kOptimal) return s;
  refresh_basic_values();
  const SolveStatus p = primal();
  refresh_basic_values();
  return polish(p);
}

SolveStatus DenseSimplex::polish(SolveStatus status) {
  if (status != SolveStatus::kOptimal) return status;
  if (max_row_residual() <= kResidualTol) return status;
  if (!reinvert()) return status;
  if (!primal_feasible()) {
    if (!basis_dual_feasible()) return status;
    status = dual();
    if (status != SolveStatus::kOptimal) return status;
  }
  status = primal();
  refresh_basic_values();
  return status;
}

// ---------------------------------------------------------------------------
// SolverSession

std::string to_json(const SolveResult& r) {
  nlohmann::ordered_json j;
  j["status"] = status_name(r.status);
  j["objective"] = r.objective;
  j["x"] = r.x;
  j["pivots"] = r.pivots;
  j["cuts"] = r.cuts;
  j["nodes"] = r.nodes;
  return j.dump() + "\n";
}

SolverSession::SolverSession(Model& model, DenseSimplex::Options options)
    : model_(&model), engine_(options) {
  model_->add_listener(this);
}

SolverSession::~SolverSession() { model_->remove_listener(this); }

void SolverSession::push_row(const ScalarConstraint& c) {
  const AffExpr row = canonicalize(c.body.affine());
  std::vector<int32_t> cols;
  std::vector<double> vals;
  cols.reserve(row.terms().size());
  vals.reserve(row.terms().size());
  for (const AffTerm& t : row.terms()) {
    cols.push_back(static_cast<int32_t>(t.var.index));
    vals.push_back(t.coeff);
  }
  engine_.add_row(cols, vals, c.sense, c.rhs - row.constant());
}

void SolverSession::load() {
  const Model& m = *model_;
  if (!m.objective().is_affine() || m.nl_objective()) {
    throw ModelError("the LP solver needs a linear objective");
  }
  const double s = m.objective_sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  std::vector<double> cost(m.num_vars(), 0.0);
  for (const AffTerm& t : m.objective().affine().terms()) {
    cost[t.var.index] += s * t.coeff;
  }
  engine_.reset(cost, m.lower_bounds(), m.upper_bounds());
  for (const Constraint& c : m.constraints()) {
    const auto* sc = std::get_if<ScalarConstraint>(&c);
    if (sc != nullptr && canonicalize(sc->body).is_affine()) push_row(*sc);
  }
  if (loaded_) ++rebuilds_;
  loaded_ = true;
  dirty_ = false;
}

void SolverSession::on_constraint_added(const Model& model, ConstraintId id) {
  if (!loaded_ || dirty_) return;
  const auto* sc = std::get_if<ScalarConstraint>(&model.constraints()[id.index]);
  if (sc == nullptr || !canonicalize(sc->body).is_affine()) return;
  push_row(*sc);
  ++rows_added_;
}

void SolverSession::on_bounds_changed(const Model& model, VarId v) {
  if (!loaded_ || dirty_) return;
  engine_.set_bounds(static_cast<int32_t>(v.index),
                     model.lower_bounds()[v.index],
                     model.upper_bounds()[v.index]);
}

void SolverSession::on_structure_changed(const Model&) { dirty_ = true; }

SolveResult SolverSession::finish(SolveStatus status) {
  SolveResult r;
  r.status = status;
  r.pivots = engine_.last_pivots();
  total_pivots_ += r.pivots;
  const auto x = engine_.values();
  r.x.assign(x.begin(), x.end());
  const Model& m = *model_;
  r.objective = m.objective().evaluate(r.x);
  return r;
}

SolveResult SolverSession::solve() {
  if (!loaded_ || dirty_) load();
  return finish(engine_.solve());
}

SolveResult SolverSession::cold_solve() {
  if (!loaded_ || dirty_) load();
  return finish(engine_.cold_solve());
}

SolveResult lp_solve(SolverSession& session) { return session.solve(); }

SolveResult resolve_after_row_add(SolverSession& session,
                                  std::span<const ScalarConstraint> rows) {
  for (const ScalarConstraint& c : rows) session.model().add_constraint(c);
  return session.solve();
}

}  // namespace amlkit
