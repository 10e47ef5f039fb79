// SPDX-License-Identifier: Apache-2.0
#include "wbary/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "wbary/geometry.hpp"

namespace wbary {

namespace {

constexpr double kFeasTol = 1e-10;
constexpr double kPivotTol = 1e-11;

}  // namespace

// ---------------------------------------------------------------------------
// pairwise transportation simplex (tree-structured basis, u/v duals)
// ---------------------------------------------------------------------------

namespace {

struct TransportTableau {
  int s1, s2;
  Eigen::MatrixXd mass;
  std::vector<std::vector<int>> row_basis;  // row i -> basic cols
  std::vector<std::vector<int>> col_basis;  // col j -> basic rows

  bool is_basic(int i, int j) const {
    for (int c : row_basis[i])
      if (c == j) return true;
    return false;
  }
  void add(int i, int j) {
    row_basis[i].push_back(j);
    col_basis[j].push_back(i);
  }
  void remove(int i, int j) {
    auto& r = row_basis[i];
    r.erase(std::find(r.begin(), r.end(), j));
    auto& c = col_basis[j];
    c.erase(std::find(c.begin(), c.end(), i));
  }
};

// northwest-corner start: exactly s1+s2-1 basic cells, degenerate zeros kept
void northwest_corner(const Eigen::VectorXd& supply,
                      const Eigen::VectorXd& demand, TransportTableau& t) {
  Eigen::VectorXd a = supply, b = demand;
  int i = 0, j = 0;
  while (i < t.s1 && j < t.s2) {
    double m = std::min(a[i], b[j]);
    t.mass(i, j) = m;
    t.add(i, j);
    a[i] -= m;
    b[j] -= m;
    bool row_done = a[i] <= kFeasTol;
    bool col_done = b[j] <= kFeasTol;
    if (row_done && col_done) {
      // advance one side only so the basis stays a spanning tree
      if (i + 1 < t.s1)
        ++i;
      else
        ++j;
    } else if (row_done) {
      ++i;
    } else {
      ++j;
    }
  }
}

// duals from the basis tree: u[0] = 0, u_i + v_j = c_ij on basic cells
void solve_duals(const TransportTableau& t, const Eigen::MatrixXd& cost,
                 Eigen::VectorXd& u, Eigen::VectorXd& v) {
  std::vector<char> row_done(t.s1, 0), col_done(t.s2, 0);
  std::vector<int> stack;
  u[0] = 0;
  row_done[0] = 1;
  stack.push_back(0);  // rows encoded as i, cols as s1 + j
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    if (node < t.s1) {
      for (int j : t.row_basis[node])
        if (!col_done[j]) {
          v[j] = cost(node, j) - u[node];
          col_done[j] = 1;
          stack.push_back(t.s1 + j);
        }
    } else {
      int j = node - t.s1;
      for (int i : t.col_basis[j])
        if (!row_done[i]) {
          u[i] = cost(i, j) - v[j];
          row_done[i] = 1;
          stack.push_back(i);
        }
    }
  }
}

// alternating cycle created by adding cell (ei, ej) to the basis tree:
// path from column ej back to row ei, found by DFS over the tree
bool find_cycle(const TransportTableau& t, int ei, int ej,
                std::vector<std::pair<int, int>>& cycle) {
  int total = t.s1 + t.s2;
  std::vector<int> parent(total, -2);
  std::vector<int> stack;
  parent[ei] = -1;
  stack.push_back(ei);
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    if (node < t.s1) {
      for (int j : t.row_basis[node]) {
        if (node == ei && j == ej) continue;
        if (parent[t.s1 + j] == -2) {
          parent[t.s1 + j] = node;
          stack.push_back(t.s1 + j);
        }
      }
    } else {
      for (int i : t.col_basis[node - t.s1]) {
        if (parent[i] == -2) {
          parent[i] = node;
          stack.push_back(i);
        }
      }
    }
  }
  if (parent[t.s1 + ej] == -2) return false;
  // walk back: cells alternate (row, col) along the path
  cycle.clear();
  cycle.emplace_back(ei, ej);
  int node = t.s1 + ej;
  while (parent[node] != -1) {
    int p = parent[node];
    if (node >= t.s1)
      cycle.emplace_back(p, node - t.s1);
    else
      cycle.emplace_back(node, p - t.s1);
    node = p;
  }
  return true;
}

}  // namespace

PairwiseLpResult solve_pairwise_lp(const Eigen::VectorXd& supply,
                                   const Eigen::VectorXd& demand,
                                   const Eigen::MatrixXd& cost) {
  const int s1 = int(supply.size()), s2 = int(demand.size());
  if (s1 < 1 || s2 < 1) throw SizeError("transport LP: empty marginal");
  if (cost.rows() != s1 || cost.cols() != s2)
    throw SizeError("transport LP: cost shape mismatch");
  if (supply.minCoeff() < -kFeasTol || demand.minCoeff() < -kFeasTol ||
      std::abs(supply.sum() - demand.sum()) > kFeasTol)
    throw ConstraintViolation("transport LP: malformed marginal weights");

  TransportTableau t{s1, s2, Eigen::MatrixXd::Zero(s1, s2),
                     std::vector<std::vector<int>>(s1),
                     std::vector<std::vector<int>>(s2)};
  northwest_corner(supply, demand, t);

  Eigen::VectorXd u(s1), v(s2);
  const double scale = 1.0 + cost.cwiseAbs().maxCoeff();
  const double rc_tol = kPivotTol * scale;
  bool bland = false;
  int degenerate_streak = 0;
  const long max_iter = 2000L + 40L * long(s1 + s2) * long(s1 + s2);

  for (long iter = 0; iter < max_iter; ++iter) {
    solve_duals(t, cost, u, v);
    int ei = -1, ej = -1;
    double best = -rc_tol;
    for (int i = 0; i < s1 && (!bland || ei < 0); ++i) {
      for (int j = 0; j < s2; ++j) {
        double rc = cost(i, j) - u[i] - v[j];
        if (rc < best) {
          best = rc;
          ei = i;
          ej = j;
          if (bland) break;
        }
      }
    }
    if (ei < 0) break;  // optimal

    std::vector<std::pair<int, int>> cycle;
    if (!find_cycle(t, ei, ej, cycle))
      throw Error("transport LP: basis lost tree structure");
    // odd positions along the cycle lose mass
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = 1;
    for (std::size_t k = 1; k < cycle.size(); k += 2) {
      double m = t.mass(cycle[k].first, cycle[k].second);
      if (m < theta - 1e-15) {
        theta = m;
        leave = k;
      }
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      t.mass(cycle[k].first, cycle[k].second) += sgn * theta;
    }
    t.add(ei, ej);
    t.remove(cycle[leave].first, cycle[leave].second);
    t.mass(cycle[leave].first, cycle[leave].second) = 0;

    if (theta <= 1e-15) {
      if (++degenerate_streak > 2 * (s1 + s2)) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }
  }

  PairwiseLpResult out;
  out.mass = t.mass.cwiseMax(0.0);
  out.cost = (out.mass.array() * cost.array()).sum();
  return out;
}

// ---------------------------------------------------------------------------
// flattened multi-marginal LP (two-phase revised simplex, explicit inverse)
// ---------------------------------------------------------------------------

std::vector<int> decode_tuple(std::size_t flat, const std::vector<int>& sizes) {
  std::vector<int> idx(sizes.size());
  for (int i = int(sizes.size()) - 1; i >= 0; --i) {
    idx[i] = int(flat % sizes[i]);
    flat /= sizes[i];
  }
  return idx;
}

std::size_t encode_tuple(const std::vector<int>& index,
                         const std::vector<int>& sizes) {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    flat = flat * sizes[i] + index[i];
  return flat;
}

namespace {

class TupleSimplex {
 public:
  TupleSimplex(const std::vector<Eigen::VectorXd>& marginals,
               const std::vector<double>& costs)
      : costs_(costs) {
    n_ = int(marginals.size());
    sizes_.resize(n_);
    offsets_.resize(n_);
    m_ = 0;
    for (int i = 0; i < n_; ++i) {
      sizes_[i] = int(marginals[i].size());
      offsets_[i] = m_;
      m_ += sizes_[i];
    }
    ncols_ = 1;
    for (int s : sizes_) ncols_ *= std::size_t(s);
    b_.resize(m_);
    for (int i = 0; i < n_; ++i)
      b_.segment(offsets_[i], sizes_[i]) = marginals[i];

    basis_.resize(m_);
    x_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      basis_[r] = long(ncols_) + r;  // artificial
      x_[r] = b_[r];
    }
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
  }

  TupleLpResult solve() {
    run_phase(/*phase1=*/true);
    double infeas = 0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= long(ncols_)) infeas += std::max(x_[r], 0.0);
    if (infeas > 1e-8)
      throw ConstraintViolation("tuple LP: marginals are inconsistent");
    run_phase(/*phase1=*/false);

    TupleLpResult out;
    out.cost = 0;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] >= long(ncols_) || x_[r] <= 1e-12) continue;
      TupleLpEntry e;
      e.index = decode_tuple(std::size_t(basis_[r]), sizes_);
      e.mass = x_[r];
      out.cost += e.mass * costs_[std::size_t(basis_[r])];
      out.entries.push_back(std::move(e));
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const TupleLpEntry& a, const TupleLpEntry& b) {
                return a.index < b.index;
              });
    return out;
  }

 private:
  double col_cost(long j, bool phase1) const {
    if (phase1) return j >= long(ncols_) ? 1.0 : 0.0;
    return j >= long(ncols_) ? 0.0 : costs_[std::size_t(j)];
  }

  // B^-1 a_j for a tuple column (sum of n unit rows)
  Eigen::VectorXd direction(long j) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m_);
    if (j >= long(ncols_)) {
      d = binv_.col(j - long(ncols_));
      return d;
    }
    std::vector<int> idx = decode_tuple(std::size_t(j), sizes_);
    for (int i = 0; i < n_; ++i) d += binv_.col(offsets_[i] + idx[i]);
    return d;
  }

  void refactor() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
    for (int r = 0; r < m_; ++r) {
      long j = basis_[r];
      if (j >= long(ncols_)) {
        B(int(j - long(ncols_)), r) = 1.0;
      } else {
        std::vector<int> idx = decode_tuple(std::size_t(j), sizes_);
        for (int i = 0; i < n_; ++i) B(offsets_[i] + idx[i], r) = 1.0;
      }
    }
    binv_ = B.fullPivLu().inverse();
  }

  void run_phase(bool phase1) {
    const double cost_scale =
        phase1 ? 1.0
               : 1.0 + std::abs(*std::max_element(
                           costs_.begin(), costs_.end(),
                           [](double a, double b) {
                             return std::abs(a) < std::abs(b);
                           }));
    const double rc_tol = kPivotTol * cost_scale;
    bool bland = false;
    int degenerate_streak = 0;
    int pivots_since_refactor = 0;
    const long max_iter = 2000L + 200L * long(m_) * long(m_);

    for (long iter = 0; iter < max_iter; ++iter) {
      Eigen::VectorXd cb(m_);
      for (int r = 0; r < m_; ++r) cb[r] = col_cost(basis_[r], phase1);
      Eigen::VectorXd y = binv_.transpose() * cb;

      // price all tuple columns; a_j is the sum of n unit rows
      long enter = -1;
      double best = -rc_tol;
      std::vector<int> idx(n_, 0);
      for (std::size_t j = 0; j < ncols_; ++j) {
        double ya = 0;
        for (int i = 0; i < n_; ++i) ya += y[offsets_[i] + idx[i]];
        double rc = col_cost(long(j), phase1) - ya;
        if (rc < best) {
          best = rc;
          enter = long(j);
          if (bland) break;
        }
        for (int i = n_ - 1; i >= 0; --i) {
          if (++idx[i] < sizes_[i]) break;
          idx[i] = 0;
        }
      }
      if (enter < 0) return;  // phase optimal

      Eigen::VectorXd d = direction(enter);
      double theta = std::numeric_limits<double>::infinity();
      int leave = -1;
      for (int r = 0; r < m_; ++r) {
        if (d[r] > kPivotTol) {
          double ratio = std::max(x_[r], 0.0) / d[r];
          if (ratio < theta - 1e-13) {
            theta = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0)
        throw Error("tuple LP: unbounded direction on a bounded polytope");

      x_ -= theta * d;
      x_[leave] = theta;
      basis_[leave] = enter;
      // eta update of the explicit inverse
      double piv = d[leave];
      binv_.row(leave) /= piv;
      for (int r = 0; r < m_; ++r) {
        if (r == leave) continue;
        double f = d[r];
        if (f != 0.0) binv_.row(r) -= f * binv_.row(leave);
      }
      if (++pivots_since_refactor >= 64) {
        refactor();
        Eigen::VectorXd xb = binv_ * b_;
        x_ = xb;
        pivots_since_refactor = 0;
      }
      if (theta <= 1e-13) {
        if (++degenerate_streak > 2 * m_ + 50) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
    }
    throw NonConvergence("tuple LP: iteration limit reached");
  }

  int n_ = 0;
  int m_ = 0;
  std::size_t ncols_ = 0;
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  std::vector<double> costs_;
  Eigen::VectorXd b_;
  std::vector<long> basis_;
  Eigen::VectorXd x_;
  Eigen::MatrixXd binv_;
};

}  // namespace

TupleLpResult solve_tuple_lp(const std::vector<Eigen::VectorXd>& marginals,
                             const std::vector<double>& tuple_costs) {
  if (marginals.size() < 2) throw SizeError("tuple LP: needs >= 2 marginals");
  std::size_t prod = 1;
  double total0 = marginals[0].sum();
  for (const auto& w : marginals) {
    if (w.size() < 1) throw SizeError("tuple LP: empty marginal");
    if (w.minCoeff() < -kFeasTol || std::abs(w.sum() - total0) > 1e-9)
      throw ConstraintViolation("tuple LP: malformed marginal weights");
    prod *= std::size_t(w.size());
  }
  if (tuple_costs.size() != prod)
    throw SizeError("tuple LP: cost tensor size mismatch");
  return TupleSimplex(marginals, tuple_costs).solve();
}

}  // namespace wbary
