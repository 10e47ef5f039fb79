// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles used by the tests: finite differences for Hessians and
// map differentials, permutation brute force for transport optima, and
// feasibility-rounded random couplings. These deliberately avoid the code
// paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "wbary/geometry.hpp"
#include "wbary/measures.hpp"
#include "wbary/rng.hpp"

namespace oracles {

using wbary::Mat;
using wbary::ModelManifold;
using wbary::Point;
using wbary::Vec;

// Hessian of v -> d(exp_x(v), y)^2 / 2 at v = 0 in the tangent frame,
// second-order central differences
inline Mat fd_hess_half_dist_sq(const ModelManifold& m, const Point& x,
                                const Point& y, double h = 1e-4) {
  Mat frame = m.tangent_frame(x);
  auto g = [&](const Vec& coords) {
    double d = m.dist(m.exp_map(x, m.from_frame(frame, coords)), y);
    return 0.5 * d * d;
  };
  const int n = m.dim();
  Mat hess(n, n);
  double g0 = g(Vec::Zero(n));
  for (int a = 0; a < n; ++a) {
    Vec ea = Vec::Unit(n, a) * h;
    hess(a, a) = (g(ea) - 2.0 * g0 + g(-ea)) / (h * h);
    for (int b = a + 1; b < n; ++b) {
      Vec eb = Vec::Unit(n, b) * h;
      double v = (g(ea + eb) - g(ea - eb) - g(-ea + eb) + g(-ea - eb)) /
                 (4.0 * h * h);
      hess(a, b) = hess(b, a) = v;
    }
  }
  return hess;
}

// directional derivative of a map F: M -> M by central differences,
// returned as an ambient vector tangent at F(x)
template <class MapFn>
Vec fd_map_differential(const ModelManifold& m, const MapFn& f, const Point& x,
                        const Vec& w, double h = 1e-5) {
  Point xp = m.exp_map(x, h * w);
  Point xm = m.exp_map(x, -h * w);
  Point y = f(x);
  Vec lp = m.log_map(y, f(xp));
  Vec lm = m.log_map(y, f(xm));
  return (lp - lm) / (2.0 * h);
}

// minimum transport cost over all permutation couplings of two uniform
// equal-size marginals
inline double birkhoff_bruteforce(const Mat& sq_dist) {
  const int s = int(sq_dist.rows());
  std::vector<int> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0;
    for (int i = 0; i < s; ++i) c += sq_dist(i, perm[i]);
    best = std::min(best, c / double(s));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// random feasible coupling: random positive tensor, a few multiplicative
// marginal-scaling sweeps, then an additive rank-one correction to exact
// feasibility
inline std::vector<double> random_feasible_coupling(
    const std::vector<Eigen::VectorXd>& marginals, wbary::CounterRng& rng) {
  std::vector<int> sizes;
  std::size_t prod = 1;
  for (const auto& w : marginals) {
    sizes.push_back(int(w.size()));
    prod *= w.size();
  }
  const int n = int(marginals.size());
  std::vector<double> t(prod);
  for (auto& v : t) v = std::exp(1.5 * rng.normal());

  auto marginal_sums = [&](int axis) {
    std::vector<double> sums(sizes[axis], 0.0);
    for (std::size_t flat = 0; flat < prod; ++flat) {
      std::size_t rest = flat;
      int idx = 0;
      for (int i = n - 1; i >= 0; --i) {
        int k = int(rest % sizes[i]);
        rest /= sizes[i];
        if (i == axis) idx = k;
      }
      sums[idx] += t[flat];
    }
    return sums;
  };

  for (int sweep = 0; sweep < 12; ++sweep) {
    for (int axis = 0; axis < n; ++axis) {
      std::vector<double> sums = marginal_sums(axis);
      for (std::size_t flat = 0; flat < prod; ++flat) {
        std::size_t rest = flat;
        int idx = 0;
        for (int i = n - 1; i >= 0; --i) {
          int k = int(rest % sizes[i]);
          rest /= sizes[i];
          if (i == axis) idx = k;
        }
        t[flat] *= marginals[axis][idx] / sums[idx];
      }
    }
  }
  // scale under the marginals, then fill the deficit with a product measure
  double shrink = 1.0;
  for (int axis = 0; axis < n; ++axis) {
    std::vector<double> sums = marginal_sums(axis);
    for (int k = 0; k < sizes[axis]; ++k)
      if (sums[k] > 0)
        shrink = std::min(shrink, marginals[axis][k] / sums[k]);
  }
  for (auto& v : t) v *= shrink;
  std::vector<std::vector<double>> deficit(n);
  double total_deficit = 0;
  for (int axis = 0; axis < n; ++axis) {
    std::vector<double> sums = marginal_sums(axis);
    deficit[axis].resize(sizes[axis]);
    double d = 0;
    for (int k = 0; k < sizes[axis]; ++k) {
      deficit[axis][k] = std::max(marginals[axis][k] - sums[k], 0.0);
      d += deficit[axis][k];
    }
    total_deficit = d;  // equal across axes up to roundoff
  }
  if (total_deficit > 1e-15) {
    for (std::size_t flat = 0; flat < prod; ++flat) {
      std::size_t rest = flat;
      double add = 1.0;
      for (int i = n - 1; i >= 0; --i) {
        int k = int(rest % sizes[i]);
        rest /= sizes[i];
        add *= deficit[i][k];
      }
      t[flat] += add / std::pow(total_deficit, n - 1);
    }
  }
  return t;
}

}  // namespace oracles
