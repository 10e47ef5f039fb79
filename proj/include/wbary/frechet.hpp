// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "wbary/geometry.hpp"

namespace wbary {

struct FrechetResult {
  Point mean;
  double cost = 0;       // sum_i lambda_i d(mean, x_i)^2
  double grad_norm = 0;  // |sum_i lambda_i log_mean(x_i)|
  int iterations = 0;
  double multistart_spread = 0;  // max pairwise distance among converged runs
};

struct FrechetOptions {
  double tol = 0;  // 0 -> manifold default (1e-10, sphere 1e-9)
  int max_iter = 200;
  std::uint64_t seed = 0;
};

// nonconvergence after max_iter carries the best iterate found
struct FrechetNonConvergence : NonConvergence {
  FrechetNonConvergence(const std::string& what, Point best_, double cost_,
                        double grad_norm_)
      : NonConvergence(what),
        best(std::move(best_)),
        cost(cost_),
        grad_norm(grad_norm_) {}
  Point best;
  double cost;
  double grad_norm;
};

double default_frechet_tol(const ModelManifold& m);

// Riemannian gradient descent on w -> 1/2 sum lambda_i d(w, x_i)^2 with unit
// step and Armijo halving, multistarted from every input point plus 4 seeded
// perturbations; returns the lowest-cost basin.
FrechetResult frechet_mean(const ModelManifold& m,
                           const std::vector<double>& lambda,
                           const std::vector<Point>& xs,
                           const FrechetOptions& opts = {});

// Deterministic barycenter selection: frechet_mean with the fixed multistart
// schedule, cost ties (within 1e-9) broken lexicographically on embedding
// coordinates. Repeated calls with the same inputs are bitwise identical.
Point selection_B(const ModelManifold& m, const std::vector<double>& lambda,
                  const std::vector<Point>& xs);

// true iff every x_i is strictly outside the cut locus of z
bool cut_locus_check(const ModelManifold& m, const std::vector<double>& lambda,
                     const std::vector<Point>& xs, const Point& z);

}  // namespace wbary
