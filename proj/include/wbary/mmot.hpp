// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "wbary/frechet.hpp"
#include "wbary/measures.hpp"
#include "wbary/parallel.hpp"

namespace wbary {

struct PlanEntry {
  std::vector<int> index;
  double mass = 0;
  Point minimizer;  // selection map evaluated on this tuple, cached
  double tuple_cost = 0;
};

struct MultiMarginalPlan {
  std::vector<int> marginal_sizes;
  std::vector<PlanEntry> entries;
  double cost = 0;

  // i-th marginal of the entries matches mu_i's weights within 1e-10
  void validate(const std::vector<DiscreteMeasure>& marginals) const;
};

struct BarycostResult {
  double cost = 0;  // sum_i lambda_i d(w*, x_i)^2
  Point minimizer;
};

// Barycentric ground cost: squared Wasserstein distance from the weighted
// Dirac combination to its Fréchet minimizer.
BarycostResult barycost(const ModelManifold& m,
                        const std::vector<double>& lambda,
                        const std::vector<Point>& xs);

// Cost (and cached minimizer) for every tuple in the product support,
// row-major layout; the data-parallel kernel of the MMOT solve.
struct TupleCostTable {
  std::vector<int> sizes;
  std::vector<double> costs;
  std::vector<Point> minimizers;
};

TupleCostTable evaluate_tuple_costs(const ModelManifold& m,
                                    const std::vector<double>& lambda,
                                    const std::vector<DiscreteMeasure>& mus,
                                    Exec mode = Exec::openmp);

// Multi-marginal optimal transport over the product support; product size
// capped (default 200000).
MultiMarginalPlan solve_mmot(const ModelManifold& m, const std::vector<double>& lambda,
                    const std::vector<DiscreteMeasure>& mus,
                    std::size_t cap = 200000, Exec mode = Exec::openmp);

// Brute-force oracle: minimum barycentric cost over permutation couplings.
// Requires uniform weights and equal support sizes s with s <= 5, n <= 3.
double mmot_oracle(const ModelManifold& m, const std::vector<double>& lambda,
                   const std::vector<DiscreteMeasure>& mus);

}  // namespace wbary
