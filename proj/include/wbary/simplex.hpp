// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace wbary {

// Exact solvers for the transportation polytopes used by the optimal
// transport layers. Pivot orders are deterministic: Dantzig pricing with
// lexicographic tie-breaks, falling back to Bland's rule on stalls.

struct PairwiseLpResult {
  Eigen::MatrixXd mass;  // rows x cols, feasible and optimal
  double cost = 0;
};

// min sum_ij cost(i,j) mass(i,j)  s.t. row sums = supply, col sums = demand.
// supply/demand must be nonnegative with equal totals (tolerance 1e-10).
PairwiseLpResult solve_pairwise_lp(const Eigen::VectorXd& supply,
                                   const Eigen::VectorXd& demand,
                                   const Eigen::MatrixXd& cost);

struct TupleLpEntry {
  std::vector<int> index;  // one support index per marginal
  double mass = 0;
};

struct TupleLpResult {
  std::vector<TupleLpEntry> entries;
  double cost = 0;
};

// Flattened product-support transportation LP: one variable per tuple in the
// product of the marginal supports, one equality row per marginal atom.
// tuple_costs is laid out row-major over the product index space.
TupleLpResult solve_tuple_lp(const std::vector<Eigen::VectorXd>& marginals,
                             const std::vector<double>& tuple_costs);

// row-major product index helpers shared with the MMOT layer
std::vector<int> decode_tuple(std::size_t flat, const std::vector<int>& sizes);
std::size_t encode_tuple(const std::vector<int>& index,
                         const std::vector<int>& sizes);

}  // namespace wbary
