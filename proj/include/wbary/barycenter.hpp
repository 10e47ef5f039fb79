// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "wbary/mmot.hpp"

namespace wbary {

struct BarycenterResult {
  DiscreteMeasure barycenter;
  MultiMarginalPlan plan;
  std::vector<TransportPlan> induced_plans;  // (B, p_i)#gamma, one per marginal
  double functional_value = 0;               // sum_i lambda_i W2^2(bary, mu_i)
  double max_pointwise_residual = 0;  // first-order residual over output atoms
};

// Barycenter of a finitely supported ensemble: multi-marginal plan, tuple-wise
// selection map, coincident outputs (distance <= 1e-9) merged. The induced
// plans are validated against independently solved pairwise transports.
BarycenterResult wasserstein_barycenter(const MeasureEnsemble& p,
                                        std::size_t cap = 200000,
                                        Exec mode = Exec::openmp);

struct OptimalityReport {
  double candidate_value = 0;
  double min_competitor_gap = 0;  // min over trials of V(competitor) - V(cand)
  int trials = 0;
};

// Evaluates V(nu) = sum_i lambda_i W2^2(nu, mu_i) at the candidate and at
// seeded jittered competitors (atom jitter + weight jitter).
OptimalityReport verify_optimality(const MeasureEnsemble& p,
                                   const DiscreteMeasure& candidate, int trials,
                                   std::uint64_t seed);

struct LlnRow {
  int j = 0;
  std::uint64_t seed = 0;
  double ensemble_dist = 0;    // outer Wasserstein distance of P_j to P
  double barycenter_dist = 0;  // W2 distance of bary(P_j) to bary(P)
};

// Law-of-large-numbers harness: for each j, sample an empirical ensemble,
// compute its barycenter and record both distances.
std::vector<LlnRow> lln_run(const MeasureEnsemble& p,
                            const std::vector<int>& sizes, std::uint64_t seed,
                            std::size_t cap = 200000,
                            Exec mode = Exec::openmp);

}  // namespace wbary
