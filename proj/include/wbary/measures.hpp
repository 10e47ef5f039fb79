// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "wbary/geometry.hpp"
#include "wbary/parallel.hpp"

namespace wbary {

// Finitely supported probability measure on a model space.
struct DiscreteMeasure {
  ModelManifold manifold;
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  bool same_content(const DiscreteMeasure& other) const;
};

// Validates invariants (weights >= 0 summing to 1 within 1e-12, points on the
// manifold) and prunes zero-weight atoms.
DiscreteMeasure make_measure(const ModelManifold& m, std::vector<Point> points,
                             std::vector<double> weights);
DiscreteMeasure dirac(const ModelManifold& m, const Point& x);

struct TransportPlan {
  int rows = 0;
  int cols = 0;
  Mat mass;
  double cost = 0;

  // row/column sums match the marginals within 1e-10 and the stored cost
  // matches sum mass * d^2 within 1e-10
  void validate(const ModelManifold& m, const DiscreteMeasure& mu,
                const DiscreteMeasure& nu) const;
};

struct MeasureEnsemble {
  ModelManifold manifold;
  std::vector<DiscreteMeasure> measures;
  std::vector<double> weights;

  std::size_t size() const { return measures.size(); }
};

MeasureEnsemble make_ensemble(const ModelManifold& m,
                              std::vector<DiscreteMeasure> measures,
                              std::vector<double> weights);

// squared pairwise distances d(x_i, y_j)^2
Mat squared_distance_matrix(const ModelManifold& m,
                            const std::vector<Point>& xs,
                            const std::vector<Point>& ys,
                            Exec mode = Exec::openmp);

struct W2Result {
  double cost = 0;  // squared Wasserstein-2 distance
  TransportPlan plan;
};

// Exact W2^2 via the transportation simplex; the returned plan is validated.
W2Result w2(const ModelManifold& m, const DiscreteMeasure& mu,
            const DiscreteMeasure& nu);

// Squared outer Wasserstein distance between ensembles: transportation LP
// whose ground cost is the pairwise w2 cost matrix.
double w2_outer(const MeasureEnsemble& p, const MeasureEnsemble& q,
                Exec mode = Exec::openmp);

double second_moment(const ModelManifold& m, const DiscreteMeasure& mu,
                     const Point& x0);

// j i.i.d. draws from the ensemble's weights, uniform 1/j weights,
// deterministic given the seed.
MeasureEnsemble empirical_sample(const MeasureEnsemble& p, int j,
                                 std::uint64_t seed);

}  // namespace wbary
