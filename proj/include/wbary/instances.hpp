// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wbary/measures.hpp"
#include "wbary/regularity.hpp"
#include "wbary/rng.hpp"

namespace wbary {

// Seeded generators for the check suites and demos.

// canonical base point: origin / north pole / hyperboloid apex
Point canonical_base(const ModelManifold& m);

// exp from the center along a random tangent with length uniform in
// (0, radius]
Point random_point_ball(const ModelManifold& m, const Point& center,
                        double radius, CounterRng& rng);

DiscreteMeasure random_measure_ball(const ModelManifold& m,
                                    const Point& center, double radius,
                                    int atoms, bool uniform_weights,
                                    CounterRng& rng);

// i.i.d. discretization of an isotropic Gaussian on Euclidean space,
// uniform weights
DiscreteMeasure gaussian_cloud(const ModelManifold& m, const Vec& mean,
                               double sigma, int atoms, CounterRng& rng);

SemiDiscretePotential random_semidiscrete(const ModelManifold& m,
                                          const Point& center, double radius,
                                          int anchors, CounterRng& rng);

// isotropic Gaussian density sampled on a grid (optionally normalized to
// unit Riemann mass)
GridDensity gaussian_grid_density(const std::vector<double>& lo,
                                  const std::vector<double>& hi,
                                  const std::vector<int>& resolution,
                                  const std::vector<double>& mean,
                                  double sigma, bool normalize = true);

}  // namespace wbary
