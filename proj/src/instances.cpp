// SPDX-License-Identifier: Apache-2.0
#include "wbary/instances.hpp"

#include <cmath>

namespace wbary {

Point canonical_base(const ModelManifold& m) {
  Vec x = Vec::Zero(m.embed_dim());
  if (m.kind() != ManifoldKind::Euclidean) x[0] = 1.0;
  return Point{x};
}

Point random_point_ball(const ModelManifold& m, const Point& center,
                        double radius, CounterRng& rng) {
  Mat frame = m.tangent_frame(center);
  Vec c(m.dim());
  for (int k = 0; k < m.dim(); ++k) c[k] = rng.normal();
  double n = c.norm();
  if (n < 1e-12) return center;
  double r = radius * std::pow(rng.uniform(), 1.0 / m.dim());
  return m.exp_map(center, m.from_frame(frame, c * (r / n)));
}

DiscreteMeasure random_measure_ball(const ModelManifold& m,
                                    const Point& center, double radius,
                                    int atoms, bool uniform_weights,
                                    CounterRng& rng) {
  std::vector<Point> pts(atoms);
  for (auto& p : pts) p = random_point_ball(m, center, radius, rng);
  std::vector<double> w =
      uniform_weights ? std::vector<double>(atoms, 1.0 / atoms)
                      : rng.simplex_weights(atoms);
  return make_measure(m, std::move(pts), std::move(w));
}

DiscreteMeasure gaussian_cloud(const ModelManifold& m, const Vec& mean,
                               double sigma, int atoms, CounterRng& rng) {
  if (m.kind() != ManifoldKind::Euclidean)
    throw ConstraintViolation("gaussian_cloud: Euclidean-only");
  std::vector<Point> pts(atoms);
  for (auto& p : pts) {
    Vec x(m.dim());
    for (int k = 0; k < m.dim(); ++k) x[k] = mean[k] + sigma * rng.normal();
    p = Point{std::move(x)};
  }
  return make_measure(m, std::move(pts),
                      std::vector<double>(atoms, 1.0 / atoms));
}

SemiDiscretePotential random_semidiscrete(const ModelManifold& m,
                                          const Point& center, double radius,
                                          int anchors, CounterRng& rng) {
  // keep lambda_1 away from 0: the map stretches like 1/lambda_1 and the
  // image must stay in the numerically valid range
  double lambda1 = 0.25 + 0.5 * rng.uniform();
  std::vector<double> aw = rng.simplex_weights(anchors);
  for (double& w : aw) w *= 1.0 - lambda1;
  std::vector<Point> xs(anchors);
  for (auto& x : xs) x = random_point_ball(m, center, radius, rng);
  return make_semi_discrete(m, lambda1, std::move(aw), std::move(xs));
}

GridDensity gaussian_grid_density(const std::vector<double>& lo,
                                  const std::vector<double>& hi,
                                  const std::vector<int>& resolution,
                                  const std::vector<double>& mean,
                                  double sigma, bool normalize) {
  const double two_pi = 6.283185307179586476925286766559;
  const int d = int(lo.size());
  double norm_const = std::pow(two_pi * sigma * sigma, -0.5 * d);
  return discretize_on_grid(
      lo, hi, resolution,
      [&](const std::vector<double>& x) {
        double q = 0;
        for (int a = 0; a < d; ++a) {
          double t = x[a] - mean[a];
          q += t * t;
        }
        return norm_const * std::exp(-0.5 * q / (sigma * sigma));
      },
      normalize);
}

}  // namespace wbary
