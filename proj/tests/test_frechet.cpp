// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "wbary/frechet.hpp"
#include "wbary/instances.hpp"

using namespace wbary;

namespace {
Point ptv(std::initializer_list<double> c) {
  Vec v(long(c.size()));
  long i = 0;
  for (double x : c) v[i++] = x;
  return Point{v};
}
}  // namespace

TEST_CASE("euclidean mean is the weighted average") {
  ModelManifold m(ManifoldKind::Euclidean, 3);
  CounterRng rng(2, 0);
  std::vector<double> lambda = rng.simplex_weights(4);
  std::vector<Point> xs(4);
  Vec mean = Vec::Zero(3);
  for (int i = 0; i < 4; ++i) {
    xs[i] = ptv({rng.normal(), rng.normal(), rng.normal()});
    mean += lambda[i] * xs[i].coords;
  }
  FrechetResult r = frechet_mean(m, lambda, xs);
  CHECK((r.mean.coords - mean).norm() < 1e-12);
  CHECK(r.grad_norm <= 1e-10);
}

TEST_CASE("sphere midpoint of two points") {
  ModelManifold s2(ManifoldKind::Sphere, 2);
  Point a = ptv({1, 0, 0});
  Point b = ptv({0, 1, 0});
  FrechetResult r = frechet_mean(s2, {0.5, 0.5}, {a, b});
  double d = s2.dist(a, b);
  CHECK(s2.dist(r.mean, a) == doctest::Approx(d / 2).epsilon(1e-8));
  CHECK(s2.dist(r.mean, b) == doctest::Approx(d / 2).epsilon(1e-8));
}

TEST_CASE("hyperbolic rotational orbit has its mean at the fixed point") {
  ModelManifold h2(ManifoldKind::Hyperbolic, 2);
  Point center = canonical_base(h2);
  double r = 0.8;
  std::vector<Point> orbit;
  for (int k = 0; k < 3; ++k) {
    double a = 2.0 * 3.14159265358979323846 * k / 3.0;
    Vec v(3);
    v << 0.0, r * std::cos(a), r * std::sin(a);
    orbit.push_back(h2.exp_map(center, v));
  }
  FrechetResult res = frechet_mean(h2, {1.0 / 3, 1.0 / 3, 1.0 / 3}, orbit);
  CHECK(h2.dist(res.mean, center) < 1e-8);
}

TEST_CASE("mean beats every support point and iterates descend") {
  for (auto kind : {ManifoldKind::Euclidean, ManifoldKind::Sphere,
                    ManifoldKind::Hyperbolic}) {
    ModelManifold m(kind, 2);
    CAPTURE(m.name());
    CounterRng rng(6, 1);
    Point base = canonical_base(m);
    for (int t = 0; t < 10; ++t) {
      int n = 2 + int(rng.below(4));
      std::vector<double> lambda = rng.simplex_weights(n);
      std::vector<Point> xs(n);
      for (auto& x : xs) x = random_point_ball(m, base, 0.7, rng);
      FrechetResult r = frechet_mean(m, lambda, xs);
      CHECK(r.grad_norm <= default_frechet_tol(m));
      for (int j = 0; j < n; ++j) {
        double cost_at_support = 0;
        for (int i = 0; i < n; ++i) {
          double d = m.dist(xs[j], xs[i]);
          cost_at_support += lambda[i] * d * d;
        }
        CHECK(r.cost <= cost_at_support + 1e-12);
      }
      // second-order optimality: weighted Hessian combination is PSD
      Mat h = Mat::Zero(m.dim(), m.dim());
      for (int i = 0; i < n; ++i)
        h += lambda[i] * m.hess_half_dist_sq(r.mean, xs[i]).matrix;
      Eigen::SelfAdjointEigenSolver<Mat> es(h);
      CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    }
  }
}

TEST_CASE("selection map is deterministic and handles n = 1") {
  ModelManifold s2(ManifoldKind::Sphere, 2);
  CounterRng rng(8, 2);
  Point base = canonical_base(s2);
  Point solo = random_point_ball(s2, base, 1.0, rng);
  Point out = selection_B(s2, {1.0}, {solo});
  CHECK(out.coords == solo.coords);

  std::vector<Point> xs;
  for (int i = 0; i < 4; ++i) xs.push_back(random_point_ball(s2, base, 0.6, rng));
  std::vector<double> lambda{0.25, 0.25, 0.25, 0.25};
  Point b1 = selection_B(s2, lambda, xs);
  Point b2 = selection_B(s2, lambda, xs);
  CHECK(b1.coords == b2.coords);  // bitwise
}

TEST_CASE("hemisphere clusters give a unique basin") {
  ModelManifold s2(ManifoldKind::Sphere, 2);
  CounterRng rng(10, 3);
  Point base = canonical_base(s2);
  for (int t = 0; t < 5; ++t) {
    std::vector<Point> xs;
    for (int i = 0; i < 5; ++i)
      xs.push_back(random_point_ball(s2, base, 0.7, rng));
    std::vector<double> lambda(5, 0.2);
    FrechetResult r = frechet_mean(s2, lambda, xs);
    CHECK(r.multistart_spread <= 1e-7);
    Point b = selection_B(s2, lambda, xs);
    CHECK(s2.dist(b, r.mean) <= 1e-9);
  }
}

TEST_CASE("cut locus check") {
  ModelManifold e2(ManifoldKind::Euclidean, 2);
  CounterRng rng(12, 4);
  Point base = canonical_base(e2);
  std::vector<Point> xs{random_point_ball(e2, base, 1.0, rng),
                        random_point_ball(e2, base, 1.0, rng)};
  CHECK(cut_locus_check(e2, {0.5, 0.5}, xs, base));

  ModelManifold s2(ManifoldKind::Sphere, 2);
  Point north = canonical_base(s2);
  Point south{-north.coords};
  Point east = ptv({0, 1, 0});
  CHECK(cut_locus_check(s2, {0.5, 0.5}, {north, east}, east));
  CHECK_FALSE(cut_locus_check(s2, {0.5, 0.5}, {north, south}, north));

  // barycenters of sampled configurations stay away from every cut locus
  CounterRng rng2(14, 5);
  for (int t = 0; t < 20; ++t) {
    std::vector<Point> cfg;
    for (int i = 0; i < 3; ++i)
      cfg.push_back(random_point_ball(s2, north, 1.0, rng2));
    std::vector<double> lambda{1.0 / 3, 1.0 / 3, 1.0 / 3};
    Point b = selection_B(s2, lambda, cfg);
    CHECK(cut_locus_check(s2, lambda, cfg, b));
  }
}

TEST_CASE("nonconvergence carries the best iterate") {
  ModelManifold m(ManifoldKind::Euclidean, 2);
  CounterRng rng(16, 6);
  Point base = canonical_base(m);
  std::vector<Point> xs{random_point_ball(m, base, 1.0, rng),
                        random_point_ball(m, base, 1.0, rng)};
  FrechetOptions opts;
  opts.tol = 1e-30;  // unreachable
  opts.max_iter = 3;
  try {
    frechet_mean(m, {0.5, 0.5}, xs, opts);
    FAIL("expected nonconvergence");
  } catch (const FrechetNonConvergence& e) {
    // the carried iterate is already at the minimizer, just above tol
    Vec mean = 0.5 * (xs[0].coords + xs[1].coords);
    CHECK((e.best.coords - mean).norm() < 1e-10);
    CHECK(e.grad_norm > opts.tol);
  }
}
