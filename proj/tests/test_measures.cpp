// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wbary/instances.hpp"
#include "wbary/measures.hpp"

using namespace wbary;

namespace {
Point pt1(double x) {
  Vec v(1);
  v[0] = x;
  return Point{v};
}
}  // namespace

TEST_CASE("measure validation prunes zero atoms and rejects bad weights") {
  ModelManifold m(ManifoldKind::Euclidean, 1);
  DiscreteMeasure mu = make_measure(m, {pt1(0), pt1(1), pt1(2)},
                                    {0.5, 0.0, 0.5});
  CHECK(mu.size() == 2);
  CHECK_THROWS_AS(make_measure(m, {pt1(0)}, {0.9}), ConstraintViolation);
  CHECK_THROWS_AS(make_measure(m, {pt1(0), pt1(1)}, {1.5, -0.5}),
                  ConstraintViolation);
}

TEST_CASE("w2 on Diracs and identical measures") {
  for (auto kind : {ManifoldKind::Euclidean, ManifoldKind::Sphere,
                    ManifoldKind::Hyperbolic}) {
    ModelManifold m(kind, 2);
    CounterRng rng(3, 0);
    Point base = canonical_base(m);
    Point x = random_point_ball(m, base, 1.0, rng);
    Point y = random_point_ball(m, base, 1.0, rng);
    W2Result r = w2(m, dirac(m, x), dirac(m, y));
    double d = m.dist(x, y);
    CHECK(r.cost == doctest::Approx(d * d).epsilon(1e-12));
    CHECK(r.plan.mass(0, 0) == doctest::Approx(1.0));

    DiscreteMeasure mu = random_measure_ball(m, base, 1.0, 5, false, rng);
    CHECK(w2(m, mu, mu).cost == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("w2 two-atom line example") {
  ModelManifold m(ManifoldKind::Euclidean, 1);
  DiscreteMeasure mu = make_measure(m, {pt1(0), pt1(1)}, {0.5, 0.5});
  DiscreteMeasure nu = make_measure(m, {pt1(2), pt1(3)}, {0.5, 0.5});
  // brute force over the two permutation couplings: 0.5(4+4) = 4
  CHECK(w2(m, mu, nu).cost == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("antipodal support pairs carry cost pi^2 without error") {
  ModelManifold s2(ManifoldKind::Sphere, 2);
  Vec a(3), b(3);
  a << 1, 0, 0;
  b << -1, 0, 0;
  W2Result r = w2(s2, dirac(s2, Point{a}), dirac(s2, Point{b}));
  const double pi = 3.14159265358979323846;
  CHECK(r.cost == doctest::Approx(pi * pi).epsilon(1e-12));
}

TEST_CASE("w2 equals the permutation brute force on uniform marginals") {
  for (auto kind : {ManifoldKind::Euclidean, ManifoldKind::Sphere,
                    ManifoldKind::Hyperbolic}) {
    ModelManifold m(kind, 2);
    CAPTURE(m.name());
    CounterRng rng(17, 1);
    Point base = canonical_base(m);
    for (int t = 0; t < 20; ++t) {
      int s = 2 + int(rng.below(5));  // up to 6 atoms
      DiscreteMeasure mu = random_measure_ball(m, base, 1.0, s, true, rng);
      DiscreteMeasure nu = random_measure_ball(m, base, 1.0, s, true, rng);
      double lp = w2(m, mu, nu).cost;
      double brute = oracles::birkhoff_bruteforce(
          squared_distance_matrix(m, mu.points, nu.points, Exec::serial));
      CHECK(lp == doctest::Approx(brute).epsilon(1e-11));
    }
  }
}

TEST_CASE("w2 metric properties on random triples") {
  for (auto kind : {ManifoldKind::Euclidean, ManifoldKind::Sphere,
                    ManifoldKind::Hyperbolic}) {
    ModelManifold m(kind, 2);
    CAPTURE(m.name());
    CounterRng rng(29 + std::uint64_t(kind), 2);
    Point base = canonical_base(m);
    for (int t = 0; t < 100; ++t) {
      DiscreteMeasure a = random_measure_ball(m, base, 1.2, 3, false, rng);
      DiscreteMeasure b = random_measure_ball(m, base, 1.2, 4, false, rng);
      DiscreteMeasure c = random_measure_ball(m, base, 1.2, 3, false, rng);
      double ab = w2(m, a, b).cost, ba = w2(m, b, a).cost;
      CHECK(std::abs(ab - ba) < 1e-10);
      double ac = std::sqrt(w2(m, a, c).cost);
      CHECK(ac <= std::sqrt(ab) + std::sqrt(w2(m, b, c).cost) + 1e-8);
    }
  }
}

TEST_CASE("second moment agrees with transport to a Dirac") {
  ModelManifold m(ManifoldKind::Euclidean, 1);
  DiscreteMeasure mu = make_measure(m, {pt1(0), pt1(2)}, {0.5, 0.5});
  CHECK(second_moment(m, mu, pt1(1)) == doctest::Approx(1.0));
  CHECK(second_moment(m, dirac(m, pt1(3)), pt1(3)) == doctest::Approx(0.0));
  CHECK(second_moment(m, mu, pt1(0.3)) ==
        doctest::Approx(w2(m, mu, dirac(m, pt1(0.3))).cost).epsilon(1e-12));
}

TEST_CASE("w2_outer forced couplings") {
  ModelManifold m(ManifoldKind::Euclidean, 2);
  CounterRng rng(31, 3);
  Point base = canonical_base(m);
  DiscreteMeasure mu1 = random_measure_ball(m, base, 1.0, 3, false, rng);
  DiscreteMeasure mu2 = random_measure_ball(m, base, 1.0, 4, false, rng);
  DiscreteMeasure nu = random_measure_ball(m, base, 1.0, 3, false, rng);

  MeasureEnsemble p = make_ensemble(m, {mu1, mu2}, {0.5, 0.5});
  CHECK(w2_outer(p, p) == doctest::Approx(0.0).epsilon(1e-12));

  MeasureEnsemble dp = make_ensemble(m, {mu1}, {1.0});
  MeasureEnsemble dq = make_ensemble(m, {nu}, {1.0});
  CHECK(w2_outer(dp, dq) == doctest::Approx(w2(m, mu1, nu).cost));

  MeasureEnsemble q = make_ensemble(m, {nu}, {1.0});
  double forced = 0.5 * w2(m, mu1, nu).cost + 0.5 * w2(m, mu2, nu).cost;
  CHECK(w2_outer(p, q) == doctest::Approx(forced).epsilon(1e-12));
}

TEST_CASE("empirical sampling is seed-deterministic") {
  ModelManifold m(ManifoldKind::Euclidean, 1);
  DiscreteMeasure mu1 = make_measure(m, {pt1(0)}, {1.0});
  DiscreteMeasure mu2 = make_measure(m, {pt1(1)}, {1.0});
  MeasureEnsemble p = make_ensemble(m, {mu1, mu2}, {0.3, 0.7});

  MeasureEnsemble a = empirical_sample(p, 9, 77);
  MeasureEnsemble b = empirical_sample(p, 9, 77);
  REQUIRE(a.size() == 9);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.measures[i].same_content(b.measures[i]));

  // a Dirac ensemble only ever yields copies of its measure
  MeasureEnsemble d = make_ensemble(m, {mu1}, {1.0});
  MeasureEnsemble s = empirical_sample(d, 5, 123);
  CHECK(w2_outer(s, d) == doctest::Approx(0.0));
}

TEST_CASE("empirical ensembles drift toward the law (monitored trend)") {
  ModelManifold m(ManifoldKind::Euclidean, 1);
  DiscreteMeasure mu1 = make_measure(m, {pt1(0)}, {1.0});
  DiscreteMeasure mu2 = make_measure(m, {pt1(3)}, {1.0});
  MeasureEnsemble p = make_ensemble(m, {mu1, mu2}, {0.5, 0.5});
  double small_mean = 0, large_mean = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    small_mean += w2_outer(empirical_sample(p, 4, seed), p);
    large_mean += w2_outer(empirical_sample(p, 256, seed), p);
  }
  CHECK(large_mean < small_mean);
}

TEST_CASE("plan validation catches corrupted plans") {
  ModelManifold m(ManifoldKind::Euclidean, 1);
  DiscreteMeasure mu = make_measure(m, {pt1(0), pt1(1)}, {0.5, 0.5});
  DiscreteMeasure nu = make_measure(m, {pt1(2)}, {1.0});
  W2Result r = w2(m, mu, nu);
  TransportPlan bad = r.plan;
  bad.mass(0, 0) += 0.1;
  CHECK_THROWS_AS(bad.validate(m, mu, nu), ConstraintViolation);
  TransportPlan wrong_cost = r.plan;
  wrong_cost.cost += 1.0;
  CHECK_THROWS_AS(wrong_cost.validate(m, mu, nu), ConstraintViolation);
}
