// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wbary/instances.hpp"
#include "wbary/mmot.hpp"
#include "wbary/simplex.hpp"

using namespace wbary;

namespace {
Point ptv(std::initializer_list<double> c) {
  Vec v(long(c.size()));
  long i = 0;
  for (double x : c) v[i++] = x;
  return Point{v};
}

double plan_cost_of(const std::vector<double>& coupling,
                    const std::vector<double>& costs) {
  double c = 0;
  for (std::size_t i = 0; i < coupling.size(); ++i)
    c += coupling[i] * costs[i];
  return c;
}
}  // namespace

TEST_CASE("barycost: Euclidean weighted mean") {
  ModelManifold m(ManifoldKind::Euclidean, 2);
  CounterRng rng(1, 0);
  for (int t = 0; t < 10; ++t) {
    int n = 2 + int(rng.below(3));
    std::vector<double> lambda = rng.simplex_weights(n);
    std::vector<Point> xs(n);
    Vec mean = Vec::Zero(2);
    for (int i = 0; i < n; ++i) {
      xs[i] = ptv({4 * rng.normal(), 4 * rng.normal()});
      mean += lambda[i] * xs[i].coords;
    }
    BarycostResult r = barycost(m, lambda, xs);
    CHECK((r.minimizer.coords - mean).norm() < 1e-9);
    double expect = 0;
    for (int i = 0; i < n; ++i)
      expect += lambda[i] * (mean - xs[i].coords).squaredNorm();
    CHECK(r.cost == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("barycost: midpoint pays a quarter of the squared distance") {
  ModelManifold m(ManifoldKind::Euclidean, 2);
  Point a = ptv({0, 0}), b = ptv({3, 1});
  BarycostResult r = barycost(m, {0.5, 0.5}, {a, b});
  double d2 = (b.coords - a.coords).squaredNorm();
  CHECK(r.cost == doctest::Approx(d2 / 4.0).epsilon(1e-12));
}

TEST_CASE("barycost: symmetric sphere configuration") {
  ModelManifold s2(ManifoldKind::Sphere, 2);
  std::vector<Point> axes{ptv({1, 0, 0}), ptv({0, 1, 0}), ptv({0, 0, 1})};
  BarycostResult r = barycost(s2, {1.0 / 3, 1.0 / 3, 1.0 / 3}, axes);
  Vec sym(3);
  sym.setConstant(1.0 / std::sqrt(3.0));
  CHECK(s2.dist(r.minimizer, Point{sym}) < 1e-7);
}

TEST_CASE("solve_mmot: Dirac marginals give the product plan") {
  for (auto kind : {ManifoldKind::Euclidean, ManifoldKind::Sphere,
                    ManifoldKind::Hyperbolic}) {
    ModelManifold m(kind, 2);
    CounterRng rng(5, 1);
    Point base = canonical_base(m);
    std::vector<DiscreteMeasure> mus;
    std::vector<Point> pts;
    for (int i = 0; i < 3; ++i) {
      Point x = random_point_ball(m, base, 0.7, rng);
      pts.push_back(x);
      mus.push_back(dirac(m, x));
    }
    std::vector<double> lambda{0.2, 0.5, 0.3};
    MultiMarginalPlan plan = solve_mmot(m, lambda, mus);
    REQUIRE(plan.entries.size() == 1);
    CHECK(plan.entries[0].mass == doctest::Approx(1.0));
    CHECK(plan.cost ==
          doctest::Approx(barycost(m, lambda, pts).cost).epsilon(1e-12));
  }
}

TEST_CASE("solve_mmot n=2 equals the pairwise identity in Euclidean space") {
  ModelManifold m(ManifoldKind::Euclidean, 2);
  CounterRng rng(9, 2);
  Point base = canonical_base(m);
  for (int t = 0; t < 20; ++t) {
    double l1 = 0.2 + 0.6 * rng.uniform();
    std::vector<double> lambda{l1, 1.0 - l1};
    DiscreteMeasure mu = random_measure_ball(m, base, 2.0, 2 + int(rng.below(3)),
                                             false, rng);
    DiscreteMeasure nu = random_measure_ball(m, base, 2.0, 2 + int(rng.below(3)),
                                             false, rng);
    MultiMarginalPlan plan = solve_mmot(m, lambda, {mu, nu});
    double closed = lambda[0] * lambda[1] * w2(m, mu, nu).cost;
    CHECK(plan.cost == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("solve_mmot equals the permutation oracle") {
  for (auto kind : {ManifoldKind::Euclidean, ManifoldKind::Sphere}) {
    ModelManifold m(kind, 2);
    CAPTURE(m.name());
    CounterRng rng(13, 3);
    Point base = canonical_base(m);
    for (int t = 0; t < 10; ++t) {
      int s = 2 + int(rng.below(2));  // 2 or 3 atoms
      std::vector<DiscreteMeasure> mus;
      for (int i = 0; i < 3; ++i)
        mus.push_back(random_measure_ball(m, base, 0.7, s, true, rng));
      std::vector<double> lambda{1.0 / 3, 1.0 / 3, 1.0 / 3};
      double lp = solve_mmot(m, lambda, mus).cost;
      double oracle = mmot_oracle(m, lambda, mus);
      CHECK(lp == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("mmot plan beats the product coupling and random couplings") {
  ModelManifold m(ManifoldKind::Euclidean, 2);
  CounterRng rng(21, 4);
  Point base = canonical_base(m);
  std::vector<DiscreteMeasure> mus;
  for (int i = 0; i < 3; ++i)
    mus.push_back(random_measure_ball(m, base, 1.5, 3, false, rng));
  std::vector<double> lambda{0.5, 0.25, 0.25};
  TupleCostTable table = evaluate_tuple_costs(m, lambda, mus, Exec::serial);
  MultiMarginalPlan plan = solve_mmot(m, lambda, mus);

  // independent product coupling
  double product_cost = 0;
  for (std::size_t flat = 0; flat < table.costs.size(); ++flat) {
    std::vector<int> idx = decode_tuple(flat, table.sizes);
    double mass = 1;
    for (int i = 0; i < 3; ++i) mass *= mus[i].weights[idx[i]];
    product_cost += mass * table.costs[flat];
  }
  CHECK(plan.cost <= product_cost + 1e-10);

  std::vector<Eigen::VectorXd> marg;
  for (const auto& mu : mus)
    marg.push_back(Eigen::Map<const Eigen::VectorXd>(mu.weights.data(),
                                                     long(mu.size())));
  for (int t = 0; t < 50; ++t) {
    std::vector<double> coupling = oracles::random_feasible_coupling(marg, rng);
    // feasibility of the rounded coupling
    std::vector<double> sums(mus[0].size(), 0.0);
    for (std::size_t flat = 0; flat < coupling.size(); ++flat)
      sums[decode_tuple(flat, table.sizes)[0]] += coupling[flat];
    for (std::size_t k = 0; k < sums.size(); ++k)
      CHECK(std::abs(sums[k] - mus[0].weights[k]) < 1e-9);
    CHECK(plan.cost <= plan_cost_of(coupling, table.costs) + 1e-9);
  }
}

TEST_CASE("mmot cap and oracle preconditions") {
  ModelManifold m(ManifoldKind::Euclidean, 1);
  CounterRng rng(3, 5);
  Point base = canonical_base(m);
  std::vector<DiscreteMeasure> mus;
  for (int i = 0; i < 2; ++i)
    mus.push_back(random_measure_ball(m, base, 1.0, 30, true, rng));
  CHECK_THROWS_AS(solve_mmot(m, {0.5, 0.5}, mus, /*cap=*/100), CapExceeded);

  std::vector<DiscreteMeasure> big;
  for (int i = 0; i < 2; ++i)
    big.push_back(random_measure_ball(m, base, 1.0, 6, true, rng));
  CHECK_THROWS_AS(mmot_oracle(m, {0.5, 0.5}, big), SizeError);
  DiscreteMeasure nonuniform =
      random_measure_ball(m, base, 1.0, 3, false, rng);
  CHECK_THROWS_AS(
      mmot_oracle(m, {0.5, 0.5},
                  {nonuniform, random_measure_ball(m, base, 1.0, 3, true, rng)}),
      SizeError);
}

TEST_CASE("tuple LP rejects malformed weights") {
  std::vector<Eigen::VectorXd> marg(2);
  marg[0] = Eigen::VectorXd::Constant(2, 0.5);
  marg[1] = Eigen::VectorXd::Constant(2, 0.4);  // sums to 0.8
  std::vector<double> costs{0, 1, 1, 0};
  CHECK_THROWS_AS(solve_tuple_lp(marg, costs), ConstraintViolation);
}
