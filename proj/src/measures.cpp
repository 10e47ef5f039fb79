// SPDX-License-Identifier: Apache-2.0
#include "wbary/measures.hpp"

#include <cmath>

#include "wbary/rng.hpp"
#include "wbary/simplex.hpp"

namespace wbary {

namespace {
constexpr double kWeightTol = 1e-12;
constexpr double kPlanTol = 1e-10;
}  // namespace

bool DiscreteMeasure::same_content(const DiscreteMeasure& other) const {
  if (!(manifold == other.manifold) || size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (weights[i] != other.weights[i]) return false;
    if (points[i].coords != other.points[i].coords) return false;
  }
  return true;
}

DiscreteMeasure make_measure(const ModelManifold& m, std::vector<Point> points,
                             std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size())
    throw ConstraintViolation("measure: points/weights size mismatch");
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw ConstraintViolation("measure: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTol)
    throw ConstraintViolation("measure: weights do not sum to 1");
  DiscreteMeasure out{m, {}, {}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] == 0.0) continue;  // prune degenerate atoms
    m.validate_point(points[i]);
    out.points.push_back(std::move(points[i]));
    out.weights.push_back(weights[i]);
  }
  if (out.points.empty())
    throw ConstraintViolation("measure: all atoms have zero weight");
  return out;
}

DiscreteMeasure dirac(const ModelManifold& m, const Point& x) {
  return make_measure(m, {x}, {1.0});
}

MeasureEnsemble make_ensemble(const ModelManifold& m,
                              std::vector<DiscreteMeasure> measures,
                              std::vector<double> weights) {
  if (measures.empty() || measures.size() != weights.size())
    throw ConstraintViolation("ensemble: measures/weights size mismatch");
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw ConstraintViolation("ensemble: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTol)
    throw ConstraintViolation("ensemble: weights do not sum to 1");
  MeasureEnsemble out{m, {}, {}};
  for (std::size_t i = 0; i < measures.size(); ++i) {
    if (weights[i] == 0.0) continue;
    if (!(measures[i].manifold == m))
      throw ConstraintViolation("ensemble: measure on a different manifold");
    out.measures.push_back(std::move(measures[i]));
    out.weights.push_back(weights[i]);
  }
  return out;
}

Mat squared_distance_matrix(const ModelManifold& m,
                            const std::vector<Point>& xs,
                            const std::vector<Point>& ys, Exec mode) {
  Mat c(xs.size(), ys.size());
  for_each_index(xs.size(), mode, [&](std::size_t i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      double d = m.dist(xs[i], ys[j]);
      c(i, j) = d * d;
    }
  });
  return c;
}

void TransportPlan::validate(const ModelManifold& m, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu) const {
  if (rows != int(mu.size()) || cols != int(nu.size()))
    throw ConstraintViolation("plan: shape mismatch");
  for (int i = 0; i < rows; ++i)
    if (std::abs(mass.row(i).sum() - mu.weights[i]) > kPlanTol)
      throw ConstraintViolation("plan: row marginal violated");
  for (int j = 0; j < cols; ++j)
    if (std::abs(mass.col(j).sum() - nu.weights[j]) > kPlanTol)
      throw ConstraintViolation("plan: column marginal violated");
  double check = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (mass(i, j) < -kPlanTol)
        throw ConstraintViolation("plan: negative mass");
      if (mass(i, j) > 0) {
        double d = m.dist(mu.points[i], nu.points[j]);
        check += mass(i, j) * d * d;
      }
    }
  if (std::abs(check - cost) > kPlanTol * (1 + std::abs(cost)))
    throw ConstraintViolation("plan: stored cost inconsistent");
}

W2Result w2(const ModelManifold& m, const DiscreteMeasure& mu,
            const DiscreteMeasure& nu) {
  if (!(mu.manifold == m) || !(nu.manifold == m))
    throw ConstraintViolation("w2: measures on a different manifold");
  Mat c = squared_distance_matrix(m, mu.points, nu.points, Exec::serial);
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(mu.weights.data(),
                                                        long(mu.size()));
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(nu.weights.data(),
                                                        long(nu.size()));
  PairwiseLpResult lp = solve_pairwise_lp(a, b, c);
  W2Result out;
  out.plan.rows = int(mu.size());
  out.plan.cols = int(nu.size());
  out.plan.mass = lp.mass;
  out.plan.cost = lp.cost;
  out.cost = lp.cost;
  out.plan.validate(m, mu, nu);
  return out;
}

double w2_outer(const MeasureEnsemble& p, const MeasureEnsemble& q, Exec mode) {
  if (!(p.manifold == q.manifold))
    throw ConstraintViolation("w2_outer: ensembles on different manifolds");
  const std::size_t np = p.size(), nq = q.size();
  Mat ground(np, nq);
  for_each_index(np * nq, mode, [&](std::size_t k) {
    std::size_t i = k / nq, j = k % nq;
    ground(i, j) = w2(p.manifold, p.measures[i], q.measures[j]).cost;
  });
  Eigen::VectorXd a =
      Eigen::Map<const Eigen::VectorXd>(p.weights.data(), long(np));
  Eigen::VectorXd b =
      Eigen::Map<const Eigen::VectorXd>(q.weights.data(), long(nq));
  return solve_pairwise_lp(a, b, ground).cost;
}

double second_moment(const ModelManifold& m, const DiscreteMeasure& mu,
                     const Point& x0) {
  double total = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double d = m.dist(x0, mu.points[i]);
    total += mu.weights[i] * d * d;
  }
  return total;
}

MeasureEnsemble empirical_sample(const MeasureEnsemble& p, int j,
                                 std::uint64_t seed) {
  if (j < 1) throw SizeError("empirical_sample: j must be >= 1");
  CounterRng rng(seed, /*stream=*/0x5a5a5a5aULL);
  std::vector<double> cdf(p.size());
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p.weights[i];
    cdf[i] = acc;
  }
  std::vector<DiscreteMeasure> drawn;
  drawn.reserve(j);
  for (int k = 0; k < j; ++k) {
    double u = rng.uniform() * acc;
    std::size_t pick = 0;
    while (pick + 1 < cdf.size() && u > cdf[pick]) ++pick;
    drawn.push_back(p.measures[pick]);
  }
  return make_ensemble(p.manifold, std::move(drawn),
                       std::vector<double>(j, 1.0 / j));
}

}  // namespace wbary
