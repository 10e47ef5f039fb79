// SPDX-License-Identifier: Apache-2.0
#include "wbary/mmot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wbary/simplex.hpp"

namespace wbary {

BarycostResult barycost(const ModelManifold& m,
                        const std::vector<double>& lambda,
                        const std::vector<Point>& xs) {
  Point w = selection_B(m, lambda, xs);
  double c = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double d = m.dist(w, xs[i]);
    c += lambda[i] * d * d;
  }
  return BarycostResult{c, w};
}

void MultiMarginalPlan::validate(const std::vector<DiscreteMeasure>& marginals) const {
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    std::vector<double> sums(marginals[i].size(), 0.0);
    for (const auto& e : entries) sums[e.index[i]] += e.mass;
    for (std::size_t k = 0; k < sums.size(); ++k)
      if (std::abs(sums[k] - marginals[i].weights[k]) > 1e-10)
        throw ConstraintViolation("mmot plan: marginal constraint violated");
  }
}

TupleCostTable evaluate_tuple_costs(const ModelManifold& m,
                                    const std::vector<double>& lambda,
                                    const std::vector<DiscreteMeasure>& mus,
                                    Exec mode) {
  TupleCostTable table;
  table.sizes.reserve(mus.size());
  std::size_t prod = 1;
  for (const auto& mu : mus) {
    table.sizes.push_back(int(mu.size()));
    prod *= mu.size();
  }
  table.costs.resize(prod);
  table.minimizers.resize(prod);
  for_each_index(prod, mode, [&](std::size_t flat) {
    std::vector<int> idx = decode_tuple(flat, table.sizes);
    std::vector<Point> pts(mus.size());
    for (std::size_t i = 0; i < mus.size(); ++i)
      pts[i] = mus[i].points[idx[i]];
    BarycostResult r = barycost(m, lambda, pts);
    table.costs[flat] = r.cost;
    table.minimizers[flat] = std::move(r.minimizer);
  });
  return table;
}

MultiMarginalPlan solve_mmot(const ModelManifold& m, const std::vector<double>& lambda,
                    const std::vector<DiscreteMeasure>& mus, std::size_t cap,
                    Exec mode) {
  if (mus.size() < 2) throw SizeError("solve_mmot: needs >= 2 marginals");
  if (mus.size() != lambda.size())
    throw SizeError("solve_mmot: weights/marginals mismatch");
  std::size_t prod = 1;
  for (const auto& mu : mus) {
    if (!(mu.manifold == m))
      throw ConstraintViolation("solve_mmot: marginal on different manifold");
    prod *= mu.size();
    if (prod > cap)
      throw CapExceeded("solve_mmot: product support exceeds the cap");
  }

  TupleCostTable table = evaluate_tuple_costs(m, lambda, mus, mode);
  std::vector<Eigen::VectorXd> weights;
  weights.reserve(mus.size());
  for (const auto& mu : mus)
    weights.push_back(Eigen::Map<const Eigen::VectorXd>(mu.weights.data(),
                                                        long(mu.size())));
  TupleLpResult lp = solve_tuple_lp(weights, table.costs);

  MultiMarginalPlan plan;
  plan.marginal_sizes = table.sizes;
  plan.cost = lp.cost;
  plan.entries.reserve(lp.entries.size());
  for (auto& e : lp.entries) {
    std::size_t flat = encode_tuple(e.index, table.sizes);
    plan.entries.push_back(PlanEntry{std::move(e.index), e.mass,
                                     table.minimizers[flat],
                                     table.costs[flat]});
  }
  plan.validate(mus);
  return plan;
}

double mmot_oracle(const ModelManifold& m, const std::vector<double>& lambda,
                   const std::vector<DiscreteMeasure>& mus) {
  const std::size_t n = mus.size();
  if (n < 2 || n > 3) throw SizeError("mmot_oracle: needs n in {2, 3}");
  const std::size_t s = mus[0].size();
  if (s > 5) throw SizeError("mmot_oracle: support size must be <= 5");
  for (const auto& mu : mus) {
    if (mu.size() != s) throw SizeError("mmot_oracle: unequal support sizes");
    for (double w : mu.weights)
      if (std::abs(w - 1.0 / double(s)) > 1e-12)
        throw SizeError("mmot_oracle: weights must be uniform");
  }

  std::vector<int> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  const std::vector<int> ident = perm;

  double best = std::numeric_limits<double>::infinity();
  // couple atom i of mu_1 with sigma_k(i) of mu_k; enumerate permutations
  std::vector<int> sigma2 = ident;
  do {
    if (n == 2) {
      double c = 0;
      for (std::size_t i = 0; i < s; ++i)
        c += barycost(m, lambda,
                      {mus[0].points[i], mus[1].points[sigma2[i]]})
                 .cost;
      best = std::min(best, c / double(s));
      continue;
    }
    std::vector<int> sigma3 = ident;
    do {
      double c = 0;
      for (std::size_t i = 0; i < s; ++i)
        c += barycost(m, lambda,
                      {mus[0].points[i], mus[1].points[sigma2[i]],
                       mus[2].points[sigma3[i]]})
                 .cost;
      best = std::min(best, c / double(s));
    } while (std::next_permutation(sigma3.begin(), sigma3.end()));
  } while (std::next_permutation(sigma2.begin(), sigma2.end()));
  return best;
}

}  // namespace wbary
