// SPDX-License-Identifier: Apache-2.0
#include "wbary/barycenter.hpp"

#include <algorithm>
#include <cmath>

#include "wbary/rng.hpp"

namespace wbary {

namespace {

constexpr double kMergeTol = 1e-9;

// collapse content-identical measures so empirical ensembles keep the
// product-support cap meaningful
MeasureEnsemble deduplicate(const MeasureEnsemble& p) {
  MeasureEnsemble out{p.manifold, {}, {}};
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool merged = false;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (out.measures[k].same_content(p.measures[i])) {
        out.weights[k] += p.weights[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.measures.push_back(p.measures[i]);
      out.weights.push_back(p.weights[i]);
    }
  }
  return out;
}

}  // namespace

BarycenterResult wasserstein_barycenter(const MeasureEnsemble& p_in,
                                        std::size_t cap, Exec mode) {
  MeasureEnsemble p = deduplicate(p_in);
  if (p.size() == 0)
    throw ConstraintViolation("wasserstein_barycenter: empty ensemble");

  BarycenterResult out;
  if (p.size() == 1) {
    out.barycenter = p.measures[0];
    out.plan.marginal_sizes = {int(p.measures[0].size())};
    out.induced_plans.clear();
    out.functional_value = 0;
    out.max_pointwise_residual = 0;
    return out;
  }

  const ModelManifold& m = p.manifold;
  out.plan = solve_mmot(m, p.weights, p.measures, cap, mode);

  // push tuples through the selection map, merging coincident outputs
  std::vector<Point> atoms;
  std::vector<double> masses;
  std::vector<int> entry_atom(out.plan.entries.size());
  double max_residual = 0;
  for (std::size_t e = 0; e < out.plan.entries.size(); ++e) {
    const PlanEntry& pe = out.plan.entries[e];
    const Point& z = pe.minimizer;

    Vec g = Vec::Zero(m.embed_dim());
    for (std::size_t i = 0; i < p.size(); ++i)
      g += p.weights[i] * m.log_map(z, p.measures[i].points[pe.index[i]]);
    max_residual = std::max(max_residual, m.norm(g));

    int slot = -1;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (m.dist(atoms[a], z) <= kMergeTol) {
        slot = int(a);
        break;
      }
    }
    if (slot < 0) {
      slot = int(atoms.size());
      atoms.push_back(z);
      masses.push_back(0.0);
    }
    masses[slot] += pe.mass;
    entry_atom[e] = slot;
  }
  double mass_total = 0;
  for (double w : masses) mass_total += w;
  for (double& w : masses) w /= mass_total;  // sum to 1 exactly
  out.max_pointwise_residual = max_residual;
  out.barycenter = make_measure(m, atoms, masses);

  // induced plans (B, p_i)#gamma and the functional value
  out.induced_plans.resize(p.size());
  out.functional_value = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    TransportPlan tp;
    tp.rows = int(out.barycenter.size());
    tp.cols = int(p.measures[i].size());
    tp.mass = Mat::Zero(tp.rows, tp.cols);
    for (std::size_t e = 0; e < out.plan.entries.size(); ++e) {
      const PlanEntry& pe = out.plan.entries[e];
      tp.mass(entry_atom[e], pe.index[i]) += pe.mass / mass_total;
    }
    tp.cost = 0;
    for (int a = 0; a < tp.rows; ++a)
      for (int b = 0; b < tp.cols; ++b)
        if (tp.mass(a, b) > 0) {
          double d = m.dist(out.barycenter.points[a], p.measures[i].points[b]);
          tp.cost += tp.mass(a, b) * d * d;
        }
    tp.validate(m, out.barycenter, p.measures[i]);
    out.functional_value += p.weights[i] * w2(m, out.barycenter,
                                              p.measures[i]).cost;
    out.induced_plans[i] = std::move(tp);
  }
  return out;
}

OptimalityReport verify_optimality(const MeasureEnsemble& p,
                                   const DiscreteMeasure& candidate,
                                   int trials, std::uint64_t seed) {
  const ModelManifold& m = p.manifold;
  auto value = [&](const DiscreteMeasure& nu) {
    double v = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      v += p.weights[i] * w2(m, nu, p.measures[i]).cost;
    return v;
  };

  OptimalityReport rep;
  rep.candidate_value = value(candidate);
  rep.trials = trials;
  rep.min_competitor_gap = std::numeric_limits<double>::infinity();

  double diam = 1.0;
  for (const auto& mu : p.measures)
    for (const auto& x : mu.points)
      for (const auto& y : candidate.points)
        diam = std::max(diam, m.dist(x, y));

  CounterRng rng(seed, /*stream=*/0xbc1ULL);
  for (int t = 0; t < trials; ++t) {
    std::vector<Point> pts = candidate.points;
    double scale = 0.05 * diam * rng.uniform();
    for (auto& x : pts) {
      Mat frame = m.tangent_frame(x);
      Vec c(m.dim());
      for (int k = 0; k < m.dim(); ++k) c[k] = rng.normal();
      Vec v = m.from_frame(frame, c);
      double n = m.norm(v);
      if (n > 0) v *= (scale * rng.uniform()) / n;
      x = m.exp_map(x, v);
    }
    // Dirichlet-style weight jitter
    std::vector<double> w = candidate.weights;
    double total = 0;
    for (auto& wi : w) {
      wi *= -std::log(1.0 - rng.uniform());
      total += wi;
    }
    for (auto& wi : w) wi /= total;
    double gap = value(make_measure(m, pts, w)) - rep.candidate_value;
    rep.min_competitor_gap = std::min(rep.min_competitor_gap, gap);
  }
  return rep;
}

std::vector<LlnRow> lln_run(const MeasureEnsemble& p,
                            const std::vector<int>& sizes, std::uint64_t seed,
                            std::size_t cap, Exec mode) {
  BarycenterResult ref = wasserstein_barycenter(p, cap, mode);
  std::vector<LlnRow> rows;
  rows.reserve(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    int j = sizes[k];
    MeasureEnsemble pj = empirical_sample(p, j, seed + k);
    BarycenterResult bj = wasserstein_barycenter(pj, cap, mode);
    LlnRow row;
    row.j = j;
    row.seed = seed;
    row.ensemble_dist = std::sqrt(std::max(w2_outer(pj, p, mode), 0.0));
    row.barycenter_dist =
        std::sqrt(std::max(w2(p.manifold, bj.barycenter, ref.barycenter).cost,
                           0.0));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wbary
