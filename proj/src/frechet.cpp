// SPDX-License-Identifier: Apache-2.0
#include "wbary/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "wbary/rng.hpp"

namespace wbary {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kArmijoHalvings = 30;
constexpr int kCutLocusRetries = 5;
constexpr double kTieTol = 1e-9;

double half_cost(const ModelManifold& m, const std::vector<double>& lambda,
                 const std::vector<Point>& xs, const Point& w) {
  double c = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double d = m.dist(w, xs[i]);
    c += 0.5 * lambda[i] * d * d;
  }
  return c;
}

// negative gradient of the half cost: sum_i lambda_i log_w(x_i)
Vec descent_direction(const ModelManifold& m, const std::vector<double>& lambda,
                      const std::vector<Point>& xs, const Point& w) {
  Vec g = Vec::Zero(m.embed_dim());
  for (std::size_t i = 0; i < xs.size(); ++i)
    g += lambda[i] * m.log_map(w, xs[i]);
  return g;
}

struct RunOutcome {
  Point w;
  double cost;       // half cost
  double grad_norm;
  int iterations;
  bool converged;
};

std::optional<RunOutcome> descend(const ModelManifold& m,
                                  const std::vector<double>& lambda,
                                  const std::vector<Point>& xs, Point start,
                                  double tol, int max_iter, CounterRng& rng,
                                  double spread_scale) {
  Point w = start;
  int retries = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Vec g;
    double f;
    try {
      g = descent_direction(m, lambda, xs, w);
      f = half_cost(m, lambda, xs, w);
    } catch (const CutLocusError&) {
      if (++retries > kCutLocusRetries) return std::nullopt;
      Vec jitter(m.embed_dim());
      for (int k = 0; k < m.embed_dim(); ++k) jitter[k] = rng.normal();
      Mat frame = m.tangent_frame(start);
      Vec t = frame * m.to_frame(frame, jitter);
      double n = m.norm(t);
      if (n > 0) t *= (0.1 * spread_scale) / n;
      w = m.exp_map(start, t);
      continue;
    }
    double gn = std::sqrt(std::max(m.inner(g, g), 0.0));
    if (gn <= tol)
      return RunOutcome{w, f, gn, iter, true};

    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= kArmijoHalvings; ++h) {
      Point cand = m.exp_map(w, step * g);
      double fc;
      try {
        fc = half_cost(m, lambda, xs, cand);
      } catch (const CutLocusError&) {
        step *= 0.5;
        continue;
      }
      if (fc <= f - 1e-4 * step * gn * gn) {
        w = cand;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // flat within machine precision: report the current iterate
      return RunOutcome{w, f, gn, iter, gn <= 10 * tol};
    }
  }
  Vec g = descent_direction(m, lambda, xs, w);
  double gn = std::sqrt(std::max(m.inner(g, g), 0.0));
  return RunOutcome{w, half_cost(m, lambda, xs, w), gn, max_iter, gn <= tol};
}

bool lex_less(const Vec& a, const Vec& b) {
  for (long k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return true;
    if (a[k] > b[k]) return false;
  }
  return false;
}

}  // namespace

double default_frechet_tol(const ModelManifold& m) {
  return m.kind() == ManifoldKind::Sphere ? 1e-9 : 1e-10;
}

FrechetResult frechet_mean(const ModelManifold& m,
                           const std::vector<double>& lambda,
                           const std::vector<Point>& xs,
                           const FrechetOptions& opts) {
  if (xs.empty() || xs.size() != lambda.size())
    throw ConstraintViolation("frechet_mean: points/weights mismatch");
  double total = 0;
  for (double l : lambda) {
    if (l <= 0) throw ConstraintViolation("frechet_mean: weights must be > 0");
    total += l;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConstraintViolation("frechet_mean: weights must sum to 1");
  for (const auto& x : xs) m.validate_point(x);

  const double tol = opts.tol > 0 ? opts.tol : default_frechet_tol(m);
  CounterRng rng(opts.seed, /*stream=*/0xf3e1ULL);

  double diam = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      diam = std::max(diam, m.dist(xs[i], xs[j]));
  double spread_scale = diam > 0 ? diam : 1.0;

  // multistart: every input point plus 4 seeded perturbations of the first
  std::vector<Point> starts = xs;
  for (int k = 0; k < 4; ++k) {
    Vec raw(m.embed_dim());
    for (int a = 0; a < m.embed_dim(); ++a) raw[a] = rng.normal();
    Mat frame = m.tangent_frame(xs[0]);
    Vec t = frame * m.to_frame(frame, raw);
    double n = m.norm(t);
    if (n > 0) t *= (0.25 * spread_scale) / n;
    starts.push_back(m.exp_map(xs[0], t));
  }

  std::vector<RunOutcome> converged;
  std::optional<RunOutcome> best_any;
  for (const Point& s : starts) {
    auto run = descend(m, lambda, xs, s, tol, opts.max_iter, rng, spread_scale);
    if (!run) continue;
    if (!best_any || run->cost < best_any->cost) best_any = run;
    if (run->converged) converged.push_back(*run);
  }
  if (converged.empty()) {
    if (best_any)
      throw FrechetNonConvergence("frechet_mean: no start reached tolerance",
                                  best_any->w, 2.0 * best_any->cost,
                                  best_any->grad_norm);
    throw NonConvergence("frechet_mean: all starts hit the cut locus");
  }

  const RunOutcome* best = &converged.front();
  for (const auto& r : converged) {
    if (r.cost < best->cost - kTieTol ||
        (std::abs(r.cost - best->cost) <= kTieTol &&
         lex_less(r.w.coords, best->w.coords)))
      best = &r;
  }

  double spread = 0;
  for (std::size_t i = 0; i < converged.size(); ++i)
    for (std::size_t j = i + 1; j < converged.size(); ++j)
      spread = std::max(spread, m.dist(converged[i].w, converged[j].w));

  FrechetResult out;
  out.mean = best->w;
  out.cost = 2.0 * best->cost;
  out.grad_norm = best->grad_norm;
  out.iterations = best->iterations;
  out.multistart_spread = spread;
  return out;
}

Point selection_B(const ModelManifold& m, const std::vector<double>& lambda,
                  const std::vector<Point>& xs) {
  if (xs.size() == 1) {
    m.validate_point(xs[0]);
    return xs[0];
  }
  return frechet_mean(m, lambda, xs).mean;
}

bool cut_locus_check(const ModelManifold& m, const std::vector<double>& lambda,
                     const std::vector<Point>& xs, const Point& z) {
  (void)lambda;
  if (m.kind() != ManifoldKind::Sphere) return true;
  for (const auto& x : xs)
    if (m.dist(z, x) >= kPi - 1e-9) return false;
  return true;
}

}  // namespace wbary
