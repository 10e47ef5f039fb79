// SPDX-License-Identifier: Apache-2.0
#include "wbary/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "wbary/quadrature.hpp"

namespace wbary {

namespace {
constexpr int kMaxAlpha = 64;
constexpr double kQuadTol = 1e-9;
}  // namespace

double smooth_bump01(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

IntegrabilityGauge::IntegrabilityGauge(std::vector<int> alpha)
    : alpha_(std::move(alpha)) {
  int prev = -1;
  for (int a : alpha_) {
    if (a < 0 || a <= prev)
      throw GaugeFailure("gauge: alpha must be strictly increasing and >= 0");
    prev = a;
  }
  if (alpha_.empty()) throw GaugeFailure("gauge: empty level sequence");

  table_lo_ = alpha_.front();
  table_hi_ = alpha_.back() + 1.0;
  const int per_unit = 512;
  int segments = int((table_hi_ - table_lo_) * per_unit + 0.5);
  step_ = (table_hi_ - table_lo_) / segments;
  h_nodes_.resize(segments + 1);
  i_nodes_.resize(segments + 1);
  double seg_tol = kQuadTol / (8.0 * segments);
  h_nodes_[0] = 0.0;
  i_nodes_[0] = 0.0;
  for (int k = 1; k <= segments; ++k) {
    double a = table_lo_ + (k - 1) * step_;
    double b = table_lo_ + k * step_;
    i_nodes_[k] = i_nodes_[k - 1] +
                  adaptive_simpson(
                      [&](double t) { return bump(t) * std::exp(t); }, a, b,
                      seg_tol * std::exp(b));
    // H'(s) = e^{-s} I(s); within the segment use the left node as base
    double i_base = i_nodes_[k - 1];
    double a_node = a;
    h_nodes_[k] =
        h_nodes_[k - 1] +
        adaptive_simpson(
            [&](double s) {
              double i_s = i_base + adaptive_simpson(
                                        [&](double t) {
                                          return bump(t) * std::exp(t);
                                        },
                                        a_node, s, seg_tol * std::exp(b));
              return std::exp(-s) * i_s;
            },
            a, b, seg_tol);
  }
  i_total_ = i_nodes_.back();
  h_end_ = h_nodes_.back();
}

double IntegrabilityGauge::bump(double t) const {
  // locate the interval (alpha(n), alpha(n)+1) containing t
  auto it = std::upper_bound(alpha_.begin(), alpha_.end(), t);
  if (it == alpha_.begin()) return 0.0;
  double a = *(it - 1);
  double u = t - a;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  if (u < 1.0 / 3.0) return smooth_bump01(3.0 * u);
  if (u <= 2.0 / 3.0) return 1.0;
  return smooth_bump01(3.0 * (1.0 - u));
}

namespace {

double hermite(double u, double h, double f0, double f1, double d0,
               double d1) {
  double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * h * d0 +
         (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * h * d1;
}

}  // namespace

double IntegrabilityGauge::inner_integral(double x) const {
  if (x <= table_lo_) return 0.0;
  if (x >= table_hi_) return i_total_;
  double pos = (x - table_lo_) / step_;
  int k = std::min(int(pos), int(i_nodes_.size()) - 2);
  double a = table_lo_ + k * step_;
  double u = (x - a) / step_;
  double d0 = bump(a) * std::exp(a);
  double d1 = bump(a + step_) * std::exp(a + step_);
  double v = hermite(u, step_, i_nodes_[k], i_nodes_[k + 1], d0, d1);
  // I is nondecreasing; keep interpolation inside the node bracket
  return std::clamp(v, i_nodes_[k], i_nodes_[k + 1]);
}

double IntegrabilityGauge::H_prime(double x) const {
  if (x <= table_lo_ || x <= 0.0) return 0.0;
  return std::exp(-x) * inner_integral(x);
}

double IntegrabilityGauge::H(double x) const {
  if (x <= 0.0 || x <= table_lo_) return 0.0;
  if (x >= table_hi_)
    return h_end_ + i_total_ * (std::exp(-table_hi_) - std::exp(-x));
  double pos = (x - table_lo_) / step_;
  int k = std::min(int(pos), int(h_nodes_.size()) - 2);
  double a = table_lo_ + k * step_;
  double u = (x - a) / step_;
  double d0 = std::exp(-a) * i_nodes_[k];
  double d1 = std::exp(-(a + step_)) * i_nodes_[k + 1];
  double v = hermite(u, step_, h_nodes_[k], h_nodes_[k + 1], d0, d1);
  return std::clamp(v, h_nodes_[k], h_nodes_[k + 1]);
}

double IntegrabilityGauge::G(double x) const {
  if (x <= 1.0) return 0.0;
  return H(std::log(x)) * x;
}

std::vector<double> tail_profile(const std::vector<GridDensity>& family,
                                 const std::vector<double>& thresholds,
                                 Exec mode) {
  if (family.empty()) throw GridMismatch("tail_profile: empty family");
  for (const auto& f : family)
    if (!f.same_grid(family.front()))
      throw GridMismatch("tail_profile: densities on different grids");
  std::vector<double> out(thresholds.size(), 0.0);
  std::vector<double> per(family.size());
  for (std::size_t c = 0; c < thresholds.size(); ++c) {
    double thresh = thresholds[c];
    for_each_index(family.size(), mode, [&](std::size_t k) {
      const GridDensity& f = family[k];
      double s = 0;
      for (double v : f.values)
        if (v > thresh) s += v;
      per[k] = s * f.cell_volume();
    });
    out[c] = *std::max_element(per.begin(), per.end());
  }
  return out;
}

IntegrabilityGauge build_gauge(const std::vector<GridDensity>& family,
                               Exec mode) {
  std::vector<int> alpha;
  int next = 0;
  for (int n = 0;; ++n) {
    double budget = std::pow(2.0, -(n + 1));
    int a = next;
    double tail = 0;
    for (;; ++a) {
      if (a > kMaxAlpha)
        throw GaugeFailure("build_gauge: tail schedule not certified by 64");
      tail = tail_profile(family, {std::exp(double(a))}, mode)[0];
      if (tail <= budget) break;
    }
    alpha.push_back(a);
    next = a + 1;
    if (tail == 0.0) break;  // bounded family: later levels are free
  }
  return IntegrabilityGauge(std::move(alpha));
}

double clamped_entropy(double x) {
  constexpr double kInvE = 0.36787944117144232159552377016146;
  if (x <= kInvE) return 0.0;
  return x * std::log(x) + kInvE;
}

double displacement_functional(const GridDensity& f,
                               const IntegrabilityGauge& gauge, Exec mode) {
  return grid_functional(f, [&](double v) { return gauge.G(v); }, mode);
}

double displacement_functional(const GridDensity& f,
                               const std::function<double(double)>& g,
                               Exec mode) {
  return grid_functional(f, g, mode);
}

EntropyInequalityReport entropy_inequality_check(
    const std::vector<GridDensity>& marginal_densities,
    const std::vector<double>& lambda, const GridDensity& barycenter_density,
    const std::function<double(double)>& g, double curvature_k, double l_h,
    double w2sq, int dim, Exec mode) {
  if (marginal_densities.empty() ||
      marginal_densities.size() != lambda.size())
    throw GridMismatch("entropy check: marginals/weights mismatch");
  for (const auto& f : marginal_densities)
    if (!f.same_grid(barycenter_density))
      throw GridMismatch("entropy check: densities on different grids");
  double big_lambda = 0;
  for (double l : lambda) big_lambda += l;
  if (big_lambda <= 0)
    throw ConstraintViolation("entropy check: Lambda must be positive");

  EntropyInequalityReport rep;
  rep.lhs = grid_functional(barycenter_density, g, mode);
  for (std::size_t i = 0; i < marginal_densities.size(); ++i)
    rep.marginal_term +=
        lambda[i] / big_lambda * grid_functional(marginal_densities[i], g,
                                                 mode);
  rep.curvature_term = l_h * curvature_k / (2.0 * big_lambda) * w2sq;
  rep.dimension_term =
      l_h / (2.0 * big_lambda) * (double(dim) * dim + 2.0 * dim);
  rep.rhs = rep.marginal_term + rep.curvature_term + rep.dimension_term;
  rep.slack = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs + 1e-6;
  return rep;
}

bool bgl_membership(const GridDensity& f, const IntegrabilityGauge& gauge,
                    double level, Exec mode) {
  return displacement_functional(f, gauge, mode) <= level;
}

}  // namespace wbary
