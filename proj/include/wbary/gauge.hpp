// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "wbary/grid.hpp"

namespace wbary {

struct GaugeFailure : Error {
  using Error::Error;
};
struct GridMismatch : Error {
  using Error::Error;
};

// Smooth cutoff supported on the unit intervals (alpha(n), alpha(n)+1), equal
// to 1 on [alpha(n)+1/3, alpha(n)+2/3]; built from the standard exp(-1/t)
// glue, so it is C-infinity.
double smooth_bump01(double t);  // 0 at t<=0, 1 at t>=1, monotone

// Uniform-integrability gauge: increasing integer levels alpha, the bump
// gamma, H(x) = int_0^x e^{-s} int_0^s gamma(t) e^t dt ds (0 for x <= 0), and
// G(x) = H(log x) * x. G vanishes on [0,1], is non-decreasing and convex,
// 0 <= H' <= 1, and every represented level satisfies
// H(alpha(n)+1) - H(alpha(n)) >= (1 - e^{-1/3})^2.
class IntegrabilityGauge {
 public:
  explicit IntegrabilityGauge(std::vector<int> alpha);

  const std::vector<int>& alpha() const { return alpha_; }
  double bump(double t) const;      // gamma
  double H(double x) const;
  double H_prime(double x) const;   // e^{-x} int_0^x gamma e^t
  double G(double x) const;

 private:
  // Both H and I(s) = int_0^s gamma e^t are accumulated once by adaptive
  // Simpson over a dense node table spanning the bump range, then evaluated
  // by cubic Hermite interpolation (exact derivatives are available:
  // I' = gamma e^t, H' = e^{-x} I). The interpolation error is far below
  // the 1e-9 quadrature target.
  double inner_integral(double x) const;  // I via the table

  std::vector<int> alpha_;
  double table_lo_ = 0;
  double table_hi_ = 0;
  double step_ = 0;
  std::vector<double> h_nodes_;
  std::vector<double> i_nodes_;
  double i_total_ = 0;
  double h_end_ = 0;
};

// sup over the family of int_{f > C} f dVol, one value per threshold;
// nonincreasing in C, exact Riemann sums
std::vector<double> tail_profile(const std::vector<GridDensity>& family,
                                 const std::vector<double>& thresholds,
                                 Exec mode = Exec::openmp);

// Explicit gauge for a family of grid densities: alpha(n) is the least
// strictly increasing integer sequence with sup tail(e^alpha(n)) <= 2^-(n+1);
// levels stop at the first exactly-zero tail. Throws GaugeFailure if the
// schedule cannot be certified with alpha <= 64.
IntegrabilityGauge build_gauge(const std::vector<GridDensity>& family,
                               Exec mode = Exec::openmp);

// Clamped entropy: 0 on [0, e^-1], x log x + e^-1 above; H' in [0, 1].
double clamped_entropy(double x);

// Riemann sum of G(f) over the grid.
double displacement_functional(const GridDensity& f,
                               const IntegrabilityGauge& gauge,
                               Exec mode = Exec::openmp);
double displacement_functional(const GridDensity& f,
                               const std::function<double(double)>& g,
                               Exec mode = Exec::openmp);

struct EntropyInequalityReport {
  double lhs = 0;            // int G(barycenter density)
  double marginal_term = 0;  // sum (lambda_i / Lambda) int G(g_i)
  double curvature_term = 0; // (L_H K / 2 Lambda) W2sq
  double dimension_term = 0; // (L_H / 2 Lambda) (m^2 + 2m)
  double rhs = 0;
  double slack = 0;          // rhs - lhs
  bool pass = false;
};

// Displacement inequality for the barycenter density against the
// absolutely-continuous marginals; w2sq is the squared outer Wasserstein
// distance of the ensemble to the Dirac mass at its barycenter.
EntropyInequalityReport entropy_inequality_check(
    const std::vector<GridDensity>& marginal_densities,
    const std::vector<double>& lambda, const GridDensity& barycenter_density,
    const std::function<double(double)>& g, double curvature_k, double l_h,
    double w2sq, int dim, Exec mode = Exec::openmp);

bool bgl_membership(const GridDensity& f, const IntegrabilityGauge& gauge,
                    double level, Exec mode = Exec::openmp);

}  // namespace wbary
