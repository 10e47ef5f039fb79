// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "wbary/grid.hpp"
#include "wbary/measures.hpp"

namespace wbary {

// Potential g_1(y) = -(1/lambda_1) sum_{i>=2} lambda_i c(y, x_i) with
// c = d^2/2; the transport map of the semi-discrete barycenter problem is
// F = exp(-grad g_1).
struct SemiDiscretePotential {
  ModelManifold manifold;
  double lambda1 = 0;
  std::vector<double> anchor_weights;  // lambda_i, i >= 2
  std::vector<Point> anchors;          // x_i, i >= 2

  std::vector<double> full_weights() const;  // lambda_1 prepended
};

SemiDiscretePotential make_semi_discrete(const ModelManifold& m,
                                         double lambda1,
                                         std::vector<double> anchor_weights,
                                         std::vector<Point> anchors);

// gradient of g_1 at z: (1/lambda_1) sum lambda_i log_z(x_i)
Vec semi_discrete_grad(const SemiDiscretePotential& pot, const Point& z);
// Hessian of g_1 at z in the tangent frame
Mat semi_discrete_hessian(const SemiDiscretePotential& pot, const Point& z);

struct SemiDiscreteMapResult {
  Point image;       // F(z)
  Mat differential;  // dF(z), frame at z -> frame at image
  double jacobian;   // det dF(z)
};

// F, dF = dexp ∘ (1/(2 lambda_1)) sum_i lambda_i Hess_z d^2_{x_i} (with
// x_1 := F(z)), and Jac F. z must stay outside the anchors' cut loci.
SemiDiscreteMapResult semi_discrete_map(const SemiDiscretePotential& pot,
                                        const Point& z);

// max operator norm of dF over the region
double lipschitz_bound(const SemiDiscretePotential& pot,
                       const std::vector<Point>& region,
                       Exec mode = Exec::openmp);

// Euclidean-only quadratic potential: phi(x) = x'(I-A)x/2 - b'x, so that
// exp(-grad phi)(x) = Ax + b. A must be symmetric positive definite.
struct QuadraticPotential {
  Mat a;
  Vec b;
};

QuadraticPotential make_quadratic(Mat a, Vec b);

// Gaussian barycenter fixed point: returns the maps' matrices A_i with
// sum_i lambda_i A_i = I and the barycenter covariance.
struct GaussianBarycenter {
  Vec mean;
  Mat covariance;
  std::vector<QuadraticPotential> potentials;  // one per marginal
  int iterations = 0;
};

GaussianBarycenter gaussian_barycenter(const std::vector<double>& lambda,
                                       const std::vector<Vec>& means,
                                       const std::vector<Mat>& covariances,
                                       double tol = 1e-14, int max_iter = 500);

struct HessianEqualityReport {
  double max_residual = 0;  // max over sample points of |sum lambda_i Hess phi_i|
  int samples = 0;
};

// Semi-discrete case: phi_1 = g_1, phi_i = c(., x_i); the weighted Hessians
// cancel identically and the report measures numerical consistency.
HessianEqualityReport hessian_equality_semidiscrete(
    const SemiDiscretePotential& pot, const std::vector<Point>& samples);

// Gaussian case: residual |I - sum lambda_i A_i| from the fixed point.
HessianEqualityReport hessian_equality_gaussian(
    const std::vector<double>& lambda, const std::vector<Vec>& means,
    const std::vector<Mat>& covariances);

struct JacobiReport {
  double det_j_min = 0;      // min det J(t) over the 32-point grid
  double log_det_drop = 0;   // l = -log det J(1)
  double laplacian = 0;      // trace Hess phi
  double grad_norm_sq = 0;
  double jacobi_slack = 0;   // l - (laplacian - K |grad|^2 / 2)
  double laplacian_slack = 0;  // m + m^2/2 + K |grad|^2/2 - laplacian
  bool pass = false;
};

struct DegenerateJacobian : Error {
  using Error::Error;
};

// Verifies -log det J(1) >= Delta phi - K |grad phi|^2 / 2 (slack -1e-6) and
// Delta phi <= m + m^2/2 + K |grad phi|^2 / 2 (slack 1e-9), with det J(t)
// checked positive on a 32-point grid in t.
JacobiReport jacobi_bound_check(const SemiDiscretePotential& pot,
                                const Point& z);
JacobiReport jacobi_bound_check(const ModelManifold& m,
                                const QuadraticPotential& pot, const Point& z);

// |int A(g) dVol - int A(f / Jac F) Jac F dVol| for the affine Gaussian
// push-forward F(x) = Ax + b with F#mu = nu. Integrals by adaptive
// quadrature over [-half_width, half_width]^dim around the means.
double change_of_variable_residual(const Vec& mean_from, const Mat& cov_from,
                                   const QuadraticPotential& map,
                                   const std::function<double(double)>& a,
                                   double half_width = 9.0,
                                   double quad_tol = 1e-9);

struct DensityBoundReport {
  double lipschitz = 0;       // C over the support of mu_1
  double source_max = 0;      // max histogram density of mu_1
  double pushed_max = 0;      // max histogram density of the barycenter
  double bound = 0;           // C^m * source_max * (1 + slack)
  bool pass = false;
};

// Euclidean fixture: mu_1 a fine grid discretization, Dirac anchors; the
// barycenter is the selection-map image and its histogram max density must
// respect C^m scaling within the stated slack (10%).
DensityBoundReport density_bound_check(const SemiDiscretePotential& pot,
                                       const std::vector<double>& source_lo,
                                       const std::vector<double>& source_hi,
                                       int atoms_per_axis, int bins = 64,
                                       double slack = 0.10,
                                       Exec mode = Exec::openmp);

}  // namespace wbary
