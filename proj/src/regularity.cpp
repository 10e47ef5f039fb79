// SPDX-License-Identifier: Apache-2.0
#include "wbary/regularity.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "wbary/frechet.hpp"
#include "wbary/quadrature.hpp"

namespace wbary {

namespace {

Mat sym_sqrt(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw ConstraintViolation("matrix square root of a non-PSD matrix");
  Vec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Mat sym_inv_sqrt(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.eigenvalues().minCoeff() <= 1e-14)
    throw ConstraintViolation("inverse square root of a singular matrix");
  Vec ev = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double gaussian_density(const Vec& x, const Vec& mean, const Mat& cov_inv,
                        double norm_const) {
  Vec d = x - mean;
  return norm_const * std::exp(-0.5 * d.dot(cov_inv * d));
}

}  // namespace

std::vector<double> SemiDiscretePotential::full_weights() const {
  std::vector<double> w;
  w.reserve(anchor_weights.size() + 1);
  w.push_back(lambda1);
  w.insert(w.end(), anchor_weights.begin(), anchor_weights.end());
  return w;
}

SemiDiscretePotential make_semi_discrete(const ModelManifold& m,
                                         double lambda1,
                                         std::vector<double> anchor_weights,
                                         std::vector<Point> anchors) {
  if (anchors.empty() || anchors.size() != anchor_weights.size())
    throw ConstraintViolation("semi-discrete potential: anchor mismatch");
  double total = lambda1;
  if (lambda1 <= 0)
    throw ConstraintViolation("semi-discrete potential: lambda1 must be > 0");
  for (double w : anchor_weights) {
    if (w <= 0)
      throw ConstraintViolation("semi-discrete potential: weights must be > 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConstraintViolation("semi-discrete potential: weights must sum to 1");
  for (const auto& x : anchors) m.validate_point(x);
  return SemiDiscretePotential{m, lambda1, std::move(anchor_weights),
                               std::move(anchors)};
}

Vec semi_discrete_grad(const SemiDiscretePotential& pot, const Point& z) {
  const ModelManifold& m = pot.manifold;
  Vec g = Vec::Zero(m.embed_dim());
  for (std::size_t i = 0; i < pot.anchors.size(); ++i)
    g += pot.anchor_weights[i] * m.log_map(z, pot.anchors[i]);
  return g / pot.lambda1;
}

Mat semi_discrete_hessian(const SemiDiscretePotential& pot, const Point& z) {
  const ModelManifold& m = pot.manifold;
  Mat h = Mat::Zero(m.dim(), m.dim());
  for (std::size_t i = 0; i < pot.anchors.size(); ++i)
    h -= pot.anchor_weights[i] *
         m.hess_half_dist_sq(z, pot.anchors[i]).matrix;
  return h / pot.lambda1;
}

SemiDiscreteMapResult semi_discrete_map(const SemiDiscretePotential& pot,
                                        const Point& z) {
  const ModelManifold& m = pot.manifold;
  Vec grad = semi_discrete_grad(pot, z);
  Point image = m.exp_map(z, -grad);

  // characterization: z is a barycenter of lambda_1 delta_image + anchors
  Vec balance = pot.lambda1 * m.log_map(z, image);
  for (std::size_t i = 0; i < pot.anchors.size(); ++i)
    balance += pot.anchor_weights[i] * m.log_map(z, pot.anchors[i]);
  if (m.norm(balance) > 1e-8)
    throw Error("semi_discrete_map: barycenter characterization violated");

  // Hess_z d^2_image / 2 - Hess_z g_1 = (1/(2 lambda_1)) sum lambda_i Hess d^2
  Mat combo = pot.lambda1 * m.hess_half_dist_sq(z, image).matrix;
  for (std::size_t i = 0; i < pot.anchors.size(); ++i)
    combo += pot.anchor_weights[i] *
             m.hess_half_dist_sq(z, pot.anchors[i]).matrix;
  combo /= pot.lambda1;

  Mat frame_z = m.tangent_frame(z);
  Mat frame_y = m.tangent_frame(image);
  Mat df(m.dim(), m.dim());
  for (int b = 0; b < m.dim(); ++b) {
    Vec w = m.from_frame(frame_z, combo.col(b));
    Vec mapped = m.dexp(z, -grad, w);
    df.col(b) = m.to_frame(frame_y, mapped);
  }
  double jac = m.dexp_det(m.norm(grad)) * combo.determinant();
  return SemiDiscreteMapResult{std::move(image), std::move(df), jac};
}

double lipschitz_bound(const SemiDiscretePotential& pot,
                       const std::vector<Point>& region, Exec mode) {
  std::vector<double> norms(region.size());
  for_each_index(region.size(), mode, [&](std::size_t i) {
    SemiDiscreteMapResult r = semi_discrete_map(pot, region[i]);
    norms[i] = r.differential.jacobiSvd().singularValues()[0];
  });
  double best = 0;
  for (double n : norms) best = std::max(best, n);
  return best;
}

QuadraticPotential make_quadratic(Mat a, Vec b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw ConstraintViolation("quadratic potential: shape mismatch");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConstraintViolation("quadratic potential: A must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.eigenvalues().minCoeff() <= 0)
    throw ConstraintViolation("quadratic potential: A must be positive definite");
  return QuadraticPotential{std::move(a), std::move(b)};
}

GaussianBarycenter gaussian_barycenter(const std::vector<double>& lambda,
                                       const std::vector<Vec>& means,
                                       const std::vector<Mat>& covariances,
                                       double tol, int max_iter) {
  if (means.empty() || means.size() != lambda.size() ||
      means.size() != covariances.size())
    throw ConstraintViolation("gaussian barycenter: input size mismatch");
  const int d = int(means[0].size());

  GaussianBarycenter out;
  out.mean = Vec::Zero(d);
  for (std::size_t i = 0; i < means.size(); ++i)
    out.mean += lambda[i] * means[i];

  Mat sigma = Mat::Zero(d, d);
  for (std::size_t i = 0; i < covariances.size(); ++i)
    sigma += lambda[i] * covariances[i];

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    Mat root = sym_sqrt(sigma);
    Mat inv_root = sym_inv_sqrt(sigma);
    Mat mixed = Mat::Zero(d, d);
    for (std::size_t i = 0; i < covariances.size(); ++i)
      mixed += lambda[i] * sym_sqrt(root * covariances[i] * root);
    Mat next = inv_root * mixed * mixed * inv_root;
    next = 0.5 * (next + next.transpose());
    double delta = (next - sigma).cwiseAbs().maxCoeff();
    sigma = next;
    if (delta <= tol) break;
  }
  if (iter >= max_iter)
    throw NonConvergence("gaussian barycenter: fixed point did not converge");

  out.covariance = sigma;
  out.iterations = iter + 1;
  Mat root = sym_sqrt(sigma);
  Mat inv_root = sym_inv_sqrt(sigma);
  for (std::size_t i = 0; i < covariances.size(); ++i) {
    Mat a = inv_root * sym_sqrt(root * covariances[i] * root) * inv_root;
    a = 0.5 * (a + a.transpose());
    Vec b = means[i] - a * out.mean;
    out.potentials.push_back(make_quadratic(std::move(a), std::move(b)));
  }
  return out;
}

HessianEqualityReport hessian_equality_semidiscrete(
    const SemiDiscretePotential& pot, const std::vector<Point>& samples) {
  const ModelManifold& m = pot.manifold;
  HessianEqualityReport rep;
  rep.samples = int(samples.size());
  for (const Point& z : samples) {
    Mat total = pot.lambda1 * semi_discrete_hessian(pot, z);
    for (std::size_t i = 0; i < pot.anchors.size(); ++i)
      total += pot.anchor_weights[i] *
               m.hess_half_dist_sq(z, pot.anchors[i]).matrix;
    rep.max_residual =
        std::max(rep.max_residual, total.cwiseAbs().maxCoeff());
  }
  return rep;
}

HessianEqualityReport hessian_equality_gaussian(
    const std::vector<double>& lambda, const std::vector<Vec>& means,
    const std::vector<Mat>& covariances) {
  GaussianBarycenter gb = gaussian_barycenter(lambda, means, covariances);
  const int d = int(means[0].size());
  Mat total = Mat::Zero(d, d);  // sum lambda_i (I - A_i)
  for (std::size_t i = 0; i < lambda.size(); ++i)
    total += lambda[i] * (Mat::Identity(d, d) - gb.potentials[i].a);
  HessianEqualityReport rep;
  rep.samples = 1;
  rep.max_residual = total.cwiseAbs().maxCoeff();
  return rep;
}

namespace {

JacobiReport jacobi_from_parts(int dim, double curvature_k, double grad_norm,
                               double laplacian,
                               const std::function<double(double)>& det_j) {
  JacobiReport rep;
  rep.laplacian = laplacian;
  rep.grad_norm_sq = grad_norm * grad_norm;
  rep.det_j_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 32; ++k) {
    double t = double(k) / 31.0;
    double dj = det_j(t);
    rep.det_j_min = std::min(rep.det_j_min, dj);
    if (dj <= 1e-12)
      throw DegenerateJacobian("jacobi check: det J(t) vanished on the grid");
  }
  rep.log_det_drop = -std::log(det_j(1.0));
  rep.jacobi_slack = rep.log_det_drop -
                     (laplacian - curvature_k * rep.grad_norm_sq / 2.0);
  rep.laplacian_slack = dim + 0.5 * dim * dim +
                        curvature_k * rep.grad_norm_sq / 2.0 - laplacian;
  rep.pass = rep.jacobi_slack >= -1e-6 && rep.laplacian_slack >= -1e-9;
  return rep;
}

}  // namespace

JacobiReport jacobi_bound_check(const SemiDiscretePotential& pot,
                                const Point& z) {
  const ModelManifold& m = pot.manifold;
  Vec grad = semi_discrete_grad(pot, z);
  double r = m.norm(grad);
  Mat hess = semi_discrete_hessian(pot, z);
  auto det_j = [&](double t) {
    Point gt = m.exp_map(z, -t * grad);
    Mat mt = m.hess_half_dist_sq(z, gt).matrix - t * hess;
    return m.dexp_det(t * r) * mt.determinant();
  };
  return jacobi_from_parts(m.dim(), m.curvature_k(), r, hess.trace(), det_j);
}

JacobiReport jacobi_bound_check(const ModelManifold& m,
                                const QuadraticPotential& pot,
                                const Point& z) {
  if (m.kind() != ManifoldKind::Euclidean)
    throw ConstraintViolation("quadratic potentials are Euclidean-only");
  const int d = m.dim();
  Mat hess = Mat::Identity(d, d) - pot.a;  // Hess phi
  Vec grad = hess * z.coords - pot.b;
  auto det_j = [&](double t) {
    Mat mt = Mat::Identity(d, d) - t * hess;
    return mt.determinant();
  };
  return jacobi_from_parts(d, 0.0, grad.norm(), hess.trace(), det_j);
}

double change_of_variable_residual(const Vec& mean_from, const Mat& cov_from,
                                   const QuadraticPotential& map,
                                   const std::function<double(double)>& a,
                                   double half_width, double quad_tol) {
  const int d = int(mean_from.size());
  if (d != 1 && d != 2)
    throw SizeError("change of variable: testcases are 1-D or 2-D");
  const double two_pi = 6.283185307179586476925286766559;

  double jac = map.a.determinant();
  Vec mean_to = map.a * mean_from + map.b;
  Mat cov_to = map.a * cov_from * map.a.transpose();

  Mat from_inv = cov_from.inverse();
  Mat to_inv = cov_to.inverse();
  double from_norm =
      1.0 / (std::pow(two_pi, d / 2.0) * std::sqrt(cov_from.determinant()));
  double to_norm =
      1.0 / (std::pow(two_pi, d / 2.0) * std::sqrt(cov_to.determinant()));

  double from_spread = std::sqrt(Eigen::SelfAdjointEigenSolver<Mat>(cov_from)
                                     .eigenvalues()
                                     .maxCoeff());
  double to_spread = std::sqrt(Eigen::SelfAdjointEigenSolver<Mat>(cov_to)
                                   .eigenvalues()
                                   .maxCoeff());

  // the minimum depth guards the iterated quadrature against missing the
  // kink contours of clamped integrands
  const int min_depth = 6;
  auto integrate = [&](const std::function<double(const Vec&)>& fn,
                       const Vec& center, double spread) {
    double w = half_width * spread;
    if (d == 1) {
      return adaptive_simpson(
          [&](double x) {
            Vec v(1);
            v[0] = x;
            return fn(v);
          },
          center[0] - w, center[0] + w, quad_tol, 40, min_depth);
    }
    return adaptive_simpson(
        [&](double x) {
          return adaptive_simpson(
              [&](double y) {
                Vec v(2);
                v[0] = x;
                v[1] = y;
                return fn(v);
              },
              center[1] - w, center[1] + w, quad_tol / (4.0 * w), 40,
              min_depth);
        },
        center[0] - w, center[0] + w, quad_tol, 40, min_depth);
  };

  double lhs = integrate(
      [&](const Vec& y) {
        return a(gaussian_density(y, mean_to, to_inv, to_norm));
      },
      mean_to, to_spread);
  double rhs = integrate(
      [&](const Vec& x) {
        double f = gaussian_density(x, mean_from, from_inv, from_norm);
        return a(f / jac) * jac;
      },
      mean_from, from_spread);
  return std::abs(lhs - rhs);
}

DensityBoundReport density_bound_check(const SemiDiscretePotential& pot,
                                       const std::vector<double>& source_lo,
                                       const std::vector<double>& source_hi,
                                       int atoms_per_axis, int bins,
                                       double slack, Exec mode) {
  const ModelManifold& m = pot.manifold;
  if (m.kind() != ManifoldKind::Euclidean)
    throw ConstraintViolation("density bound fixture is Euclidean-only");
  const int d = m.dim();

  // uniform grid discretization of the source box
  std::size_t count = 1;
  for (int a = 0; a < d; ++a) count *= std::size_t(atoms_per_axis);
  std::vector<Point> atoms(count);
  for (std::size_t flat = 0; flat < count; ++flat) {
    Vec x(d);
    std::size_t rest = flat;
    for (int a = d - 1; a >= 0; --a) {
      int idx = int(rest % atoms_per_axis);
      rest /= atoms_per_axis;
      double h = (source_hi[a] - source_lo[a]) / atoms_per_axis;
      x[a] = source_lo[a] + (idx + 0.5) * h;
    }
    atoms[flat] = Point{x};
  }
  std::vector<double> weights(count, 1.0 / double(count));

  // push every atom through the selection map (the inverse of F)
  std::vector<double> lambda = pot.full_weights();
  std::vector<Point> pushed(count);
  for_each_index(count, mode, [&](std::size_t i) {
    std::vector<Point> tuple;
    tuple.reserve(1 + pot.anchors.size());
    tuple.push_back(atoms[i]);
    tuple.insert(tuple.end(), pot.anchors.begin(), pot.anchors.end());
    pushed[i] = selection_B(m, lambda, tuple);
  });

  DensityBoundReport rep;
  // measured Lipschitz constant over a coarse subsample of the barycenters
  std::vector<Point> sample;
  std::size_t stride = std::max<std::size_t>(1, count / 128);
  for (std::size_t i = 0; i < count; i += stride) sample.push_back(pushed[i]);
  rep.lipschitz = lipschitz_bound(pot, sample, mode);

  DensityHistogram source = histogram_density(
      atoms, weights, source_lo, source_hi, std::vector<int>(d, bins));
  std::vector<double> plo(d, std::numeric_limits<double>::infinity());
  std::vector<double> phi(d, -std::numeric_limits<double>::infinity());
  for (const auto& p : pushed)
    for (int a = 0; a < d; ++a) {
      plo[a] = std::min(plo[a], p.coords[a]);
      phi[a] = std::max(phi[a], p.coords[a]);
    }
  for (int a = 0; a < d; ++a) {
    double pad = 1e-9 * (1.0 + std::abs(phi[a]));
    plo[a] -= pad;
    phi[a] += pad;
  }
  DensityHistogram image = histogram_density(pushed, weights, plo, phi,
                                             std::vector<int>(d, bins));
  rep.source_max = source.max_density;
  rep.pushed_max = image.max_density;
  rep.bound = std::pow(rep.lipschitz, d) * rep.source_max * (1.0 + slack);
  rep.pass = rep.pushed_max <= rep.bound;
  return rep;
}

}  // namespace wbary
