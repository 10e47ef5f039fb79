// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace wbary {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConstraintViolation : Error {
  using Error::Error;
};
struct CutLocusError : Error {
  using Error::Error;
};
struct NonConvergence : Error {
  using Error::Error;
};
struct CapExceeded : Error {
  using Error::Error;
};
struct SizeError : Error {
  using Error::Error;
};

enum class ManifoldKind { Euclidean, Sphere, Hyperbolic };

struct Point {
  Vec coords;
};

struct TangentVector {
  Point base;
  Vec vec;
};

// Symmetric operator on a tangent space, represented in the deterministic
// orthonormal frame produced by ModelManifold::tangent_frame(base).
struct SelfAdjointOperator {
  Point base;
  Mat matrix;
};

// One of the three constant-curvature model spaces.
//   Euclidean  R^m              (points: length-m vectors)
//   Sphere     S^m, radius 1    (unit vectors in R^{m+1})
//   Hyperbolic H^m, curv -1     (hyperboloid sheet in R^{m+1}, Minkowski
//                                norm -1, first coordinate >= 1)
class ModelManifold {
 public:
  ModelManifold() : ModelManifold(ManifoldKind::Euclidean, 1) {}
  ModelManifold(ManifoldKind kind, int dim);

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int embed_dim() const { return embed_dim_; }
  // Lower Ricci bound is -K with K = 0 (Euclidean, Sphere) or m-1 (Hyperbolic).
  double ricci_lower() const { return -curvature_k_; }
  double curvature_k() const { return curvature_k_; }
  std::string name() const;

  // Embedding constraints, enforced to 1e-12.
  void validate_point(const Point& x) const;
  void validate_tangent(const TangentVector& v) const;
  bool is_valid_point(const Point& x) const;
  Point project(const Vec& raw) const;  // nearest representative on the model

  // metric inner product in the embedding (Minkowski for Hyperbolic)
  double inner(const Vec& a, const Vec& b) const;
  double norm(const Vec& a) const;

  double dist(const Point& x, const Point& y) const;
  Point exp_map(const Point& x, const Vec& v) const;
  Point exp_map(const TangentVector& v) const { return exp_map(v.base, v.vec); }
  // Requires y outside the cut locus of x (Sphere: d < pi - 1e-9).
  Vec log_map(const Point& x, const Point& y) const;

  // Deterministic orthonormal tangent frame at x: embed_dim x dim columns,
  // Gram-Schmidt over the embedding basis seeded by the coordinates of x.
  Mat tangent_frame(const Point& x) const;
  Vec to_frame(const Mat& frame, const Vec& ambient) const;
  Vec from_frame(const Mat& frame, const Vec& coords) const;

  // Hessian of d(.,y)^2/2 at x: eigenvalue 1 along log_map(x,y)/d, and the
  // curvature comparison factor on the orthogonal complement
  // (1 Euclidean, d*cot d Sphere, d*coth d Hyperbolic).
  SelfAdjointOperator hess_half_dist_sq(const Point& x, const Point& y) const;
  double laplacian_half_dist_sq(const Point& x, const Point& y) const;
  double tangential_hessian_factor(double d) const;

  // Differential of exp_x at v applied to w in T_xM; returns a vector
  // tangent at exp_x(v).
  Vec dexp(const Point& x, const Vec& v, const Vec& w) const;
  // det of dexp_x|_v between orientation-consistent orthonormal frames
  double dexp_det(double vnorm) const;

  bool operator==(const ModelManifold& o) const {
    return kind_ == o.kind_ && dim_ == o.dim_;
  }

 private:
  Vec tangent_project(const Point& x, const Vec& w) const;

  ManifoldKind kind_;
  int dim_;
  int embed_dim_;
  double curvature_k_;
};

}  // namespace wbary
