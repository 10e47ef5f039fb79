// SPDX-License-Identifier: Apache-2.0
#include "wbary/geometry.hpp"

#include <cmath>

namespace wbary {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEmbedTol = 1e-12;
constexpr double kCutLocusMargin = 1e-9;
constexpr double kTiny = 1e-14;

// stable acosh(1 + s) for s >= 0
double acosh1p(double s) {
  if (s < 0) s = 0;
  return std::log1p(s + std::sqrt(s * (s + 2.0)));
}

}  // namespace

ModelManifold::ModelManifold(ManifoldKind kind, int dim)
    : kind_(kind), dim_(dim) {
  if (dim < 1) throw ConstraintViolation("manifold dimension must be >= 1");
  embed_dim_ = (kind == ManifoldKind::Euclidean) ? dim : dim + 1;
  curvature_k_ = (kind == ManifoldKind::Hyperbolic) ? double(dim - 1) : 0.0;
}

std::string ModelManifold::name() const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return "euclidean";
    case ManifoldKind::Sphere:
      return "sphere";
    case ManifoldKind::Hyperbolic:
      return "hyperbolic";
  }
  return "?";
}

double ModelManifold::inner(const Vec& a, const Vec& b) const {
  if (kind_ == ManifoldKind::Hyperbolic) {
    return -a[0] * b[0] + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
  }
  return a.dot(b);
}

double ModelManifold::norm(const Vec& a) const {
  double q = inner(a, a);
  return q > 0 ? std::sqrt(q) : 0.0;
}

void ModelManifold::validate_point(const Point& x) const {
  if (x.coords.size() != embed_dim_)
    throw ConstraintViolation("point has wrong embedding dimension");
  switch (kind_) {
    case ManifoldKind::Euclidean:
      break;
    case ManifoldKind::Sphere:
      if (std::abs(x.coords.norm() - 1.0) > kEmbedTol)
        throw ConstraintViolation("sphere point is not a unit vector");
      break;
    case ManifoldKind::Hyperbolic:
      if (std::abs(inner(x.coords, x.coords) + 1.0) > kEmbedTol ||
          x.coords[0] < 1.0 - kEmbedTol)
        throw ConstraintViolation("point is not on the hyperboloid sheet");
      break;
  }
}

bool ModelManifold::is_valid_point(const Point& x) const {
  try {
    validate_point(x);
    return true;
  } catch (const ConstraintViolation&) {
    return false;
  }
}

void ModelManifold::validate_tangent(const TangentVector& v) const {
  validate_point(v.base);
  if (v.vec.size() != embed_dim_)
    throw ConstraintViolation("tangent vector has wrong dimension");
  if (kind_ != ManifoldKind::Euclidean &&
      std::abs(inner(v.vec, v.base.coords)) > kEmbedTol * (1 + v.vec.norm()))
    throw ConstraintViolation("vector is not tangent to the base point");
}

Point ModelManifold::project(const Vec& raw) const {
  Point p{raw};
  switch (kind_) {
    case ManifoldKind::Euclidean:
      break;
    case ManifoldKind::Sphere: {
      double n = raw.norm();
      if (n < kTiny) throw ConstraintViolation("cannot project zero vector");
      p.coords = raw / n;
      break;
    }
    case ManifoldKind::Hyperbolic: {
      double q = -inner(raw, raw);
      if (q < kTiny || raw[0] <= 0)
        throw ConstraintViolation("cannot project onto hyperboloid");
      p.coords = raw / std::sqrt(q);
      break;
    }
  }
  return p;
}

Vec ModelManifold::tangent_project(const Point& x, const Vec& w) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return w;
    case ManifoldKind::Sphere:
      return w - w.dot(x.coords) * x.coords;
    case ManifoldKind::Hyperbolic:
      return w + inner(w, x.coords) * x.coords;
  }
  return w;
}

double ModelManifold::dist(const Point& x, const Point& y) const {
  validate_point(x);
  validate_point(y);
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return (x.coords - y.coords).norm();
    case ManifoldKind::Sphere: {
      double half_chord = 0.5 * (x.coords - y.coords).norm();
      if (half_chord > 1.0) half_chord = 1.0;
      return 2.0 * std::asin(half_chord);
    }
    case ManifoldKind::Hyperbolic: {
      // cosh d - 1 = <x-y, x-y>_M / 2, stable for nearby points
      Vec diff = x.coords - y.coords;
      return acosh1p(0.5 * inner(diff, diff));
    }
  }
  return 0;
}

Point ModelManifold::exp_map(const Point& x, const Vec& v) const {
  validate_point(x);
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return Point{x.coords + v};
    case ManifoldKind::Sphere: {
      double r = v.norm();
      if (r < kTiny) return x;
      Vec y = std::cos(r) * x.coords + (std::sin(r) / r) * v;
      return project(y);
    }
    case ManifoldKind::Hyperbolic: {
      double r = norm(v);
      if (r < kTiny) return x;
      Vec y = std::cosh(r) * x.coords + (std::sinh(r) / r) * v;
      return project(y);
    }
  }
  return x;
}

Vec ModelManifold::log_map(const Point& x, const Point& y) const {
  validate_point(x);
  validate_point(y);
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return y.coords - x.coords;
    case ManifoldKind::Sphere: {
      double d = dist(x, y);
      if (d >= kPi - kCutLocusMargin)
        throw CutLocusError("log_map: points are antipodal on the sphere");
      if (d < kTiny) return Vec::Zero(embed_dim_);
      Vec p = y.coords - y.coords.dot(x.coords) * x.coords;
      double n = std::sin(d);  // |p| analytically
      if (n < kTiny) return Vec::Zero(embed_dim_);
      return (d / n) * p;
    }
    case ManifoldKind::Hyperbolic: {
      double d = dist(x, y);
      if (d < kTiny) return Vec::Zero(embed_dim_);
      Vec p = y.coords + inner(y.coords, x.coords) * x.coords;
      double n = std::sinh(d);  // |p|_M analytically
      if (n < kTiny) return Vec::Zero(embed_dim_);
      return (d / n) * p;
    }
  }
  return Vec::Zero(embed_dim_);
}

Mat ModelManifold::tangent_frame(const Point& x) const {
  validate_point(x);
  Mat frame(embed_dim_, dim_);
  if (kind_ == ManifoldKind::Euclidean) {
    frame.setIdentity();
    return frame;
  }
  int got = 0;
  for (int k = 0; k < embed_dim_ && got < dim_; ++k) {
    Vec cand = tangent_project(x, Vec::Unit(embed_dim_, k));
    for (int j = 0; j < got; ++j)
      cand -= inner(cand, frame.col(j)) * frame.col(j);
    double n = norm(cand);
    if (n > 1e-6) frame.col(got++) = cand / n;
  }
  if (got != dim_)
    throw ConstraintViolation("tangent frame construction failed");
  return frame;
}

Vec ModelManifold::to_frame(const Mat& frame, const Vec& ambient) const {
  Vec out(dim_);
  for (int j = 0; j < dim_; ++j) out[j] = inner(frame.col(j), ambient);
  return out;
}

Vec ModelManifold::from_frame(const Mat& frame, const Vec& coords) const {
  return frame * coords;
}

double ModelManifold::tangential_hessian_factor(double d) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return 1.0;
    case ManifoldKind::Sphere:
      if (d < 1e-6) return 1.0 - d * d / 3.0;
      return d / std::tan(d);
    case ManifoldKind::Hyperbolic:
      if (d < 1e-6) return 1.0 + d * d / 3.0;
      return d / std::tanh(d);
  }
  return 1.0;
}

SelfAdjointOperator ModelManifold::hess_half_dist_sq(const Point& x,
                                                     const Point& y) const {
  double d = dist(x, y);
  if (kind_ == ManifoldKind::Sphere && d >= kPi - kCutLocusMargin)
    throw CutLocusError("hess_half_dist_sq: antipodal pair");
  Mat frame = tangent_frame(x);
  Mat mat = Mat::Identity(dim_, dim_);
  if (kind_ != ManifoldKind::Euclidean && d >= kTiny) {
    double t = tangential_hessian_factor(d);
    Vec u = to_frame(frame, log_map(x, y) / d);
    mat = t * Mat::Identity(dim_, dim_) + (1.0 - t) * (u * u.transpose());
  }
  return SelfAdjointOperator{x, mat};
}

double ModelManifold::laplacian_half_dist_sq(const Point& x,
                                             const Point& y) const {
  double d = dist(x, y);
  if (kind_ == ManifoldKind::Sphere && d >= kPi - kCutLocusMargin)
    throw CutLocusError("laplacian_half_dist_sq: antipodal pair");
  return 1.0 + (dim_ - 1) * tangential_hessian_factor(d);
}

Vec ModelManifold::dexp(const Point& x, const Vec& v, const Vec& w) const {
  if (kind_ == ManifoldKind::Euclidean) return w;
  double r = (kind_ == ManifoldKind::Sphere) ? v.norm() : norm(v);
  if (r < kTiny) return w;
  Vec u = v / r;
  double radial = inner(u, w);
  Vec normal = w - radial * u;
  if (kind_ == ManifoldKind::Sphere) {
    // geodesic tangent at exp_x(v); normal Jacobi factor sin r / r
    Vec gdot = -std::sin(r) * x.coords + std::cos(r) * u;
    return radial * gdot + (std::sin(r) / r) * normal;
  }
  Vec gdot = std::sinh(r) * x.coords + std::cosh(r) * u;
  return radial * gdot + (std::sinh(r) / r) * normal;
}

double ModelManifold::dexp_det(double vnorm) const {
  if (kind_ == ManifoldKind::Euclidean || vnorm < kTiny) return 1.0;
  double fac = (kind_ == ManifoldKind::Sphere) ? std::sin(vnorm) / vnorm
                                               : std::sinh(vnorm) / vnorm;
  return std::pow(fac, dim_ - 1);
}

}  // namespace wbary
