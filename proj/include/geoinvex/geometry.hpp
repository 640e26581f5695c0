#pragma once

// Closed-form Riemannian kernel for three embedded manifold models:
//
//   Euclidean(n)    R^n, flat.
//   SphereCap(n)    open cap {x in S^n : angle(x, center) < radius} with
//                   radius < pi/2, ambient R^{n+1}.
//   Hyperboloid(n)  {x in R^{n+1} : <x,x>_M = -1, x_n > 0} with the
//                   Minkowski form <x,y>_M = sum_{i<n} x_i y_i - x_n y_n.
//
// Points and tangent vectors are stored in ambient coordinates. All values
// are immutable once built and every operation is a pure function of its
// arguments.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "geoinvex/config.hpp"

namespace geoinvex {

enum class ManifoldKind { Euclidean, SphereCap, Hyperboloid };

std::string to_string(ManifoldKind kind);

/// Identifies the chart a point lives in. Two points can only interact when
/// their charts compare equal.
struct Chart {
  ManifoldKind kind = ManifoldKind::Euclidean;
  int dim = 0;

  friend bool operator==(const Chart&, const Chart&) = default;
};

struct Point {
  Chart chart;
  Eigen::VectorXd coords;
};

struct TangentVector {
  Point base;
  Eigen::VectorXd comps;

  TangentVector scaled(double c) const { return {base, c * comps}; }
};

/// Geodesic s -> exp_start(s * velocity), s in [0, 1].
struct GeodesicSegment {
  Point start;
  TangentVector velocity;
};

class Manifold {
 public:
  static Manifold euclidean(int dim, Tolerances tol = {});
  /// `center` is normalized; requires 0 < radius < pi/2.
  static Manifold sphere_cap(const Eigen::VectorXd& center, double radius, Tolerances tol = {});
  static Manifold hyperboloid(int dim, Tolerances tol = {});

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int ambient_dim() const { return kind_ == ManifoldKind::Euclidean ? dim_ : dim_ + 1; }
  Chart chart() const { return {kind_, dim_}; }
  const Tolerances& tolerances() const { return tol_; }
  /// Complete, simply connected, non-positive curvature.
  bool is_hadamard() const { return kind_ != ManifoldKind::SphereCap; }

  const Eigen::VectorXd& cap_center() const { return cap_center_; }
  double cap_radius() const { return cap_radius_; }

  /// Validates `coords` against the point invariants (and the cap) and
  /// returns the point; small drift is re-projected.
  Point point(const Eigen::VectorXd& coords) const;
  /// Lifts intrinsic coordinates onto the model: Euclidean as is, sphere by
  /// normalization, hyperboloid by solving for the last coordinate from the
  /// first n.
  Point lift(const Eigen::VectorXd& coords) const;
  /// The distinguished base point: 0, the cap center, or (0,...,0,1).
  Point origin() const;
  bool contains(const Eigen::VectorXd& coords) const;

  /// Validates tangency of `comps` at `base`.
  TangentVector tangent(const Point& base, const Eigen::VectorXd& comps) const;
  TangentVector zero_tangent(const Point& base) const;
  /// Orthogonal projection of an ambient vector onto T_base (with respect to
  /// the ambient form of the model).
  TangentVector project_tangent(const Point& base, const Eigen::VectorXd& ambient) const;
  /// Riemannian gradient from the ambient Euclidean gradient of an extension.
  TangentVector gradient_from_ambient(const Point& base, const Eigen::VectorXd& euclidean_grad) const;
  /// Orthonormal basis of T_base.
  std::vector<TangentVector> tangent_basis(const Point& base) const;

  double inner(const TangentVector& u, const TangentVector& v) const;
  double norm(const TangentVector& v) const;

  Point exp_map(const TangentVector& v) const;
  TangentVector log_map(const Point& p, const Point& q) const;
  double distance(const Point& p, const Point& q) const;

  Point geodesic_eval(const GeodesicSegment& seg, double s) const;
  /// Velocity of the segment at parameter s (the transported initial velocity).
  TangentVector geodesic_velocity(const GeodesicSegment& seg, double s) const;
  TangentVector parallel_transport(const TangentVector& v, const GeodesicSegment& seg,
                                   double s) const;
  TangentVector inverse_transport(const TangentVector& v, const GeodesicSegment& seg,
                                  double s) const;

  GeodesicSegment segment(const TangentVector& velocity) const { return {velocity.base, velocity}; }

  void require_chart(const Point& p, const char* what) const;

 private:
  Manifold(ManifoldKind kind, int dim, Tolerances tol) : kind_(kind), dim_(dim), tol_(tol) {}

  // Ambient bilinear form of the model (Euclidean dot or Minkowski).
  double form(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  Eigen::VectorXd normalize_point(const Eigen::VectorXd& coords, bool strict) const;
  Eigen::VectorXd tangent_part(const Eigen::VectorXd& base, const Eigen::VectorXd& v) const;
  double cap_angle(const Eigen::VectorXd& x) const;
  Point finish_point(const Eigen::VectorXd& coords) const;
  TangentVector finish_tangent(const Point& base, const Eigen::VectorXd& comps) const;
  void require_same_base(const TangentVector& v, const Point& p, const char* what) const;

  ManifoldKind kind_;
  int dim_;
  Tolerances tol_;
  Eigen::VectorXd cap_center_;
  double cap_radius_ = 0.0;
};

/// Minkowski bilinear form with the last coordinate timelike.
double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace geoinvex
