#pragma once

// Catalog of the maps E, F (point -> point), the bi-map G (pair -> tangent at
// the second argument), scalar fields H and set predicates. The vocabulary is
// closed so that scenarios stay serializable and every evaluation is
// reproducible.

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geoinvex/geometry.hpp"

namespace geoinvex {

// ---------------------------------------------------------------------------
// Point maps

namespace pointmaps {
struct Identity {};
struct Constant {
  Point value;
};
/// x -> exp_center(factor * log_center(x)), factor in [0, 1].
struct GeodesicContraction {
  Point center;
  double factor = 1.0;
};
/// x -> A x + b. Euclidean charts only.
struct CoordinateAffine {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd offset;
};
}  // namespace pointmaps

using PointMap = std::variant<pointmaps::Identity, pointmaps::Constant,
                              pointmaps::GeodesicContraction, pointmaps::CoordinateAffine>;

PointMap make_contraction(Point center, double factor);
Point eval_point_map(const Manifold& m, const PointMap& map, const Point& x);
std::string describe(const PointMap& map);

// ---------------------------------------------------------------------------
// Bi-maps

namespace bimaps {
/// G(a, b) = log_b(a).
struct LogBased {};
/// G(a, b) = factor * log_b(a).
struct ScaledLog {
  double factor = 1.0;
};
/// G(a, b) = a - b. Euclidean charts only.
struct EuclideanDifference {};
/// Finite lookup table; any pair not in the table is an error.
struct CustomTable {
  struct Entry {
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd value;
  };
  std::vector<Entry> entries;
  double match_tol = 1e-12;
};
}  // namespace bimaps

using BiMap = std::variant<bimaps::LogBased, bimaps::ScaledLog, bimaps::EuclideanDifference,
                           bimaps::CustomTable>;

TangentVector eval_bimap(const Manifold& m, const BiMap& g, const Point& a, const Point& b);
std::string describe(const BiMap& g);

/// The triple (E, F, G) every generalized-convexity predicate is relative to.
struct MapTriple {
  PointMap e = pointmaps::Identity{};
  PointMap f = pointmaps::Identity{};
  BiMap g = bimaps::LogBased{};
};

// ---------------------------------------------------------------------------
// Scalar fields and set predicates. Both are cheap handles onto immutable,
// shared descriptor trees and refer to each other (sublevel sets, extended
// indicators), hence the two-phase declaration.

enum class DifferentialKind { Analytic, FiniteDifference, None };

class SetPredicate;

class ScalarField {
 public:
  struct Node;

  static ScalarField squared_distance(Point anchor);
  static ScalarField distance(Point anchor);
  /// x -> <weights, x> in ambient coordinates (for the hyperboloid with
  /// weights = e_n this is the height x_n = cosh d(x, origin)).
  static ScalarField linear_height(Eigen::VectorXd weights);
  static ScalarField negated(ScalarField inner);
  /// Requires every weight >= 0. An empty list is the zero field.
  static ScalarField weighted_sum(std::vector<std::pair<double, ScalarField>> terms);
  static ScalarField product(ScalarField lhs, ScalarField rhs);
  /// `inner` on `domain`, +infinity outside.
  static ScalarField indicator_extended(ScalarField inner, SetPredicate domain);
  /// `height` at `at`, zero elsewhere.
  static ScalarField spike(Point at, double height);

  ScalarField with_differential(DifferentialKind kind) const;
  ScalarField with_lsc(bool lsc) const;

  const Node& node() const { return *node_; }
  bool lower_semicontinuous() const;
  bool continuous() const;
  /// True if the field can take the value +infinity.
  bool extended_valued() const;
  DifferentialKind differential_kind() const;

 private:
  explicit ScalarField(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class SetPredicate {
 public:
  struct Node;

  /// Closed metric ball {x : d(x, center) <= radius}.
  static SetPredicate metric_ball(Point center, double radius);
  /// {x : h(x) <= level}.
  static SetPredicate sublevel(ScalarField h, double level);
  static SetPredicate finite_union(std::vector<SetPredicate> members);
  static SetPredicate intersection(std::vector<SetPredicate> members);
  /// keep \ remove.
  static SetPredicate difference(SetPredicate keep, SetPredicate remove);

  const Node& node() const { return *node_; }
  bool closed() const;

 private:
  explicit SetPredicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

namespace fields {
struct SquaredDistance {
  Point anchor;
};
struct Distance {
  Point anchor;
};
struct LinearHeight {
  Eigen::VectorXd weights;
};
struct Negated {
  ScalarField inner;
};
struct WeightedSum {
  std::vector<std::pair<double, ScalarField>> terms;
};
struct Product {
  ScalarField lhs;
  ScalarField rhs;
};
struct IndicatorExtended {
  ScalarField inner;
  SetPredicate domain;
};
struct Spike {
  Point at;
  double height = 0.0;
};
}  // namespace fields

namespace sets {
struct MetricBall {
  Point center;
  double radius = 0.0;
};
struct Sublevel {
  ScalarField field;
  double level = 0.0;
};
struct Union {
  std::vector<SetPredicate> members;
};
struct Intersection {
  std::vector<SetPredicate> members;
};
struct Difference {
  SetPredicate keep;
  SetPredicate remove;
};
}  // namespace sets

struct ScalarField::Node {
  std::variant<fields::SquaredDistance, fields::Distance, fields::LinearHeight, fields::Negated,
               fields::WeightedSum, fields::Product, fields::IndicatorExtended, fields::Spike>
      kind;
  DifferentialKind differential = DifferentialKind::Analytic;
  // Explicit override of the derived lower-semicontinuity flag, if any.
  int lsc_override = -1;
};

struct SetPredicate::Node {
  std::variant<sets::MetricBall, sets::Sublevel, sets::Union, sets::Intersection, sets::Difference>
      kind;
};

/// Value in (-inf, +inf]; +inf only for extended indicators off their domain.
double eval_scalar(const Manifold& m, const ScalarField& h, const Point& x);

/// Metric gradient, so that dH_x(v) = <grad, v>_x. Uses the analytic rule of
/// the descriptor, or central differences along geodesic probes when the
/// field is marked finite-difference.
TangentVector eval_differential(const Manifold& m, const ScalarField& h, const Point& x);
/// Gradient assembled from central differences along an orthonormal tangent
/// basis: (h(exp_x(t e)) - h(exp_x(-t e))) / 2t.
TangentVector fd_differential(const Manifold& m, const ScalarField& h, const Point& x);
/// Central difference of h along the geodesic with initial velocity v.
double fd_directional(const Manifold& m, const ScalarField& h, const TangentVector& v);

/// Signed membership excess: <= 0 exactly on members. For a ball this is
/// d(x, c) - r, for a sublevel set h(x) - t.
double set_excess(const Manifold& m, const SetPredicate& set, const Point& x);
bool set_contains(const Manifold& m, const SetPredicate& set, const Point& x);

std::string describe(const ScalarField& h);
std::string describe(const SetPredicate& set);

}  // namespace geoinvex
