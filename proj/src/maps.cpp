#include "geoinvex/maps.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "geoinvex/errors.hpp"

namespace geoinvex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string coords_str(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

bool near(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  return a.size() == b.size() && (a - b).norm() <= tol * std::max(1.0, b.norm());
}

}  // namespace

// ---------------------------------------------------------------------------
// Point maps

PointMap make_contraction(Point center, double factor) {
  if (!(factor >= 0.0 && factor <= 1.0)) {
    throw DescriptorError("geodesic contraction factor must lie in [0, 1]");
  }
  return pointmaps::GeodesicContraction{std::move(center), factor};
}

Point eval_point_map(const Manifold& m, const PointMap& map, const Point& x) {
  m.require_chart(x, "eval_point_map");
  return std::visit(
      Overloaded{
          [&](const pointmaps::Identity&) { return x; },
          [&](const pointmaps::Constant& c) {
            m.require_chart(c.value, "constant map");
            return c.value;
          },
          [&](const pointmaps::GeodesicContraction& c) {
            m.require_chart(c.center, "geodesic contraction");
            if (c.factor == 0.0) return c.center;
            if (c.factor == 1.0) return x;
            return m.exp_map(m.log_map(c.center, x).scaled(c.factor));
          },
          [&](const pointmaps::CoordinateAffine& a) {
            if (m.kind() != ManifoldKind::Euclidean) {
              throw DescriptorError("coordinate_affine is only defined on Euclidean charts");
            }
            if (a.matrix.rows() != m.dim() || a.matrix.cols() != m.dim() ||
                a.offset.size() != m.dim()) {
              throw DescriptorError("coordinate_affine has the wrong shape for this chart");
            }
            return m.point(a.matrix * x.coords + a.offset);
          }},
      map);
}

std::string describe(const PointMap& map) {
  return std::visit(
      Overloaded{[](const pointmaps::Identity&) { return std::string("identity"); },
                 [](const pointmaps::Constant& c) { return "constant(" + coords_str(c.value.coords) + ")"; },
                 [](const pointmaps::GeodesicContraction& c) {
                   std::ostringstream os;
                   os.precision(17);
                   os << "geodesic_contraction(" << coords_str(c.center.coords) << ", " << c.factor << ")";
                   return os.str();
                 },
                 [](const pointmaps::CoordinateAffine&) { return std::string("coordinate_affine"); }},
      map);
}

// ---------------------------------------------------------------------------
// Bi-maps

TangentVector eval_bimap(const Manifold& m, const BiMap& g, const Point& a, const Point& b) {
  m.require_chart(a, "eval_bimap");
  m.require_chart(b, "eval_bimap");
  return std::visit(
      Overloaded{
          [&](const bimaps::LogBased&) { return m.log_map(b, a); },
          [&](const bimaps::ScaledLog& s) { return m.log_map(b, a).scaled(s.factor); },
          [&](const bimaps::EuclideanDifference&) {
            if (m.kind() != ManifoldKind::Euclidean) {
              throw DescriptorError("euclidean_difference is only defined on Euclidean charts");
            }
            return TangentVector{b, a.coords - b.coords};
          },
          [&](const bimaps::CustomTable& t) {
            for (const auto& e : t.entries) {
              if (near(e.a, a.coords, t.match_tol) && near(e.b, b.coords, t.match_tol)) {
                return m.tangent(b, e.value);
              }
            }
            throw DescriptorError("custom_table has no entry for a=" + coords_str(a.coords) +
                                  ", b=" + coords_str(b.coords));
          }},
      g);
}

std::string describe(const BiMap& g) {
  return std::visit(Overloaded{[](const bimaps::LogBased&) { return std::string("log_based"); },
                               [](const bimaps::ScaledLog& s) {
                                 std::ostringstream os;
                                 os.precision(17);
                                 os << "scaled_log(" << s.factor << ")";
                                 return os.str();
                               },
                               [](const bimaps::EuclideanDifference&) {
                                 return std::string("euclidean_difference");
                               },
                               [](const bimaps::CustomTable& t) {
                                 return "custom_table(" + std::to_string(t.entries.size()) + ")";
                               }},
                    g);
}

// ---------------------------------------------------------------------------
// Scalar field construction

namespace {

std::shared_ptr<const ScalarField::Node> field_node(decltype(ScalarField::Node::kind) kind) {
  auto n = std::make_shared<ScalarField::Node>();
  n->kind = std::move(kind);
  return n;
}

std::shared_ptr<const SetPredicate::Node> set_node(decltype(SetPredicate::Node::kind) kind) {
  auto n = std::make_shared<SetPredicate::Node>();
  n->kind = std::move(kind);
  return n;
}

}  // namespace

ScalarField ScalarField::squared_distance(Point anchor) {
  return ScalarField(field_node(fields::SquaredDistance{std::move(anchor)}));
}

ScalarField ScalarField::distance(Point anchor) {
  return ScalarField(field_node(fields::Distance{std::move(anchor)}));
}

ScalarField ScalarField::linear_height(Eigen::VectorXd weights) {
  return ScalarField(field_node(fields::LinearHeight{std::move(weights)}));
}

ScalarField ScalarField::negated(ScalarField inner) {
  if (inner.extended_valued()) {
    throw DescriptorError("negating an extended-valued field would produce -infinity");
  }
  return ScalarField(field_node(fields::Negated{std::move(inner)}));
}

ScalarField ScalarField::weighted_sum(std::vector<std::pair<double, ScalarField>> terms) {
  for (const auto& [alpha, f] : terms) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
      throw DescriptorError("weighted_sum coefficients must be finite and nonnegative");
    }
  }
  return ScalarField(field_node(fields::WeightedSum{std::move(terms)}));
}

ScalarField ScalarField::product(ScalarField lhs, ScalarField rhs) {
  if (lhs.extended_valued() || rhs.extended_valued()) {
    throw DescriptorError("product of extended-valued fields is not supported");
  }
  return ScalarField(field_node(fields::Product{std::move(lhs), std::move(rhs)}));
}

ScalarField ScalarField::indicator_extended(ScalarField inner, SetPredicate domain) {
  return ScalarField(field_node(fields::IndicatorExtended{std::move(inner), std::move(domain)}));
}

ScalarField ScalarField::spike(Point at, double height) {
  if (!std::isfinite(height)) throw DescriptorError("spike height must be finite");
  return ScalarField(field_node(fields::Spike{std::move(at), height}));
}

ScalarField ScalarField::with_differential(DifferentialKind kind) const {
  auto n = std::make_shared<Node>(*node_);
  n->differential = kind;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::with_lsc(bool lsc) const {
  auto n = std::make_shared<Node>(*node_);
  n->lsc_override = lsc ? 1 : 0;
  return ScalarField(std::move(n));
}

DifferentialKind ScalarField::differential_kind() const { return node_->differential; }

bool ScalarField::continuous() const {
  return std::visit(
      Overloaded{[](const fields::Negated& n) { return n.inner.continuous(); },
                 [](const fields::WeightedSum& s) {
                   for (const auto& t : s.terms) {
                     if (!t.second.continuous()) return false;
                   }
                   return true;
                 },
                 [](const fields::Product& p) { return p.lhs.continuous() && p.rhs.continuous(); },
                 [](const fields::IndicatorExtended&) { return false; },
                 [](const fields::Spike& s) { return s.height == 0.0; },
                 [](const auto&) { return true; }},
      node_->kind);
}

bool ScalarField::lower_semicontinuous() const {
  if (node_->lsc_override >= 0) return node_->lsc_override == 1;
  return std::visit(
      Overloaded{[](const fields::Negated& n) { return n.inner.continuous(); },
                 [](const fields::WeightedSum& s) {
                   for (const auto& t : s.terms) {
                     if (!t.second.lower_semicontinuous()) return false;
                   }
                   return true;
                 },
                 [](const fields::Product& p) { return p.lhs.continuous() && p.rhs.continuous(); },
                 [](const fields::IndicatorExtended& i) {
                   return i.inner.lower_semicontinuous() && i.domain.closed();
                 },
                 [](const fields::Spike& s) { return s.height <= 0.0; },
                 [](const auto&) { return true; }},
      node_->kind);
}

bool ScalarField::extended_valued() const {
  return std::visit(Overloaded{[](const fields::Negated& n) { return n.inner.extended_valued(); },
                               [](const fields::WeightedSum& s) {
                                 for (const auto& t : s.terms) {
                                   if (t.second.extended_valued()) return true;
                                 }
                                 return false;
                               },
                               [](const fields::Product& p) {
                                 return p.lhs.extended_valued() || p.rhs.extended_valued();
                               },
                               [](const fields::IndicatorExtended&) { return true; },
                               [](const auto&) { return false; }},
                    node_->kind);
}

// ---------------------------------------------------------------------------
// Set predicates

SetPredicate SetPredicate::metric_ball(Point center, double radius) {
  if (!(radius >= 0.0)) throw DescriptorError("metric_ball radius must be nonnegative");
  return SetPredicate(set_node(sets::MetricBall{std::move(center), radius}));
}

SetPredicate SetPredicate::sublevel(ScalarField h, double level) {
  return SetPredicate(set_node(sets::Sublevel{std::move(h), level}));
}

SetPredicate SetPredicate::finite_union(std::vector<SetPredicate> members) {
  if (members.empty()) throw DescriptorError("finite_union needs at least one member");
  return SetPredicate(set_node(sets::Union{std::move(members)}));
}

SetPredicate SetPredicate::intersection(std::vector<SetPredicate> members) {
  if (members.empty()) throw DescriptorError("intersection needs at least one member");
  return SetPredicate(set_node(sets::Intersection{std::move(members)}));
}

SetPredicate SetPredicate::difference(SetPredicate keep, SetPredicate remove) {
  return SetPredicate(set_node(sets::Difference{std::move(keep), std::move(remove)}));
}

bool SetPredicate::closed() const {
  return std::visit(Overloaded{[](const sets::MetricBall&) { return true; },
                               [](const sets::Sublevel& s) { return s.field.lower_semicontinuous(); },
                               [](const sets::Union& u) {
                                 for (const auto& s : u.members) {
                                   if (!s.closed()) return false;
                                 }
                                 return true;
                               },
                               [](const sets::Intersection& u) {
                                 for (const auto& s : u.members) {
                                   if (!s.closed()) return false;
                                 }
                                 return true;
                               },
                               [](const sets::Difference&) { return false; }},
                    node_->kind);
}

double set_excess(const Manifold& m, const SetPredicate& set, const Point& x) {
  return std::visit(
      Overloaded{[&](const sets::MetricBall& b) { return m.distance(x, b.center) - b.radius; },
                 [&](const sets::Sublevel& s) { return eval_scalar(m, s.field, x) - s.level; },
                 [&](const sets::Union& u) {
                   double best = kInf;
                   for (const auto& s : u.members) best = std::min(best, set_excess(m, s, x));
                   return best;
                 },
                 [&](const sets::Intersection& u) {
                   double worst = -kInf;
                   for (const auto& s : u.members) worst = std::max(worst, set_excess(m, s, x));
                   return worst;
                 },
                 [&](const sets::Difference& d) {
                   return std::max(set_excess(m, d.keep, x), -set_excess(m, d.remove, x));
                 }},
      set.node().kind);
}

bool set_contains(const Manifold& m, const SetPredicate& set, const Point& x) {
  return set_excess(m, set, x) <= 0.0;
}

// ---------------------------------------------------------------------------
// Evaluation

double eval_scalar(const Manifold& m, const ScalarField& h, const Point& x) {
  m.require_chart(x, "eval_scalar");
  return std::visit(
      Overloaded{
          [&](const fields::SquaredDistance& f) {
            const double d = m.distance(x, f.anchor);
            return d * d;
          },
          [&](const fields::Distance& f) { return m.distance(x, f.anchor); },
          [&](const fields::LinearHeight& f) {
            if (f.weights.size() != m.ambient_dim()) {
              throw DescriptorError("linear_height weights have the wrong dimension");
            }
            return f.weights.dot(x.coords);
          },
          [&](const fields::Negated& f) { return -eval_scalar(m, f.inner, x); },
          [&](const fields::WeightedSum& f) {
            double total = 0.0;
            for (const auto& [alpha, term] : f.terms) {
              if (alpha == 0.0) continue;  // 0 * inf = 0
              total += alpha * eval_scalar(m, term, x);
            }
            return total;
          },
          [&](const fields::Product& f) { return eval_scalar(m, f.lhs, x) * eval_scalar(m, f.rhs, x); },
          [&](const fields::IndicatorExtended& f) {
            if (!set_contains(m, f.domain, x)) return kInf;
            return eval_scalar(m, f.inner, x);
          },
          [&](const fields::Spike& f) { return m.distance(x, f.at) == 0.0 ? f.height : 0.0; }},
      h.node().kind);
}

namespace {

TangentVector analytic_differential(const Manifold& m, const ScalarField& h, const Point& x) {
  return std::visit(
      Overloaded{
          [&](const fields::SquaredDistance& f) { return m.log_map(x, f.anchor).scaled(-2.0); },
          [&](const fields::Distance& f) {
            const TangentVector l = m.log_map(x, f.anchor);
            const double d = m.norm(l);
            if (d == 0.0) throw NonDifferentiable("distance field is not differentiable at its anchor");
            return l.scaled(-1.0 / d);
          },
          [&](const fields::LinearHeight& f) { return m.gradient_from_ambient(x, f.weights); },
          [&](const fields::Negated& f) { return eval_differential(m, f.inner, x).scaled(-1.0); },
          [&](const fields::WeightedSum& f) {
            TangentVector g = m.zero_tangent(x);
            for (const auto& [alpha, term] : f.terms) {
              if (alpha == 0.0) continue;
              g.comps += alpha * eval_differential(m, term, x).comps;
            }
            return g;
          },
          [&](const fields::Product& f) {
            const double a = eval_scalar(m, f.lhs, x);
            const double b = eval_scalar(m, f.rhs, x);
            TangentVector g = eval_differential(m, f.rhs, x).scaled(a);
            g.comps += b * eval_differential(m, f.lhs, x).comps;
            return g;
          },
          [&](const fields::IndicatorExtended& f) {
            if (!set_contains(m, f.domain, x)) {
              throw NonDifferentiable("extended indicator is +infinity here");
            }
            return eval_differential(m, f.inner, x);
          },
          [&](const fields::Spike& f) {
            if (m.distance(x, f.at) == 0.0 && f.height != 0.0) {
              throw NonDifferentiable("spike field is not differentiable at its peak");
            }
            return m.zero_tangent(x);
          }},
      h.node().kind);
}

}  // namespace

double fd_directional(const Manifold& m, const ScalarField& h, const TangentVector& v) {
  const double t = m.tolerances().fd_step;
  const double fp = eval_scalar(m, h, m.exp_map(v.scaled(t)));
  const double fm = eval_scalar(m, h, m.exp_map(v.scaled(-t)));
  if (!std::isfinite(fp) || !std::isfinite(fm)) {
    throw NonDifferentiable("finite difference probe left the domain of the field");
  }
  return (fp - fm) / (2.0 * t);
}

TangentVector fd_differential(const Manifold& m, const ScalarField& h, const Point& x) {
  TangentVector g = m.zero_tangent(x);
  for (const TangentVector& e : m.tangent_basis(x)) g.comps += fd_directional(m, h, e) * e.comps;
  return g;
}

TangentVector eval_differential(const Manifold& m, const ScalarField& h, const Point& x) {
  m.require_chart(x, "eval_differential");
  switch (h.differential_kind()) {
    case DifferentialKind::Analytic:
      return analytic_differential(m, h, x);
    case DifferentialKind::FiniteDifference:
      return fd_differential(m, h, x);
    case DifferentialKind::None:
      break;
  }
  throw NonDifferentiable("field " + describe(h) + " carries no differential");
}

// ---------------------------------------------------------------------------
// Descriptions

std::string describe(const ScalarField& h) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{[&](const fields::SquaredDistance& f) {
                          os << "squared_distance(" << coords_str(f.anchor.coords) << ")";
                        },
                        [&](const fields::Distance& f) { os << "distance(" << coords_str(f.anchor.coords) << ")"; },
                        [&](const fields::LinearHeight& f) { os << "linear_height(" << coords_str(f.weights) << ")"; },
                        [&](const fields::Negated& f) { os << "negated(" << describe(f.inner) << ")"; },
                        [&](const fields::WeightedSum& f) {
                          os << "weighted_sum(";
                          for (std::size_t i = 0; i < f.terms.size(); ++i) {
                            os << (i ? ", " : "") << f.terms[i].first << "*" << describe(f.terms[i].second);
                          }
                          os << ")";
                        },
                        [&](const fields::Product& f) {
                          os << "product(" << describe(f.lhs) << ", " << describe(f.rhs) << ")";
                        },
                        [&](const fields::IndicatorExtended& f) {
                          os << "indicator_extended(" << describe(f.inner) << ", " << describe(f.domain) << ")";
                        },
                        [&](const fields::Spike& f) {
                          os << "spike(" << coords_str(f.at.coords) << ", " << f.height << ")";
                        }},
             h.node().kind);
  return os.str();
}

std::string describe(const SetPredicate& set) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{[&](const sets::MetricBall& b) {
                          os << "metric_ball(" << coords_str(b.center.coords) << ", " << b.radius << ")";
                        },
                        [&](const sets::Sublevel& s) { os << "sublevel(" << describe(s.field) << ", " << s.level << ")"; },
                        [&](const sets::Union& u) {
                          os << "finite_union(";
                          for (std::size_t i = 0; i < u.members.size(); ++i) os << (i ? ", " : "") << describe(u.members[i]);
                          os << ")";
                        },
                        [&](const sets::Intersection& u) {
                          os << "intersection(";
                          for (std::size_t i = 0; i < u.members.size(); ++i) os << (i ? ", " : "") << describe(u.members[i]);
                          os << ")";
                        },
                        [&](const sets::Difference& d) {
                          os << "difference(" << describe(d.keep) << ", " << describe(d.remove) << ")";
                        }},
             set.node().kind);
  return os.str();
}

}  // namespace geoinvex
