#include "geoinvex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "geoinvex/errors.hpp"

namespace geoinvex {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Euclidean:
      return "euclidean";
    case ManifoldKind::SphereCap:
      return "sphere_cap";
    case ManifoldKind::Hyperboloid:
      return "hyperboloid";
  }
  return "unknown";
}

double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size() - 1;
  return a.head(n).dot(b.head(n)) - a[n] * b[n];
}

Manifold Manifold::euclidean(int dim, Tolerances tol) {
  if (dim < 1) throw DescriptorError("euclidean manifold needs dim >= 1");
  return Manifold(ManifoldKind::Euclidean, dim, tol);
}

Manifold Manifold::sphere_cap(const Eigen::VectorXd& center, double radius, Tolerances tol) {
  if (center.size() < 2) throw DescriptorError("sphere cap center needs ambient dimension >= 2");
  const double n = center.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DescriptorError("sphere cap center must be nonzero");
  if (!(radius > 0.0 && radius < kPi / 2)) {
    throw DescriptorError("sphere cap radius must lie in (0, pi/2)");
  }
  Manifold m(ManifoldKind::SphereCap, static_cast<int>(center.size()) - 1, tol);
  m.cap_center_ = center / n;
  m.cap_radius_ = radius;
  return m;
}

Manifold Manifold::hyperboloid(int dim, Tolerances tol) {
  if (dim < 1) throw DescriptorError("hyperboloid needs dim >= 1");
  return Manifold(ManifoldKind::Hyperboloid, dim, tol);
}

double Manifold::form(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return kind_ == ManifoldKind::Hyperboloid ? minkowski(a, b) : a.dot(b);
}

double Manifold::cap_angle(const Eigen::VectorXd& x) const {
  const double c = cap_center_.dot(x);
  return std::atan2((x - c * cap_center_).norm(), c);
}

Eigen::VectorXd Manifold::normalize_point(const Eigen::VectorXd& coords, bool strict) const {
  if (coords.size() != ambient_dim()) {
    throw ChartMismatch("point has " + std::to_string(coords.size()) +
                        " coordinates, chart expects " + std::to_string(ambient_dim()));
  }
  if (!coords.allFinite()) throw OutOfChart("point has non-finite coordinates");
  const double threshold = strict ? tol_.point_tol : tol_.reproject_tol;
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return coords;
    case ManifoldKind::SphereCap: {
      const double n2 = coords.squaredNorm();
      const double drift = std::abs(n2 - 1.0) / std::max(1.0, n2);
      if (drift > threshold) {
        if (strict) throw OutOfChart("point " + describe(coords) + " is not on the unit sphere");
        throw InvariantDrift("sphere point drifted off the unit sphere");
      }
      return coords / std::sqrt(n2);
    }
    case ManifoldKind::Hyperboloid: {
      const double m = minkowski(coords, coords);
      const double drift = std::abs(m + 1.0) / std::max(1.0, coords.squaredNorm());
      if (coords[coords.size() - 1] <= 0.0) {
        throw OutOfChart("point " + describe(coords) + " is on the lower sheet");
      }
      if (drift > threshold) {
        if (strict) throw OutOfChart("point " + describe(coords) + " is not on the hyperboloid");
        throw InvariantDrift("hyperboloid point drifted off <x,x> = -1");
      }
      return coords / std::sqrt(-m);
    }
  }
  return coords;
}

Point Manifold::point(const Eigen::VectorXd& coords) const {
  Eigen::VectorXd x = normalize_point(coords, true);
  if (kind_ == ManifoldKind::SphereCap && !(cap_angle(x) < cap_radius_)) {
    throw OutOfChart("point " + describe(coords) + " lies outside the spherical cap");
  }
  return {chart(), std::move(x)};
}

Point Manifold::finish_point(const Eigen::VectorXd& coords) const {
  Eigen::VectorXd x = normalize_point(coords, false);
  if (kind_ == ManifoldKind::SphereCap && !(cap_angle(x) < cap_radius_)) {
    throw OutOfChart("result " + describe(x) + " leaves the spherical cap");
  }
  return {chart(), std::move(x)};
}

Point Manifold::lift(const Eigen::VectorXd& coords) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return point(coords);
    case ManifoldKind::SphereCap: {
      if (coords.size() != ambient_dim()) throw ChartMismatch("sphere lift needs ambient coordinates");
      const double n = coords.norm();
      if (!(n > 0.0)) throw OutOfChart("cannot lift the zero vector onto the sphere");
      return point(coords / n);
    }
    case ManifoldKind::Hyperboloid: {
      if (coords.size() != dim_ && coords.size() != ambient_dim()) {
        throw ChartMismatch("hyperboloid lift needs n or n+1 coordinates");
      }
      Eigen::VectorXd x(ambient_dim());
      x.head(dim_) = coords.head(dim_);
      x[dim_] = std::sqrt(1.0 + coords.head(dim_).squaredNorm());
      return point(x);
    }
  }
  return point(coords);
}

Point Manifold::origin() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(ambient_dim());
  if (kind_ == ManifoldKind::SphereCap) x = cap_center_;
  if (kind_ == ManifoldKind::Hyperboloid) x[dim_] = 1.0;
  return {chart(), x};
}

bool Manifold::contains(const Eigen::VectorXd& coords) const {
  try {
    point(coords);
    return true;
  } catch (const Error&) {
    return false;
  }
}

void Manifold::require_chart(const Point& p, const char* what) const {
  if (!(p.chart == chart()) || p.coords.size() != ambient_dim()) {
    throw ChartMismatch(std::string(what) + ": point belongs to " + to_string(p.chart.kind) + "(" +
                        std::to_string(p.chart.dim) + "), expected " + to_string(kind_) + "(" +
                        std::to_string(dim_) + ")");
  }
}

void Manifold::require_same_base(const TangentVector& v, const Point& p, const char* what) const {
  require_chart(v.base, what);
  const double scale = std::max(1.0, p.coords.norm());
  if ((v.base.coords - p.coords).norm() > 1e-9 * scale) {
    throw ChartMismatch(std::string(what) + ": tangent vector is based at " +
                        describe(v.base.coords) + ", expected " + describe(p.coords));
  }
}

Eigen::VectorXd Manifold::tangent_part(const Eigen::VectorXd& base, const Eigen::VectorXd& v) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return v;
    case ManifoldKind::SphereCap:
      return v - base.dot(v) * base;
    case ManifoldKind::Hyperboloid:
      return v + minkowski(base, v) * base;
  }
  return v;
}

TangentVector Manifold::tangent(const Point& base, const Eigen::VectorXd& comps) const {
  require_chart(base, "tangent");
  if (comps.size() != ambient_dim()) {
    throw ChartMismatch("tangent has " + std::to_string(comps.size()) + " components, expected " +
                        std::to_string(ambient_dim()));
  }
  if (!comps.allFinite()) throw TangencyViolation("tangent has non-finite components");
  if (kind_ != ManifoldKind::Euclidean) {
    const double off = std::abs(form(base.coords, comps));
    const double scale = std::max(1.0, base.coords.norm() * comps.norm());
    if (off > tol_.tangent_tol * scale) {
      throw TangencyViolation("vector " + describe(comps) + " is not tangent at " +
                              describe(base.coords));
    }
  }
  return {base, tangent_part(base.coords, comps)};
}

TangentVector Manifold::finish_tangent(const Point& base, const Eigen::VectorXd& comps) const {
  if (kind_ != ManifoldKind::Euclidean) {
    const double off = std::abs(form(base.coords, comps));
    const double scale = std::max(1.0, base.coords.norm() * comps.norm());
    if (off > tol_.reproject_tol * scale) {
      throw InvariantDrift("tangent drifted off T_p by " + std::to_string(off));
    }
  }
  return {base, tangent_part(base.coords, comps)};
}

TangentVector Manifold::zero_tangent(const Point& base) const {
  require_chart(base, "zero_tangent");
  return {base, Eigen::VectorXd::Zero(ambient_dim())};
}

TangentVector Manifold::project_tangent(const Point& base, const Eigen::VectorXd& ambient) const {
  require_chart(base, "project_tangent");
  return {base, tangent_part(base.coords, ambient)};
}

TangentVector Manifold::gradient_from_ambient(const Point& base,
                                              const Eigen::VectorXd& euclidean_grad) const {
  require_chart(base, "gradient_from_ambient");
  if (kind_ != ManifoldKind::Hyperboloid) return {base, tangent_part(base.coords, euclidean_grad)};
  // Raise the index with the Minkowski metric before projecting.
  Eigen::VectorXd g = euclidean_grad;
  g[dim_] = -g[dim_];
  return {base, tangent_part(base.coords, g)};
}

std::vector<TangentVector> Manifold::tangent_basis(const Point& base) const {
  require_chart(base, "tangent_basis");
  std::vector<TangentVector> basis;
  basis.reserve(dim_);
  const Eigen::Index n = ambient_dim();
  for (Eigen::Index i = 0; i < n && static_cast<int>(basis.size()) < dim_; ++i) {
    Eigen::VectorXd v = tangent_part(base.coords, Eigen::VectorXd::Unit(n, i));
    const double initial = std::sqrt(std::max(0.0, form(v, v)));
    for (const TangentVector& b : basis) v -= form(v, b.comps) * b.comps;
    const double len = std::sqrt(std::max(0.0, form(v, v)));
    if (len > 1e-6 * std::max(1.0, initial)) basis.push_back({base, v / len});
  }
  return basis;
}

double Manifold::inner(const TangentVector& u, const TangentVector& v) const {
  require_chart(u.base, "inner");
  require_chart(v.base, "inner");
  return form(u.comps, v.comps);
}

double Manifold::norm(const TangentVector& v) const {
  return std::sqrt(std::max(0.0, inner(v, v)));
}

Point Manifold::exp_map(const TangentVector& v) const {
  require_chart(v.base, "exp_map");
  const Eigen::VectorXd& p = v.base.coords;
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return {chart(), p + v.comps};
    case ManifoldKind::SphereCap: {
      const double theta = norm(v);
      if (theta >= kPi) throw OutOfChart("sphere exp with |v| >= pi leaves the unique-geodesic regime");
      if (theta == 0.0) return v.base;
      return finish_point(std::cos(theta) * p + (std::sin(theta) / theta) * v.comps);
    }
    case ManifoldKind::Hyperboloid: {
      const double theta = norm(v);
      if (theta == 0.0) return v.base;
      return finish_point(std::cosh(theta) * p + (std::sinh(theta) / theta) * v.comps);
    }
  }
  return v.base;
}

TangentVector Manifold::log_map(const Point& p, const Point& q) const {
  require_chart(p, "log_map");
  require_chart(q, "log_map");
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return {p, q.coords - p.coords};
    case ManifoldKind::SphereCap: {
      const double c = p.coords.dot(q.coords);
      const Eigen::VectorXd u = q.coords - c * p.coords;
      const double un = u.norm();
      if (un == 0.0) {
        if (c < 0.0) throw OutOfChart("log_map of antipodal points is undefined");
        return zero_tangent(p);
      }
      return finish_tangent(p, (std::atan2(un, c) / un) * u);
    }
    case ManifoldKind::Hyperboloid: {
      const double alpha = -minkowski(p.coords, q.coords);
      const Eigen::VectorXd u = q.coords - alpha * p.coords;
      double un = 0.0;
      double d = 0.0;
      if (alpha > 1.5) {
        un = std::sqrt((alpha - 1.0) * (alpha + 1.0));
        d = std::acosh(alpha);
      } else {
        un = std::sqrt(std::max(0.0, minkowski(u, u)));
        d = std::asinh(un);
      }
      if (un == 0.0) return zero_tangent(p);
      return finish_tangent(p, (d / un) * u);
    }
  }
  return zero_tangent(p);
}

double Manifold::distance(const Point& p, const Point& q) const {
  require_chart(p, "distance");
  require_chart(q, "distance");
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return (q.coords - p.coords).norm();
    case ManifoldKind::SphereCap: {
      const double c = p.coords.dot(q.coords);
      return std::atan2((q.coords - c * p.coords).norm(), c);
    }
    case ManifoldKind::Hyperboloid: {
      const double alpha = -minkowski(p.coords, q.coords);
      if (alpha > 1.5) return std::acosh(alpha);
      const Eigen::VectorXd u = q.coords - alpha * p.coords;
      return std::asinh(std::sqrt(std::max(0.0, minkowski(u, u))));
    }
  }
  return 0.0;
}

Point Manifold::geodesic_eval(const GeodesicSegment& seg, double s) const {
  return exp_map(seg.velocity.scaled(s));
}

TangentVector Manifold::geodesic_velocity(const GeodesicSegment& seg, double s) const {
  const Point x = geodesic_eval(seg, s);
  if (kind_ == ManifoldKind::Euclidean) return {x, seg.velocity.comps};
  const double theta = norm(seg.velocity);
  if (theta == 0.0) return zero_tangent(x);
  const Eigen::VectorXd& p = seg.start.coords;
  const Eigen::VectorXd e = seg.velocity.comps / theta;
  const double st = s * theta;
  Eigen::VectorXd dir = kind_ == ManifoldKind::SphereCap
                            ? Eigen::VectorXd(std::cos(st) * e - std::sin(st) * p)
                            : Eigen::VectorXd(std::cosh(st) * e + std::sinh(st) * p);
  return finish_tangent(x, theta * dir);
}

TangentVector Manifold::parallel_transport(const TangentVector& v, const GeodesicSegment& seg,
                                           double s) const {
  require_same_base(v, seg.start, "parallel_transport");
  const Point x = geodesic_eval(seg, s);
  if (kind_ == ManifoldKind::Euclidean) return {x, v.comps};
  const double theta = norm(seg.velocity);
  if (theta == 0.0) return {x, v.comps};
  // Only the component along the velocity rotates (boosts, on the
  // hyperboloid) in the plane spanned by the start point and the direction.
  const Eigen::VectorXd& p = seg.start.coords;
  const Eigen::VectorXd e = seg.velocity.comps / theta;
  const double a = form(v.comps, e);
  const double st = s * theta;
  Eigen::VectorXd e_s = kind_ == ManifoldKind::SphereCap
                            ? Eigen::VectorXd(std::cos(st) * e - std::sin(st) * p)
                            : Eigen::VectorXd(std::cosh(st) * e + std::sinh(st) * p);
  return finish_tangent(x, v.comps - a * e + a * e_s);
}

TangentVector Manifold::inverse_transport(const TangentVector& v, const GeodesicSegment& seg,
                                          double s) const {
  const Point x = geodesic_eval(seg, s);
  require_same_base(v, x, "inverse_transport");
  if (kind_ == ManifoldKind::Euclidean) return {seg.start, v.comps};
  const double theta = norm(seg.velocity);
  if (theta == 0.0) return {seg.start, v.comps};
  const Eigen::VectorXd& p = seg.start.coords;
  const Eigen::VectorXd e = seg.velocity.comps / theta;
  const double st = s * theta;
  Eigen::VectorXd e_s = kind_ == ManifoldKind::SphereCap
                            ? Eigen::VectorXd(std::cos(st) * e - std::sin(st) * p)
                            : Eigen::VectorXd(std::cosh(st) * e + std::sinh(st) * p);
  const double a = form(v.comps, e_s);
  return finish_tangent(seg.start, v.comps - a * e_s + a * e);
}

}  // namespace geoinvex
