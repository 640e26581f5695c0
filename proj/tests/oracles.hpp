#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's closed forms: geodesics and transport come from integrating the
// embedded ODEs, lengths from polyline quadrature, convexity from direct
// coordinate algebra.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;

enum class Model { Sphere, Hyperboloid };

inline double minkowski(const Vec& a, const Vec& b) {
  const Eigen::Index n = a.size() - 1;
  return a.head(n).dot(b.head(n)) - a(n) * b(n);
}

inline double form(Model m, const Vec& a, const Vec& b) { return m == Model::Sphere ? a.dot(b) : minkowski(a, b); }

struct Flow {
  Vec x;
  Vec v;
  std::vector<Vec> w;
};

// State derivative of the geodesic equation of the embedded model together
// with parallel transport of the w's along it:
//   sphere:      x'' = -|x'|^2 x,      W' = -(W . x') x
//   hyperboloid: x'' = <x',x'>_M x,    W' = <W, x'>_M x
inline Flow rate(Model m, const Flow& s) {
  Flow d;
  d.x = s.v;
  const double speed2 = form(m, s.v, s.v);
  d.v = (m == Model::Sphere ? -speed2 : speed2) * s.x;
  for (const Vec& w : s.w) {
    const double c = form(m, w, s.v);
    d.w.push_back((m == Model::Sphere ? -c : c) * s.x);
  }
  return d;
}

inline Flow axpy(const Flow& a, double h, const Flow& d) {
  Flow out{a.x + h * d.x, a.v + h * d.v, {}};
  for (std::size_t i = 0; i < a.w.size(); ++i) out.w.push_back(a.w[i] + h * d.w[i]);
  return out;
}

/// Classical RK4 from t = 0 to t = t_end.
inline Flow integrate(Model m, const Vec& p, const Vec& v, std::vector<Vec> w, double t_end = 1.0,
                      int steps = 4000) {
  Flow s{p, v, std::move(w)};
  const double h = t_end / steps;
  for (int k = 0; k < steps; ++k) {
    const Flow k1 = rate(m, s);
    const Flow k2 = rate(m, axpy(s, h / 2, k1));
    const Flow k3 = rate(m, axpy(s, h / 2, k2));
    const Flow k4 = rate(m, axpy(s, h, k3));
    s.x += h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    s.v += h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
    for (std::size_t i = 0; i < s.w.size(); ++i) s.w[i] += h / 6 * (k1.w[i] + 2 * k2.w[i] + 2 * k3.w[i] + k4.w[i]);
  }
  return s;
}

/// Length of the curve c on [0, 1] as the limit of inscribed polylines;
/// chord lengths use the ambient form (spacelike chords on the hyperboloid).
inline double polyline_length(Model m, const std::function<Vec(double)>& c, int pieces = 20000) {
  double total = 0.0;
  Vec prev = c(0.0);
  for (int k = 1; k <= pieces; ++k) {
    const Vec cur = c(static_cast<double>(k) / pieces);
    const Vec d = cur - prev;
    total += std::sqrt(std::max(0.0, form(m, d, d)));
    prev = cur;
  }
  return total;
}

/// A reparametrization of the minimizing geodesic from p to q obtained by
/// normalizing the straight chord; its length is d(p, q).
inline std::function<Vec(double)> normalized_chord(Model m, const Vec& p, const Vec& q) {
  return [=](double t) -> Vec {
    const Vec y = (1.0 - t) * p + t * q;
    if (m == Model::Sphere) return y / y.norm();
    return y / std::sqrt(-minkowski(y, y));
  };
}

// ---------------------------------------------------------------------------
// Classical convexity on R^n, coded directly.

/// Signed excess: <= 0 inside the set.
using Excess = std::function<double(const Vec&)>;
using Field = std::function<double(const Vec&)>;
using Affine = std::function<Vec(const Vec&)>;

inline Excess ball(const Vec& c, double r) {
  return [=](const Vec& x) { return (x - c).norm() - r; };
}
inline Excess join_union(Excess a, Excess b) {
  return [=](const Vec& x) { return std::min(a(x), b(x)); };
}
inline Excess cut(Excess keep, Excess remove) {
  return [=](const Vec& x) { return std::max(keep(x), -remove(x)); };
}
inline Excess half_space(const Vec& w, double level) {
  return [=](const Vec& x) { return w.dot(x) - level; };
}

struct Violation {
  std::size_t pair;
  double param;
  double gap;
};

/// (E,F)-convex set test: for r1, s1 in A and each mu of the grid,
/// mu E(r1) + (1 - mu) F(s1) must lie in A. One-sided with tolerance tol.
inline std::vector<Violation> ef_convex_set(const Excess& a, const Affine& e, const Affine& f,
                                            const std::vector<std::pair<Vec, Vec>>& pairs,
                                            const std::vector<double>& grid, double tol) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Vec& r1 = pairs[i].first;
    const Vec& s1 = pairs[i].second;
    if (a(r1) > 0.0 || a(s1) > 0.0) continue;
    for (double mu : grid) {
      const double ex = a(mu * e(r1) + (1.0 - mu) * f(s1));
      if (ex > tol) out.push_back({i, mu, ex});
    }
  }
  return out;
}

/// Classical convex-function test: h(s x + (1 - s) y) <= s h(x) + (1 - s) h(y).
inline std::vector<Violation> convex_function(const Field& h, const Affine& e, const Affine& f,
                                              const std::vector<std::pair<Vec, Vec>>& pairs,
                                              const std::vector<double>& grid, double tol) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Vec x = e(pairs[i].first);
    const Vec y = f(pairs[i].second);
    for (double s : grid) {
      const double gap = h(s * x + (1.0 - s) * y) - (s * h(x) + (1.0 - s) * h(y));
      if (gap > tol) out.push_back({i, s, gap});
    }
  }
  return out;
}

}  // namespace oracle
