#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <vector>

#include "geoinvex/geometry.hpp"
#include "geoinvex/sampling.hpp"

namespace testing_support {

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// A cap tilted so that both the north pole and (1, 0, 0) lie inside it.
inline geoinvex::Manifold tilted_cap() {
  return geoinvex::Manifold::sphere_cap(vec({1.0, 0.0, 1.0}), 1.0);
}

/// The three models at dimension 2, the cap centered at the north pole.
inline std::vector<geoinvex::Manifold> models() {
  return {geoinvex::Manifold::euclidean(2), geoinvex::Manifold::sphere_cap(vec({0.0, 0.0, 1.0}), 1.2),
          geoinvex::Manifold::hyperboloid(2)};
}

/// A random tangent at p with intrinsic length at most `radius`.
inline geoinvex::TangentVector random_tangent(const geoinvex::Manifold& m, const geoinvex::Point& p, double radius,
                                              geoinvex::Rng& rng) {
  const auto basis = m.tangent_basis(p);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p.coords.size());
  for (const auto& b : basis) v += rng.normal() * b.comps;
  const double n = std::sqrt(std::max(0.0, m.inner(m.tangent(p, v), m.tangent(p, v))));
  if (n == 0.0) return m.zero_tangent(p);
  return m.tangent(p, v * (radius * rng.uniform() / n));
}

}  // namespace testing_support
