#pragma once

namespace geoinvex {

/// Every numerical threshold used by the toolkit. Defaults are the values the
/// shipped scenarios are calibrated against; scenarios may override any of
/// them.
struct Tolerances {
  // Point invariants: |<x,x> - target| <= point_tol * (1 + |x|^2).
  double point_tol = 1e-12;
  // Tangency: |<p,v>| <= tangent_tol * (1 + |p| |v|).
  double tangent_tol = 1e-10;
  // Drift below this is silently re-projected, above it is an error.
  double reproject_tol = 1e-8;
  // One-sided violation tolerance of the checkers.
  double violation_tol = 1e-8;
  // Central difference step along geodesic probes.
  double fd_step = 1e-5;
  // Pairs closer than this are skipped by the strict preinvexity check.
  double strict_min_distance = 1e-10;
  // Relative agreement required between analytic and finite-difference
  // differentials.
  double differential_rel_tol = 1e-6;
  // Multistart value spread below which local minima count as one global.
  double spread_tol = 1e-6;
  // Near-optimality: value <= best + opt_rel_tol * (1 + |best|).
  double opt_rel_tol = 1e-8;
  // Pool diameter allowed for strictly preinvex objectives.
  double diameter_tol = 1e-6;
  // Floor of the halving sweep over neighborhood radii.
  double mu_floor = 1e-4;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace geoinvex
