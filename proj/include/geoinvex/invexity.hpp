#pragma once

// Sampling-based checkers for (E,F)-invex sets, (E,F)-preinvex and (E,F)-invex
// functions and Condition A, plus harnesses for the structural theorems.
//
// Sampling can only falsify: a passing check reports HOLDS_ON_SAMPLES, never
// a proof. Violations are one-sided, gap > scheme.tol.

#include <utility>
#include <vector>

#include "geoinvex/geometry.hpp"
#include "geoinvex/maps.hpp"
#include "geoinvex/report.hpp"
#include "geoinvex/sampling.hpp"

namespace geoinvex {

/// Whether a theorem harness still runs its conclusion after a premise
/// failed. Demonstration runs never count as falsification.
enum class HarnessMode { SkipOnPremiseFailure, Demonstrate };

enum class ConditionAPart { A1, A2 };

/// A single evaluated instance of a defining inequality; gap > 0 means it
/// fails by that amount.
struct SampleValue {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

// Single-sample evaluators. The checkers are loops over these; they are
// public so that reported witnesses can be replayed in isolation.

/// Flat chart: excess of F(s1) + mu G(E(r1), F(s1)) over A.
SampleValue invex_set_flat_sample(const Manifold& m, const SetPredicate& a, const MapTriple& maps,
                                  const Point& r1, const Point& s1, double mu);
/// Excess over B of beta(s), beta(0) = F(s1), beta'(0) = G(E(r1), F(s1)).
SampleValue geodesic_invex_set_sample(const Manifold& m, const SetPredicate& b,
                                      const MapTriple& maps, const Point& r1, const Point& s1,
                                      double s);
/// lhs = H(beta(s)), rhs = s H(E(r1)) + (1 - s) H(F(s1)), gap = lhs - rhs.
SampleValue preinvex_sample(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                            const Point& r1, const Point& s1, double s);
/// lhs = H(E(r1)) - H(F(s1)), rhs = dH_{F(s1)} G(E(r1), F(s1)), gap = rhs - lhs.
SampleValue invex_function_sample(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                                  const Point& r1, const Point& s1);
/// Norm of the difference between the transported-back G value and the
/// required multiple of G(E(r1), F(s1)); lhs/rhs carry the two norms.
SampleValue condition_a_sample(const Manifold& m, const MapTriple& maps, const Point& r1,
                               const Point& s1, double s, ConditionAPart part);

CheckReport check_invex_set_flat(const Manifold& m, const SetPredicate& a, const MapTriple& maps,
                                 const SampleScheme& scheme);
CheckReport check_geodesic_invex_set(const Manifold& m, const SetPredicate& b,
                                     const MapTriple& maps, const SampleScheme& scheme);
/// Strict mode flags every s in (0, 1) with d(E(r1), F(s1)) above the strict
/// distance floor where lhs - rhs > -tol, i.e. where the inequality is not
/// strict by a margin of at least tol.
CheckReport check_preinvex(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                           const SampleScheme& scheme, bool strict = false);
CheckReport check_invex_function(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                                 const SampleScheme& scheme);
CheckReport check_condition_a(const Manifold& m, const MapTriple& maps, const SampleScheme& scheme);

CheckReport check_sum_preinvex(const Manifold& m,
                               const std::vector<std::pair<double, ScalarField>>& terms,
                               const MapTriple& maps, const SampleScheme& scheme);
CheckReport check_level_set_invex(const Manifold& m, const ScalarField& h, double level,
                                  const MapTriple& maps, const SampleScheme& scheme,
                                  HarnessMode mode = HarnessMode::Demonstrate);
CheckReport theorem_preinvex_implies_invex(const Manifold& m, const ScalarField& h,
                                           const MapTriple& maps, const SampleScheme& scheme,
                                           HarnessMode mode = HarnessMode::SkipOnPremiseFailure);
CheckReport theorem_invex_plus_a_implies_preinvex(
    const Manifold& m, const ScalarField& h, const MapTriple& maps, const SampleScheme& scheme,
    HarnessMode mode = HarnessMode::SkipOnPremiseFailure);

/// Combines premise reports with an optional conclusion report into a
/// harness report: falsified iff every premise held and the conclusion was
/// violated.
CheckReport assemble_harness(std::string name, std::vector<CheckReport> premises,
                             std::optional<CheckReport> conclusion);

SchemeEcho echo(const SampleScheme& scheme);

}  // namespace geoinvex
