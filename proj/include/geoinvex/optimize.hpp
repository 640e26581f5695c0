#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "geoinvex/geometry.hpp"
#include "geoinvex/invexity.hpp"
#include "geoinvex/maps.hpp"
#include "geoinvex/report.hpp"
#include "geoinvex/sampling.hpp"

namespace geoinvex {

namespace steps {
struct Fixed {
  double eta = 0.1;
};
/// Armijo backtracking from `initial`: accept t once
/// H(exp_x(-t g)) <= H(x) - armijo * t * |g|^2, else t *= shrink.
struct Backtracking {
  double initial = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
};
}  // namespace steps

struct DescentConfig {
  std::variant<steps::Fixed, steps::Backtracking> step = steps::Backtracking{};
  int max_iters = 1000;
  double grad_tol = 1e-8;
  // Also converged once an accepted step lowers H by at most
  // value_tol * (1 + |H|): the objective no longer resolves the progress.
  double value_tol = 1e-14;
  // Nonsmooth objectives: direction -sigma from a proximal certificate when
  // the differential is unavailable, diminishing steps eta / sqrt(k + 1).
  bool subgradient_mode = false;
  bool keep_trajectory = false;

  void validate() const;
};

enum class DescentStatus { Converged, MaxIterations, Stalled };

std::string to_string(DescentStatus s);

struct SolveResult {
  Point minimizer;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  DescentStatus status = DescentStatus::MaxIterations;
  double final_step_norm = 0.0;
  // Accepted iterates, start included (only with keep_trajectory).
  std::vector<Point> trajectory;
  std::vector<double> values;
};

/// x <- exp_x(-t grad H(x)). Steps that leave `feasible`, leave the chart or
/// increase H are halved (at most 30 times) and otherwise rejected, so
/// accepted values never increase and every iterate stays feasible.
///
/// Throws InfeasibleStart when start is outside feasible or dom(H).
SolveResult geodesic_descent(const Manifold& m, const ScalarField& h, const Point& start,
                             const DescentConfig& cfg,
                             const std::optional<SetPredicate>& feasible = std::nullopt);

struct MultistartOutcome {
  CheckReport report;
  std::vector<SolveResult> runs;
};

/// Draws n_starts feasible seeds from the scheme's sampler, descends from
/// each and compares the objective values reached. The premise (H preinvex
/// on the scheme) is checked first; a value spread above spread_tol with the
/// premise met is a falsification event.
MultistartOutcome multistart_local_global(const Manifold& m, const ScalarField& h,
                                          const MapTriple& maps,
                                          const std::optional<SetPredicate>& feasible,
                                          int n_starts, const DescentConfig& cfg,
                                          const SampleScheme& scheme,
                                          HarnessMode mode = HarnessMode::SkipOnPremiseFailure);

/// Checks that the near-optimal pool of `runs` spans a geodesic (E,F)-invex
/// set (approximated by the sublevel set at best + opt tolerance), and for
/// strictly preinvex H that the pool diameter stays below diameter_tol.
CheckReport solution_set_invex(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                               const std::optional<SetPredicate>& feasible,
                               const std::vector<SolveResult>& runs, const SampleScheme& scheme,
                               bool strict = false);

}  // namespace geoinvex
