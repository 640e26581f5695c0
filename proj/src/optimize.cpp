#include "geoinvex/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "geoinvex/errors.hpp"
#include "geoinvex/parallel.hpp"
#include "geoinvex/subgradient.hpp"

namespace geoinvex {

namespace {

constexpr int kMaxHalvings = 30;

bool feasible_point(const Manifold& m, const std::optional<SetPredicate>& feasible, const Point& x) {
  return !feasible || set_contains(m, *feasible, x);
}

// Descent direction source: the differential, or for nonsmooth objectives a
// verified proximal subgradient.
std::optional<TangentVector> direction(const Manifold& m, const ScalarField& h, const Point& x,
                                       const DescentConfig& cfg) {
  try {
    return eval_differential(m, h, x);
  } catch (const NonDifferentiable&) {
    if (!cfg.subgradient_mode) throw;
  }
  SampleScheme probe;
  probe.n_pairs = 64;
  probe.sampler = samplers::UniformBall{x, 1e-3};
  const auto certs = search_proximal_subgradient(m, h, x, default_lambda_grid(), 1e-3, probe);
  if (certs.empty()) return std::nullopt;
  return certs.front().sigma;
}

}  // namespace

std::string to_string(DescentStatus s) {
  switch (s) {
    case DescentStatus::Converged:
      return "CONVERGED";
    case DescentStatus::MaxIterations:
      return "MAX_ITERATIONS";
    case DescentStatus::Stalled:
      return "STALLED";
  }
  return "STALLED";
}

void DescentConfig::validate() const {
  if (max_iters < 1) throw DescriptorError("descent needs max_iters >= 1");
  if (!(grad_tol > 0.0)) throw DescriptorError("descent needs grad_tol > 0");
  if (!(value_tol >= 0.0)) throw DescriptorError("descent needs value_tol >= 0");
  if (const auto* f = std::get_if<steps::Fixed>(&step); f && !(f->eta > 0.0)) {
    throw DescriptorError("fixed step needs eta > 0");
  }
  if (const auto* b = std::get_if<steps::Backtracking>(&step)) {
    if (!(b->initial > 0.0)) throw DescriptorError("backtracking needs initial step > 0");
    if (!(b->shrink > 0.0 && b->shrink < 1.0)) throw DescriptorError("backtracking needs 0 < shrink < 1");
    if (!(b->armijo > 0.0 && b->armijo < 1.0)) throw DescriptorError("backtracking needs 0 < armijo < 1");
  }
}

SolveResult geodesic_descent(const Manifold& m, const ScalarField& h, const Point& start,
                             const DescentConfig& cfg, const std::optional<SetPredicate>& feasible) {
  cfg.validate();
  m.require_chart(start, "geodesic_descent");
  if (!feasible_point(m, feasible, start)) throw InfeasibleStart("start point is outside the feasible set");
  SolveResult r;
  r.minimizer = start;
  r.value = eval_scalar(m, h, start);
  if (!std::isfinite(r.value)) throw InfeasibleStart("start point is outside dom(H)");
  if (cfg.keep_trajectory) {
    r.trajectory.push_back(start);
    r.values.push_back(r.value);
  }

  const auto* fixed = std::get_if<steps::Fixed>(&cfg.step);
  const auto* backtrack = std::get_if<steps::Backtracking>(&cfg.step);
  for (int k = 0; k < cfg.max_iters; ++k) {
    const std::optional<TangentVector> g = direction(m, h, r.minimizer, cfg);
    if (!g) {
      r.status = DescentStatus::Stalled;
      return r;
    }
    const double gn = m.norm(*g);
    double t = fixed ? fixed->eta : backtrack->initial;
    if (cfg.subgradient_mode) t /= std::sqrt(static_cast<double>(k + 1));
    r.final_step_norm = t * gn;
    if (gn < cfg.grad_tol || (cfg.subgradient_mode && t * gn < cfg.grad_tol)) {
      r.converged = true;
      r.status = DescentStatus::Converged;
      return r;
    }

    const double previous = r.value;
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings && !accepted; ++halving) {
      if (halving > 0) t *= backtrack ? backtrack->shrink : 0.5;
      Point y;
      try {
        y = m.exp_map(g->scaled(-t));
      } catch (const OutOfChart&) {
        continue;
      }
      if (!feasible_point(m, feasible, y)) continue;
      const double fy = eval_scalar(m, h, y);
      const bool decrease = backtrack && !cfg.subgradient_mode ? fy <= r.value - backtrack->armijo * t * gn * gn
                                                                : fy <= r.value;
      if (!decrease) continue;
      r.minimizer = std::move(y);
      r.value = fy;
      accepted = true;
    }
    if (!accepted) {
      r.final_step_norm = t * gn;
      // A subgradient step that cannot decrease H even after halving has
      // shrunk below tolerance.
      r.converged = cfg.subgradient_mode && t * gn < cfg.grad_tol;
      r.status = r.converged ? DescentStatus::Converged : DescentStatus::Stalled;
      return r;
    }
    ++r.iterations;
    if (cfg.keep_trajectory) {
      r.trajectory.push_back(r.minimizer);
      r.values.push_back(r.value);
    }
    if (previous - r.value <= cfg.value_tol * (1.0 + std::abs(previous))) {
      r.converged = true;
      r.status = DescentStatus::Converged;
      return r;
    }
  }
  r.status = DescentStatus::MaxIterations;
  return r;
}

MultistartOutcome multistart_local_global(const Manifold& m, const ScalarField& h,
                                          const MapTriple& maps,
                                          const std::optional<SetPredicate>& feasible,
                                          int n_starts, const DescentConfig& cfg,
                                          const SampleScheme& scheme, HarnessMode mode) {
  if (n_starts < 1) throw DescriptorError("multistart needs n_starts >= 1");
  cfg.validate();
  MultistartOutcome out;

  std::vector<CheckReport> premises{check_preinvex(m, h, maps, scheme)};
  const bool premise_met = premises.front().verdict == Verdict::HoldsOnSamples;
  if (!premise_met && mode == HarnessMode::SkipOnPremiseFailure) {
    out.report = assemble_harness("multistart_local_global", std::move(premises), std::nullopt);
    return out;
  }

  // Seeds: feasible points of dom(H) drawn from the scheme's sampler.
  std::vector<Point> starts;
  Rng rng(derive_seed(scheme.rng_seed, 0x57a7));
  const std::size_t budget = static_cast<std::size_t>(n_starts) * 100;
  for (std::size_t attempt = 0; attempt < budget && static_cast<int>(starts.size()) < n_starts; ++attempt) {
    Point x;
    if (const auto* list = std::get_if<samplers::ExplicitList>(&scheme.sampler)) {
      if (list->points.empty() || attempt >= list->points.size()) break;
      x = list->points[attempt];
    } else {
      const auto& ball = std::get<samplers::UniformBall>(scheme.sampler);
      x = sample_in_ball(m, ball.center, ball.radius, rng);
    }
    if (!feasible_point(m, feasible, x) || !std::isfinite(eval_scalar(m, h, x))) continue;
    starts.push_back(std::move(x));
  }
  if (starts.empty()) throw InfeasibleStart("no feasible start could be drawn from the scheme");

  out.runs.resize(starts.size());
  parallel_for(starts.size(), scheme.jobs,
               [&](std::size_t i) { out.runs[i] = geodesic_descent(m, h, starts[i], cfg, feasible); });

  CheckReport spread;
  spread.check = "multistart_spread";
  spread.scheme = echo(scheme);
  std::optional<std::size_t> best;
  std::optional<std::size_t> worst;
  std::uint64_t converged = 0;
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    const SolveResult& r = out.runs[i];
    ++spread.n_evaluated;
    if (!r.converged) {
      ++spread.n_skipped;
      continue;
    }
    ++converged;
    if (!best || r.value < out.runs[*best].value) best = i;
    if (!worst || r.value > out.runs[*worst].value) worst = i;
  }
  spread.set_metric("n_starts", static_cast<double>(starts.size()));
  spread.set_metric("n_converged", static_cast<double>(converged));
  const double tol_spread = m.tolerances().spread_tol;
  if (starts.size() == 1 && converged == 1) {
    spread.verdict = Verdict::HoldsOnSamples;
    spread.max_gap = 0.0;
    spread.set_metric("spread", 0.0);
    spread.notes.push_back("vacuous: a single start cannot disagree with itself");
  } else if (converged < 2) {
    spread.verdict = Verdict::Inconclusive;
    spread.notes.push_back("fewer than two runs converged");
  } else {
    const SolveResult& lo = out.runs[*best];
    const SolveResult& hi = out.runs[*worst];
    const double gap = hi.value - lo.value;
    spread.max_gap = gap;
    spread.set_metric("spread", gap);
    spread.set_metric("best_value", lo.value);
    spread.set_metric("worst_value", hi.value);
    if (gap > tol_spread) {
      spread.verdict = Verdict::Violated;
      spread.n_violations = 1;
      spread.witnesses.push_back(
          {"discordant local minima", lo.minimizer, hi.minimizer, m.distance(lo.minimizer, hi.minimizer),
           hi.value, lo.value, gap});
    } else {
      spread.verdict = Verdict::HoldsOnSamples;
    }
  }
  spread.set_metric("spread_tol", tol_spread);
  out.report = assemble_harness("multistart_local_global", std::move(premises), std::move(spread));
  return out;
}

CheckReport solution_set_invex(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                               const std::optional<SetPredicate>& feasible,
                               const std::vector<SolveResult>& runs, const SampleScheme& scheme,
                               bool strict) {
  std::optional<double> best;
  for (const SolveResult& r : runs) {
    if (r.converged && (!best || r.value < *best)) best = r.value;
  }
  if (!best) {
    CheckReport report;
    report.check = "solution_set_invex";
    report.verdict = Verdict::Inconclusive;
    report.notes.push_back("no converged run to build a solution pool from");
    return report;
  }
  const Tolerances& tol = m.tolerances();
  const double cutoff = *best + tol.opt_rel_tol * (1.0 + std::abs(*best));
  samplers::ExplicitList pool;
  for (const SolveResult& r : runs) {
    if (r.converged && r.value <= cutoff) pool.points.push_back(r.minimizer);
  }

  SetPredicate solutions = SetPredicate::sublevel(h, cutoff);
  if (feasible) solutions = SetPredicate::intersection({*feasible, solutions});
  SampleScheme pooled = scheme;
  pooled.sampler = pool;
  CheckReport report = check_geodesic_invex_set(m, solutions, maps, pooled);
  report.check = "solution_set_invex";

  double diameter = 0.0;
  std::size_t far_i = 0;
  std::size_t far_j = 0;
  for (std::size_t i = 0; i < pool.points.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.points.size(); ++j) {
      const double d = m.distance(pool.points[i], pool.points[j]);
      if (d > diameter) {
        diameter = d;
        far_i = i;
        far_j = j;
      }
    }
  }
  report.set_metric("best_value", *best);
  report.set_metric("pool_size", static_cast<double>(pool.points.size()));
  report.set_metric("pool_diameter", diameter);
  if (strict && diameter >= tol.diameter_tol) {
    report.verdict = Verdict::Violated;
    ++report.n_violations;
    report.witnesses.insert(report.witnesses.begin(),
                            {"strict objective with a non-singleton solution pool", pool.points[far_i],
                             pool.points[far_j], 0.0, diameter, tol.diameter_tol, diameter - tol.diameter_tol});
    report.notes.push_back("pool diameter exceeds the strict tolerance: tolerance misconfiguration or non-strict objective");
  }
  return report;
}

}  // namespace geoinvex
