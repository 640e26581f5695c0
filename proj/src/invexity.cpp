#include "geoinvex/invexity.hpp"

#include <cmath>
#include <limits>

#include "geoinvex/errors.hpp"
#include "geoinvex/parallel.hpp"

namespace geoinvex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PairResult {
  bool skipped = false;
  std::uint64_t evaluated = 0;
  std::uint64_t violations = 0;
  std::uint64_t inconclusive = 0;
  double max_gap = -kInf;
  std::vector<Witness> violating;
  std::vector<Witness> undecided;
  std::vector<std::pair<std::string, double>> label_max;
  std::vector<std::pair<std::string, std::uint64_t>> label_violations;
};

class PairContext {
 public:
  PairContext(const Point& r1, const Point& s1, const SampleScheme& scheme, PairResult& out)
      : r1_(r1), s1_(s1), scheme_(scheme), out_(out) {}

  double tol() const { return scheme_.tol; }

  void record(const std::string& label, double param, const SampleValue& v, bool violated) {
    ++out_.evaluated;
    out_.max_gap = std::max(out_.max_gap, v.gap);
    if (!label.empty()) bump_label(label, v.gap, violated);
    if (!violated) return;
    ++out_.violations;
    if (static_cast<int>(out_.violating.size()) < scheme_.max_witnesses) {
      out_.violating.push_back({label, r1_, s1_, param, v.lhs, v.rhs, v.gap});
    }
  }

  void undecided(const std::string& why, double param) {
    ++out_.inconclusive;
    if (static_cast<int>(out_.undecided.size()) < scheme_.max_witnesses) {
      out_.undecided.push_back({"inconclusive: " + why, r1_, s1_, param, 0.0, 0.0, 0.0});
    }
  }

  void skip() { out_.skipped = true; }

 private:
  void bump_label(const std::string& label, double gap, bool violated) {
    bool found = false;
    for (auto& [k, v] : out_.label_max) {
      if (k == label) {
        v = std::max(v, gap);
        found = true;
      }
    }
    if (!found) out_.label_max.emplace_back(label, gap);
    found = false;
    for (auto& [k, v] : out_.label_violations) {
      if (k == label) {
        v += violated ? 1 : 0;
        found = true;
      }
    }
    if (!found) out_.label_violations.emplace_back(label, violated ? 1 : 0);
  }

  const Point& r1_;
  const Point& s1_;
  const SampleScheme& scheme_;
  PairResult& out_;
};

// Errors that mean "the sampled object does not exist in-model" rather than
// "the inequality fails".
template <class Fn>
void guarded(PairContext& ctx, double param, Fn&& fn) {
  try {
    fn();
  } catch (const OutOfChart& e) {
    ctx.undecided(e.what(), param);
  } catch (const NonDifferentiable& e) {
    ctx.undecided(e.what(), param);
  } catch (const InvariantDrift& e) {
    ctx.undecided(e.what(), param);
  }
}

template <class Fn>
CheckReport run_pairs(const std::string& name, const Manifold& m, const SampleScheme& scheme,
                      Fn&& per_pair) {
  scheme.validate();
  const auto pairs = sample_pairs(m, scheme);
  std::vector<PairResult> results(pairs.size());
  parallel_for(pairs.size(), scheme.jobs, [&](std::size_t i) {
    PairContext ctx(pairs[i].first, pairs[i].second, scheme, results[i]);
    per_pair(pairs[i].first, pairs[i].second, ctx);
  });

  CheckReport report;
  report.check = name;
  report.scheme = echo(scheme);
  std::vector<Witness> undecided;
  std::vector<std::pair<std::string, double>> label_max;
  std::vector<std::pair<std::string, std::uint64_t>> label_violations;
  const auto cap = static_cast<std::size_t>(scheme.max_witnesses);
  for (const PairResult& r : results) {
    if (r.skipped) ++report.n_skipped;
    report.n_evaluated += r.evaluated;
    report.n_violations += r.violations;
    report.n_inconclusive += r.inconclusive;
    report.max_gap = std::max(report.max_gap, r.max_gap);
    for (const Witness& w : r.violating) {
      if (report.witnesses.size() < cap) report.witnesses.push_back(w);
    }
    for (const Witness& w : r.undecided) {
      if (undecided.size() < cap) undecided.push_back(w);
    }
    for (const auto& [k, v] : r.label_max) {
      bool found = false;
      for (auto& [k2, v2] : label_max) {
        if (k2 == k) {
          v2 = std::max(v2, v);
          found = true;
        }
      }
      if (!found) label_max.emplace_back(k, v);
    }
    for (const auto& [k, v] : r.label_violations) {
      bool found = false;
      for (auto& [k2, v2] : label_violations) {
        if (k2 == k) {
          v2 += v;
          found = true;
        }
      }
      if (!found) label_violations.emplace_back(k, v);
    }
  }
  for (const auto& [k, v] : label_max) report.set_metric(k + "_max_gap", v);
  for (const auto& [k, v] : label_violations) report.set_metric(k + "_violations", static_cast<double>(v));

  if (report.n_violations > 0) {
    report.verdict = Verdict::Violated;
  } else if (report.n_inconclusive > 0) {
    report.verdict = Verdict::Inconclusive;
    report.witnesses = std::move(undecided);
  } else {
    report.verdict = Verdict::HoldsOnSamples;
    if (report.n_evaluated == 0) report.notes.push_back("vacuous: no sampled pair satisfied the premises");
  }
  return report;
}

bool in_domain(const Manifold& m, const SampleScheme& scheme, const Point& x) {
  return !scheme.domain || set_contains(m, *scheme.domain, x);
}

// The images (E(r1), F(s1)) of a sampled pair.
std::pair<Point, Point> images(const Manifold& m, const MapTriple& maps, const Point& r1, const Point& s1) {
  return {eval_point_map(m, maps.e, r1), eval_point_map(m, maps.f, s1)};
}

// s H(a) + (1 - s) H(b) with 0 * inf = 0.
double chord(double s, double ha, double hb) {
  const double left = s == 0.0 ? 0.0 : s * ha;
  const double right = s == 1.0 ? 0.0 : (1.0 - s) * hb;
  return left + right;
}

double signed_gap(double lhs, double rhs) {
  if (rhs == kInf) return -kInf;
  if (lhs == kInf) return kInf;
  return lhs - rhs;
}

}  // namespace

SchemeEcho echo(const SampleScheme& scheme) {
  return {scheme.n_pairs, scheme.s_grid, scheme.rng_seed, scheme.tol, describe(scheme.sampler)};
}

// ---------------------------------------------------------------------------
// Single-sample evaluators

SampleValue invex_set_flat_sample(const Manifold& m, const SetPredicate& a, const MapTriple& maps,
                                  const Point& r1, const Point& s1, double mu) {
  if (m.kind() != ManifoldKind::Euclidean) {
    throw ChartMismatch("check_invex_set_flat needs a Euclidean chart, got " + to_string(m.kind()));
  }
  const auto [er, fs] = images(m, maps, r1, s1);
  const TangentVector g = eval_bimap(m, maps.g, er, fs);
  const Point x = m.point(fs.coords + mu * g.comps);
  const double excess = set_excess(m, a, x);
  return {excess, 0.0, excess};
}

SampleValue geodesic_invex_set_sample(const Manifold& m, const SetPredicate& b,
                                      const MapTriple& maps, const Point& r1, const Point& s1,
                                      double s) {
  const auto [er, fs] = images(m, maps, r1, s1);
  const TangentVector g = eval_bimap(m, maps.g, er, fs);
  const Point x = m.geodesic_eval(m.segment(g), s);
  const double excess = set_excess(m, b, x);
  return {excess, 0.0, excess};
}

SampleValue preinvex_sample(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                            const Point& r1, const Point& s1, double s) {
  const auto [er, fs] = images(m, maps, r1, s1);
  const TangentVector g = eval_bimap(m, maps.g, er, fs);
  const Point x = m.geodesic_eval(m.segment(g), s);
  const double lhs = eval_scalar(m, h, x);
  const double rhs = chord(s, eval_scalar(m, h, er), eval_scalar(m, h, fs));
  return {lhs, rhs, signed_gap(lhs, rhs)};
}

SampleValue invex_function_sample(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                                  const Point& r1, const Point& s1) {
  const auto [er, fs] = images(m, maps, r1, s1);
  const double hb = eval_scalar(m, h, fs);
  if (!std::isfinite(hb)) throw NonDifferentiable("field is +infinity at F(s1)");
  const double ha = eval_scalar(m, h, er);
  const TangentVector g = eval_bimap(m, maps.g, er, fs);
  const double rhs = m.inner(eval_differential(m, h, fs), g);
  if (ha == kInf) return {kInf, rhs, -kInf};
  const double lhs = ha - hb;
  return {lhs, rhs, rhs - lhs};
}

SampleValue condition_a_sample(const Manifold& m, const MapTriple& maps, const Point& r1,
                               const Point& s1, double s, ConditionAPart part) {
  const auto [er, fs] = images(m, maps, r1, s1);
  const TangentVector g = eval_bimap(m, maps.g, er, fs);
  const GeodesicSegment seg = m.segment(g);
  const Point x = m.geodesic_eval(seg, s);
  const bool first = part == ConditionAPart::A1;
  // (A1) P^0_s G(F(s1), beta(s)) = -s G,  (A2) P^0_s G(E(r1), beta(s)) = (1 - s) G.
  const TangentVector at_x = eval_bimap(m, maps.g, first ? fs : er, x);
  const TangentVector back = m.inverse_transport(at_x, seg, s);
  const TangentVector required = g.scaled(first ? -s : 1.0 - s);
  const TangentVector diff{fs, back.comps - required.comps};
  return {m.norm(back), m.norm(required), m.norm(diff)};
}

// ---------------------------------------------------------------------------
// Checkers

CheckReport check_invex_set_flat(const Manifold& m, const SetPredicate& a, const MapTriple& maps,
                                 const SampleScheme& scheme) {
  if (m.kind() != ManifoldKind::Euclidean) {
    throw ChartMismatch("check_invex_set_flat needs a Euclidean chart, got " + to_string(m.kind()));
  }
  const std::vector<double> grid = scheme.grid();
  return run_pairs("check_invex_set_flat", m, scheme,
                   [&](const Point& r1, const Point& s1, PairContext& ctx) {
                     if (!set_contains(m, a, r1) || !set_contains(m, a, s1)) return ctx.skip();
                     const auto [er, fs] = images(m, maps, r1, s1);
                     if (!in_domain(m, scheme, er) || !in_domain(m, scheme, fs)) return ctx.skip();
                     for (double mu : grid) {
                       guarded(ctx, mu, [&] {
                         const SampleValue v = invex_set_flat_sample(m, a, maps, r1, s1, mu);
                         ctx.record("", mu, v, v.gap > ctx.tol());
                       });
                     }
                   });
}

CheckReport check_geodesic_invex_set(const Manifold& m, const SetPredicate& b,
                                     const MapTriple& maps, const SampleScheme& scheme) {
  const std::vector<double> grid = scheme.grid();
  return run_pairs("check_geodesic_invex_set", m, scheme,
                   [&](const Point& r1, const Point& s1, PairContext& ctx) {
                     const auto [er, fs] = images(m, maps, r1, s1);
                     if (!set_contains(m, b, er) || !set_contains(m, b, fs)) return ctx.skip();
                     if (!in_domain(m, scheme, er) || !in_domain(m, scheme, fs)) return ctx.skip();
                     for (double s : grid) {
                       guarded(ctx, s, [&] {
                         const SampleValue v = geodesic_invex_set_sample(m, b, maps, r1, s1, s);
                         ctx.record("", s, v, v.gap > ctx.tol());
                       });
                     }
                   });
}

CheckReport check_preinvex(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                           const SampleScheme& scheme, bool strict) {
  const std::vector<double> grid = scheme.grid();
  const double min_dist = m.tolerances().strict_min_distance;
  CheckReport report = run_pairs(
      strict ? "check_preinvex_strict" : "check_preinvex", m, scheme,
      [&](const Point& r1, const Point& s1, PairContext& ctx) {
        const auto [er, fs] = images(m, maps, r1, s1);
        if (!in_domain(m, scheme, er) || !in_domain(m, scheme, fs)) return ctx.skip();
        const bool distinct = !strict || m.distance(er, fs) >= min_dist;
        for (double s : grid) {
          if (strict && (s == 0.0 || s == 1.0 || !distinct)) continue;
          guarded(ctx, s, [&] {
            const SampleValue v = preinvex_sample(m, h, maps, r1, s1, s);
            const bool violated = strict ? v.gap > -ctx.tol() : v.gap > ctx.tol();
            ctx.record(strict ? "strict" : "", s, v, violated);
          });
        }
      });
  return report;
}

CheckReport check_invex_function(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                                 const SampleScheme& scheme) {
  CheckReport report = run_pairs("check_invex_function", m, scheme,
                                 [&](const Point& r1, const Point& s1, PairContext& ctx) {
                                   const auto [er, fs] = images(m, maps, r1, s1);
                                   if (!in_domain(m, scheme, er) || !in_domain(m, scheme, fs)) {
                                     return ctx.skip();
                                   }
                                   guarded(ctx, 0.0, [&] {
                                     const SampleValue v = invex_function_sample(m, h, maps, r1, s1);
                                     ctx.record("", 0.0, v, v.gap > ctx.tol());
                                   });
                                 });
  report.notes.push_back("domain: the geodesic (E,F)-invex set induced by (E, F, G) on the sampled pairs");
  return report;
}

CheckReport check_condition_a(const Manifold& m, const MapTriple& maps, const SampleScheme& scheme) {
  const std::vector<double> grid = scheme.grid();
  CheckReport report = run_pairs(
      "check_condition_A", m, scheme, [&](const Point& r1, const Point& s1, PairContext& ctx) {
        const auto [er, fs] = images(m, maps, r1, s1);
        if (!in_domain(m, scheme, er) || !in_domain(m, scheme, fs)) return ctx.skip();
        for (double s : grid) {
          guarded(ctx, s, [&] {
            const SampleValue a1 = condition_a_sample(m, maps, r1, s1, s, ConditionAPart::A1);
            ctx.record("A1", s, a1, a1.gap > ctx.tol());
            const SampleValue a2 = condition_a_sample(m, maps, r1, s1, s, ConditionAPart::A2);
            ctx.record("A2", s, a2, a2.gap > ctx.tol());
          });
        }
      });
  for (const char* part : {"A1", "A2"}) {
    const std::string key = std::string(part) + "_max_gap";
    if (!report.metric(key)) report.set_metric(key, 0.0);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Theorem harnesses

CheckReport assemble_harness(std::string name, std::vector<CheckReport> premises,
                             std::optional<CheckReport> conclusion) {
  CheckReport report;
  report.check = std::move(name);
  report.theorem_harness = true;
  bool met = true;
  for (const CheckReport& p : premises) met = met && p.verdict == Verdict::HoldsOnSamples;
  report.premise = met ? Premise::Met : Premise::Failed;
  if (!premises.empty() && premises.front().scheme) report.scheme = premises.front().scheme;
  if (conclusion) {
    report.verdict = conclusion->verdict;
    report.witnesses = conclusion->witnesses;
    report.n_evaluated = conclusion->n_evaluated;
    report.n_skipped = conclusion->n_skipped;
    report.n_inconclusive = conclusion->n_inconclusive;
    report.n_violations = conclusion->n_violations;
    report.max_gap = conclusion->max_gap;
    report.metrics = conclusion->metrics;
    if (conclusion->scheme) report.scheme = conclusion->scheme;
    report.falsified = met && conclusion->verdict == Verdict::Violated;
    if (!met) report.notes.push_back("premise failed; conclusion evaluated in demonstration mode");
  } else {
    report.verdict = Verdict::Inconclusive;
    report.notes.push_back("premise failed; conclusion not exercised");
  }
  report.subreports = std::move(premises);
  if (conclusion) report.subreports.push_back(std::move(*conclusion));
  return report;
}

namespace {

bool holds(const CheckReport& r) { return r.verdict == Verdict::HoldsOnSamples; }

bool run_conclusion(const std::vector<CheckReport>& premises, HarnessMode mode) {
  if (mode == HarnessMode::Demonstrate) return true;
  for (const CheckReport& p : premises) {
    if (!holds(p)) return false;
  }
  return true;
}

}  // namespace

CheckReport check_sum_preinvex(const Manifold& m,
                               const std::vector<std::pair<double, ScalarField>>& terms,
                               const MapTriple& maps, const SampleScheme& scheme) {
  std::vector<CheckReport> premises;
  premises.reserve(terms.size());
  for (const auto& term : terms) {
    CheckReport r = check_preinvex(m, term.second, maps, scheme);
    r.check = "check_preinvex[" + describe(term.second) + "]";
    premises.push_back(std::move(r));
  }
  std::optional<CheckReport> conclusion;
  if (run_conclusion(premises, HarnessMode::SkipOnPremiseFailure)) {
    conclusion = check_preinvex(m, ScalarField::weighted_sum(terms), maps, scheme);
  }
  CheckReport out = assemble_harness("check_sum_preinvex", std::move(premises), std::move(conclusion));
  if (terms.empty()) out.notes.push_back("empty sum is the zero field");
  return out;
}

CheckReport check_level_set_invex(const Manifold& m, const ScalarField& h, double level,
                                  const MapTriple& maps, const SampleScheme& scheme,
                                  HarnessMode mode) {
  std::vector<CheckReport> premises{check_preinvex(m, h, maps, scheme)};
  std::optional<CheckReport> conclusion;
  if (run_conclusion(premises, mode)) {
    SetPredicate level_set = SetPredicate::sublevel(h, level);
    if (scheme.domain) level_set = SetPredicate::intersection({*scheme.domain, level_set});
    conclusion = check_geodesic_invex_set(m, level_set, maps, scheme);
  }
  CheckReport out = assemble_harness("check_level_set_invex", std::move(premises), std::move(conclusion));
  out.set_metric("level", level);
  return out;
}

CheckReport theorem_preinvex_implies_invex(const Manifold& m, const ScalarField& h,
                                           const MapTriple& maps, const SampleScheme& scheme,
                                           HarnessMode mode) {
  std::vector<CheckReport> premises{check_preinvex(m, h, maps, scheme)};
  std::optional<CheckReport> conclusion;
  if (run_conclusion(premises, mode)) conclusion = check_invex_function(m, h, maps, scheme);
  return assemble_harness("theorem_preinvex_implies_invex", std::move(premises), std::move(conclusion));
}

CheckReport theorem_invex_plus_a_implies_preinvex(const Manifold& m, const ScalarField& h,
                                                  const MapTriple& maps, const SampleScheme& scheme,
                                                  HarnessMode mode) {
  std::vector<CheckReport> premises{check_invex_function(m, h, maps, scheme),
                                    check_condition_a(m, maps, scheme)};
  std::optional<CheckReport> conclusion;
  if (run_conclusion(premises, mode)) conclusion = check_preinvex(m, h, maps, scheme);
  return assemble_harness("theorem_invex_plus_A_implies_preinvex", std::move(premises),
                          std::move(conclusion));
}

}  // namespace geoinvex
