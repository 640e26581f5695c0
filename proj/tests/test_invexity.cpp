#include <gtest/gtest.h>

#include <cmath>

#include "degeneration_corpus.hpp"
#include "geoinvex/errors.hpp"
#include "geoinvex/invexity.hpp"
#include "geoinvex/report_io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace geoinvex;
using testing_support::vec;

namespace {

SampleScheme ball_scheme(const Manifold& m, double radius, int n_pairs = 300, std::uint64_t seed = 42) {
  SampleScheme s;
  s.n_pairs = n_pairs;
  s.s_grid = 11;
  s.rng_seed = seed;
  s.sampler = samplers::UniformBall{m.origin(), radius};
  s.max_witnesses = 64;
  return s;
}

MapTriple difference() {
  MapTriple t;
  t.g = bimaps::EuclideanDifference{};
  return t;
}

MapTriple log_maps(double factor = 1.0) {
  MapTriple t;
  if (factor == 1.0) {
    t.g = bimaps::LogBased{};
  } else {
    t.g = bimaps::ScaledLog{factor};
  }
  return t;
}

// Re-evaluates every witness of a report in isolation.
template <class Eval>
void expect_replays(const CheckReport& r, Eval&& eval) {
  ASSERT_FALSE(r.witnesses.empty());
  for (const Witness& w : r.witnesses) {
    const SampleValue v = eval(w);
    EXPECT_NEAR(v.gap, w.gap, 1e-12);
    EXPECT_NEAR(v.lhs, w.lhs, 1e-12);
    EXPECT_NEAR(v.rhs, w.rhs, 1e-12);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Invex sets

TEST(InvexSetFlat, BallHoldsUnderDifference) {
  const Manifold m = Manifold::euclidean(2);
  const CheckReport r = check_invex_set_flat(m, SetPredicate::metric_ball(m.origin(), 1.0), difference(), ball_scheme(m, 1.5));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_GT(r.n_evaluated, 0u);
  EXPECT_GT(r.n_skipped, 0u);
}

TEST(InvexSetFlat, TwoBallsViolatedAtMidpoint) {
  const Manifold m = Manifold::euclidean(2);
  const SetPredicate a = SetPredicate::finite_union(
      {SetPredicate::metric_ball(m.point(vec({-2, 0})), 1.0), SetPredicate::metric_ball(m.point(vec({2, 0})), 1.0)});
  SampleScheme s;
  s.sampler = samplers::ExplicitList{{m.point(vec({-2, 0})), m.point(vec({2, 0}))}};
  const CheckReport r = check_invex_set_flat(m, a, difference(), s);
  ASSERT_EQ(r.verdict, Verdict::Violated);
  bool midpoint = false;
  for (const Witness& w : r.witnesses) midpoint = midpoint || (w.param == 0.5 && std::abs(w.gap - 1.0) < 1e-15);
  EXPECT_TRUE(midpoint);
  EXPECT_DOUBLE_EQ(r.max_gap, 1.0);
}

TEST(InvexSetFlat, ZeroDirectionNeverMoves) {
  const Manifold m = Manifold::euclidean(2);
  const std::vector<Point> pts = {m.point(vec({-2, 0})), m.point(vec({2, 0})), m.point(vec({0, 3}))};
  bimaps::CustomTable zero;
  for (const Point& a : pts) {
    for (const Point& b : pts) zero.entries.push_back({a.coords, b.coords, Eigen::VectorXd::Zero(2)});
  }
  MapTriple t;
  t.g = zero;
  // Any set containing the points, however non-convex.
  const SetPredicate a = SetPredicate::finite_union({SetPredicate::metric_ball(pts[0], 0.1), SetPredicate::metric_ball(pts[1], 0.1),
                                                    SetPredicate::metric_ball(pts[2], 0.1)});
  SampleScheme s;
  s.sampler = samplers::ExplicitList{pts};
  const CheckReport r = check_invex_set_flat(m, a, t, s);
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.n_evaluated, 9u * 11u);
}

TEST(InvexSetFlat, CurvedChartRejected) {
  const Manifold m = Manifold::hyperboloid(2);
  EXPECT_THROW(check_invex_set_flat(m, SetPredicate::metric_ball(m.origin(), 1.0), log_maps(), ball_scheme(m, 1.0)),
               ChartMismatch);
}

TEST(GeodesicInvexSet, HyperbolicBallHolds) {
  const Manifold m = Manifold::hyperboloid(2);
  const Point c = m.lift(vec({0.3, 0.2}));
  const SetPredicate b = SetPredicate::metric_ball(c, 1.2);
  const CheckReport r = check_geodesic_invex_set(m, b, log_maps(), ball_scheme(m, 2.0, 500));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_GT(r.n_evaluated, 500u);
}

TEST(GeodesicInvexSet, HyperbolicBallAgreesWithIntegratedGeodesics) {
  // Dense oracle: integrate the geodesic ODE and test membership along it.
  const Manifold m = Manifold::hyperboloid(2);
  const Point c = m.lift(vec({0.3, 0.2}));
  Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    const Point a = sample_in_ball(m, c, 1.2, rng);
    const Point b = sample_in_ball(m, c, 1.2, rng);
    const Eigen::VectorXd v = m.log_map(b, a).comps;
    for (double t : {0.25, 0.5, 0.75}) {
      const oracle::Flow f = oracle::integrate(oracle::Model::Hyperboloid, b.coords, v, {}, t, 2000);
      EXPECT_LE(std::acosh(std::max(1.0, -oracle::minkowski(f.x, c.coords))), 1.2 + 1e-9);
    }
  }
}

TEST(GeodesicInvexSet, AnnulusViolated) {
  const Manifold m = Manifold::euclidean(2);
  const SetPredicate b = SetPredicate::difference(SetPredicate::metric_ball(m.origin(), 2.0),
                                                  SetPredicate::metric_ball(m.origin(), 1.0));
  const CheckReport r = check_geodesic_invex_set(m, b, difference(), ball_scheme(m, 2.0, 400));
  ASSERT_EQ(r.verdict, Verdict::Violated);
  expect_replays(r, [&](const Witness& w) { return geodesic_invex_set_sample(m, b, difference(), w.r1, w.s1, w.param); });
}

TEST(GeodesicInvexSet, ConstantImageNeverViolatesAtStart) {
  const Manifold m = Manifold::euclidean(2);
  const SetPredicate b = SetPredicate::difference(SetPredicate::metric_ball(m.origin(), 2.0),
                                                  SetPredicate::metric_ball(m.origin(), 1.0));
  MapTriple t = difference();
  t.f = pointmaps::Constant{m.point(vec({1.5, 0}))};
  const CheckReport r = check_geodesic_invex_set(m, b, t, ball_scheme(m, 2.0, 400));
  for (const Witness& w : r.witnesses) EXPECT_GT(w.param, 0.0);
}

TEST(GeodesicInvexSet, LeavingTheCapIsInconclusive) {
  const Manifold m = Manifold::sphere_cap(vec({0, 0, 1}), 0.6);
  const SetPredicate b = SetPredicate::metric_ball(m.origin(), 0.55);
  const CheckReport r = check_geodesic_invex_set(m, b, log_maps(3.0), ball_scheme(m, 0.55, 200));
  EXPECT_GT(r.n_inconclusive, 0u);
  EXPECT_NE(r.verdict, Verdict::HoldsOnSamples);
}

// ---------------------------------------------------------------------------
// Functions

TEST(Preinvex, ConvexQuadraticHolds) {
  const Manifold m = Manifold::euclidean(2);
  const CheckReport r = check_preinvex(m, ScalarField::squared_distance(m.origin()), difference(), ball_scheme(m, 3.0));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.n_evaluated, 300u * 11u);
}

TEST(Preinvex, ConcaveQuadraticViolatedWithAlgebraicGap) {
  const Manifold m = Manifold::euclidean(2);
  const ScalarField h = ScalarField::negated(ScalarField::squared_distance(m.origin()));
  const CheckReport r = check_preinvex(m, h, difference(), ball_scheme(m, 3.0));
  ASSERT_EQ(r.verdict, Verdict::Violated);
  for (const Witness& w : r.witnesses) {
    // gap = s (1 - s) |x - y|^2
    const double s = w.param;
    EXPECT_NEAR(w.gap, s * (1 - s) * (w.r1.coords - w.s1.coords).squaredNorm(), 1e-12);
  }
  expect_replays(r, [&](const Witness& w) { return preinvex_sample(m, h, difference(), w.r1, w.s1, w.param); });
}

TEST(Preinvex, ConcaveQuadraticMidpointWitness) {
  const Manifold m = Manifold::euclidean(2);
  const SampleValue v = preinvex_sample(m, ScalarField::negated(ScalarField::squared_distance(m.origin())), difference(),
                                        m.point(vec({1, 0})), m.point(vec({-1, 0})), 0.5);
  EXPECT_DOUBLE_EQ(v.gap, 1.0);
}

TEST(Preinvex, HyperbolicSquaredDistanceHolds) {
  const Manifold m = Manifold::hyperboloid(2);
  const ScalarField h = ScalarField::squared_distance(m.lift(vec({0.5, -0.5})));
  const CheckReport r = check_preinvex(m, h, log_maps(), ball_scheme(m, 2.0, 1000));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_LT(r.max_gap, 1e-9);
}

TEST(Preinvex, HyperbolicConvexityAgainstIntegratedGeodesics) {
  const Manifold m = Manifold::hyperboloid(2);
  const Point p0 = m.lift(vec({0.5, -0.5}));
  const auto d2 = [&](const Eigen::VectorXd& x) {
    const double d = std::acosh(std::max(1.0, -oracle::minkowski(x, p0.coords)));
    return d * d;
  };
  Rng rng(91);
  for (int i = 0; i < 10; ++i) {
    const Point a = sample_in_ball(m, m.origin(), 2.0, rng);
    const Point b = sample_in_ball(m, m.origin(), 2.0, rng);
    const Eigen::VectorXd v = m.log_map(b, a).comps;
    for (double s : {0.2, 0.5, 0.8}) {
      const oracle::Flow f = oracle::integrate(oracle::Model::Hyperboloid, b.coords, v, {}, s, 2000);
      EXPECT_LE(d2(f.x), s * d2(a.coords) + (1 - s) * d2(b.coords) + 1e-9);
      const SampleValue lib = preinvex_sample(m, ScalarField::squared_distance(p0), log_maps(), a, b, s);
      EXPECT_NEAR(lib.lhs, d2(f.x), 1e-8);
    }
  }
}

TEST(Preinvex, ExtendedValuedOffDomainIsSatisfied) {
  const Manifold m = Manifold::euclidean(2);
  const ScalarField h = ScalarField::indicator_extended(ScalarField::squared_distance(m.origin()),
                                                        SetPredicate::metric_ball(m.origin(), 1.0));
  const CheckReport r = check_preinvex(m, h, difference(), ball_scheme(m, 2.0));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
}

TEST(PreinvexStrict, StrictlyConvexHolds) {
  const Manifold m = Manifold::hyperboloid(2);
  const CheckReport r = check_preinvex(m, ScalarField::squared_distance(m.origin()), log_maps(), ball_scheme(m, 1.5), true);
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.n_evaluated, 300u * 9u);
}

TEST(PreinvexStrict, AffineIsNotStrict) {
  const Manifold m = Manifold::euclidean(2);
  const ScalarField h = ScalarField::linear_height(vec({1, 1}));
  EXPECT_EQ(check_preinvex(m, h, difference(), ball_scheme(m, 1.0)).verdict, Verdict::HoldsOnSamples);
  const CheckReport r = check_preinvex(m, h, difference(), ball_scheme(m, 1.0), true);
  EXPECT_EQ(r.verdict, Verdict::Violated);
  EXPECT_EQ(r.metric("strict_violations"), static_cast<double>(r.n_violations));
}

TEST(PreinvexStrict, CoincidentImagesAreSkipped) {
  const Manifold m = Manifold::euclidean(2);
  SampleScheme s;
  s.sampler = samplers::ExplicitList{{m.point(vec({1, 1}))}};
  const CheckReport r = check_preinvex(m, ScalarField::linear_height(vec({1, 1})), difference(), s, true);
  EXPECT_EQ(r.n_evaluated, 0u);
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
}

TEST(InvexFunction, GradientInequalityOfConvexQuadratic) {
  const Manifold m = Manifold::euclidean(2);
  const ScalarField h = ScalarField::squared_distance(m.origin());
  const CheckReport r = check_invex_function(m, h, difference(), ball_scheme(m, 3.0));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  // lhs - rhs = |x - y|^2
  const SampleValue v = invex_function_sample(m, h, difference(), m.point(vec({3, 1})), m.point(vec({1, 2})));
  EXPECT_NEAR(v.lhs - v.rhs, 5.0, 1e-14);
}

TEST(InvexFunction, ConcaveQuadraticViolated) {
  const Manifold m = Manifold::euclidean(2);
  const ScalarField h = ScalarField::negated(ScalarField::squared_distance(m.origin()));
  const CheckReport r = check_invex_function(m, h, difference(), ball_scheme(m, 3.0));
  ASSERT_EQ(r.verdict, Verdict::Violated);
  expect_replays(r, [&](const Witness& w) { return invex_function_sample(m, h, difference(), w.r1, w.s1); });
}

TEST(InvexFunction, CoincidentImagesGiveZeroSides) {
  const Manifold m = Manifold::hyperboloid(2);
  const Point p = m.lift(vec({0.4, 0.1}));
  const SampleValue v = invex_function_sample(m, ScalarField::squared_distance(m.origin()), log_maps(), p, p);
  EXPECT_EQ(v.lhs, 0.0);
  EXPECT_EQ(v.rhs, 0.0);
}

TEST(InvexFunction, KinkIsInconclusive) {
  const Manifold m = Manifold::euclidean(2);
  SampleScheme s;
  s.sampler = samplers::ExplicitList{{m.origin(), m.point(vec({1, 0}))}};
  const CheckReport r = check_invex_function(m, ScalarField::distance(m.origin()), difference(), s);
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_EQ(r.n_inconclusive, 2u);
}

// ---------------------------------------------------------------------------
// Condition A

TEST(ConditionA, LogBasedExactOnHyperboloid) {
  const Manifold m = Manifold::hyperboloid(2);
  const CheckReport r = check_condition_a(m, log_maps(), ball_scheme(m, 2.0, 1000));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_LT(*r.metric("A1_max_gap"), 1e-9);
  EXPECT_LT(*r.metric("A2_max_gap"), 1e-9);
  EXPECT_EQ(r.n_evaluated, 2u * 1000u * 11u);
}

TEST(ConditionA, DifferenceExactOnEuclidean) {
  const Manifold m = Manifold::euclidean(3);
  const CheckReport r = check_condition_a(m, difference(), ball_scheme(m, 5.0));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_LT(r.max_gap, 1e-12);
}

TEST(ConditionA, ScaledLogViolatedWithAlgebraicGap) {
  const Manifold m = Manifold::hyperboloid(2);
  const MapTriple t = log_maps(2.0);
  const CheckReport r = check_condition_a(m, t, ball_scheme(m, 1.0));
  ASSERT_EQ(r.verdict, Verdict::Violated);
  EXPECT_GT(*r.metric("A2_violations"), 0.0);
  for (const Witness& w : r.witnesses) {
    // Both parts miss by 2 s d(E(r1), F(s1)).
    EXPECT_GT(w.param, 0.0);
    EXPECT_NEAR(w.gap, 2.0 * w.param * m.distance(w.r1, w.s1), 1e-9);
    const ConditionAPart part = w.label == "A1" ? ConditionAPart::A1 : ConditionAPart::A2;
    EXPECT_NEAR(condition_a_sample(m, t, w.r1, w.s1, w.param, part).gap, w.gap, 1e-12);
  }
}

TEST(ConditionA, SphereCapLogBasedHolds) {
  const Manifold m = Manifold::sphere_cap(vec({0, 0, 1}), 1.2);
  const CheckReport r = check_condition_a(m, log_maps(), ball_scheme(m, 0.5));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
}

// ---------------------------------------------------------------------------
// Properties

TEST(Degeneration, IdentityCorpusMatchesClassicalConvexity) {
  const Manifold m = Manifold::euclidean(2);
  for (const corpus::Instance& in : corpus::identity_corpus(m)) {
    for (std::uint64_t seed : {1u, 2u}) {
      for (const corpus::Comparison& c : corpus::compare(m, in, corpus::corpus_scheme(m, seed))) {
        EXPECT_TRUE(c.verdicts_agree) << in.name;
        EXPECT_TRUE(c.witnesses_agree) << in.name << ": " << c.detail;
        EXPECT_EQ(c.n_witnesses > 0, in.expect_violated) << in.name;
      }
    }
  }
}

TEST(Degeneration, AffineMapsMatchDirectEfConvexity) {
  const Manifold m = Manifold::euclidean(2);
  for (const corpus::Instance& in : corpus::affine_corpus(m)) {
    for (const corpus::Comparison& c : corpus::compare(m, in, corpus::corpus_scheme(m, 3))) {
      EXPECT_TRUE(c.verdicts_agree) << in.name;
      EXPECT_TRUE(c.witnesses_agree) << in.name << ": " << c.detail;
    }
  }
}

TEST(MonotoneRefinement, ViolationsSurviveFinerSchemes) {
  const Manifold m = Manifold::euclidean(2);
  for (const corpus::Instance& in : corpus::identity_corpus(m)) {
    const auto run = [&](int n_pairs, int grid) {
      SampleScheme s = corpus::corpus_scheme(m, 9);
      s.n_pairs = n_pairs;
      s.s_grid = grid;
      if (in.set) return check_invex_set_flat(m, *in.set, in.maps, s);
      return check_preinvex(m, *in.field, in.maps, s);
    };
    bool was_violated = false;
    std::uint64_t prev_violations = 0;
    // Nested grids (k/4 within k/8 within k/16) and prefix-stable pair lists.
    for (const auto& [n, g] : std::vector<std::pair<int, int>>{{50, 5}, {50, 9}, {200, 9}, {200, 17}, {800, 17}}) {
      const CheckReport r = run(n, g);
      const bool violated = r.verdict == Verdict::Violated;
      EXPECT_TRUE(violated || !was_violated) << in.name << " at n_pairs=" << n << " s_grid=" << g;
      EXPECT_GE(r.n_violations, prev_violations) << in.name;
      was_violated = violated;
      prev_violations = r.n_violations;
    }
  }
}

TEST(Witnesses, ViolatedImpliesWitnessAboveTolerance) {
  const Manifold m = Manifold::euclidean(2);
  for (const corpus::Instance& in : corpus::identity_corpus(m)) {
    const SampleScheme s = corpus::corpus_scheme(m, 5);
    const CheckReport r = in.set ? check_invex_set_flat(m, *in.set, in.maps, s) : check_preinvex(m, *in.field, in.maps, s);
    if (r.verdict != Verdict::Violated) continue;
    ASSERT_FALSE(r.witnesses.empty());
    for (const Witness& w : r.witnesses) EXPECT_GT(w.gap, s.tol);
    if (in.set) {
      expect_replays(r, [&](const Witness& w) { return invex_set_flat_sample(m, *in.set, in.maps, w.r1, w.s1, w.param); });
    } else {
      expect_replays(r, [&](const Witness& w) { return preinvex_sample(m, *in.field, in.maps, w.r1, w.s1, w.param); });
    }
  }
}

TEST(Witnesses, CapBoundsListButNotCounts) {
  const Manifold m = Manifold::euclidean(2);
  SampleScheme s = ball_scheme(m, 3.0);
  s.max_witnesses = 3;
  const CheckReport r = check_preinvex(m, ScalarField::negated(ScalarField::squared_distance(m.origin())), difference(), s);
  EXPECT_EQ(r.witnesses.size(), 3u);
  EXPECT_GT(r.n_violations, 3u);
}

TEST(Determinism, JobCountDoesNotChangeReports) {
  const Manifold m = Manifold::hyperboloid(2);
  SampleScheme s = ball_scheme(m, 1.0, 500);
  const CheckReport a = check_condition_a(m, log_maps(2.0), s);
  s.jobs = 4;
  const CheckReport b = check_condition_a(m, log_maps(2.0), s);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

// ---------------------------------------------------------------------------
// Harnesses

TEST(SumPreinvex, ZeroWeightReducesToFirstTerm) {
  const Manifold m = Manifold::euclidean(2);
  const ScalarField f = ScalarField::squared_distance(m.point(vec({1, 0})));
  const ScalarField g = ScalarField::squared_distance(m.point(vec({0, 1})));
  const SampleScheme s = ball_scheme(m, 2.0);
  const CheckReport r = check_sum_preinvex(m, {{1.0, f}, {0.0, g}}, difference(), s);
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.premise, Premise::Met);
  EXPECT_FALSE(r.falsified);
  EXPECT_EQ(r.max_gap, check_preinvex(m, f, difference(), s).max_gap);
}

TEST(SumPreinvex, PositiveCombinationHolds) {
  const Manifold m = Manifold::euclidean(2);
  const CheckReport r = check_sum_preinvex(
      m, {{2.0, ScalarField::squared_distance(m.point(vec({1, 0})))}, {3.0, ScalarField::squared_distance(m.point(vec({0, 1})))}},
      difference(), ball_scheme(m, 2.0));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_TRUE(r.theorem_harness);
  EXPECT_EQ(r.subreports.size(), 3u);
}

TEST(SumPreinvex, EmptySumIsZeroField) {
  const Manifold m = Manifold::hyperboloid(2);
  const CheckReport r = check_sum_preinvex(m, {}, log_maps(), ball_scheme(m, 1.0));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.premise, Premise::Met);
}

TEST(SumPreinvex, NonPreinvexTermSkipsConclusion) {
  const Manifold m = Manifold::euclidean(2);
  const CheckReport r = check_sum_preinvex(
      m, {{1.0, ScalarField::negated(ScalarField::squared_distance(m.origin()))}}, difference(), ball_scheme(m, 2.0));
  EXPECT_EQ(r.premise, Premise::Failed);
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_FALSE(r.falsified);
}

TEST(LevelSet, BelowMinimumIsVacuous) {
  const Manifold m = Manifold::hyperboloid(2);
  const CheckReport r = check_level_set_invex(m, ScalarField::squared_distance(m.origin()), -1.0, log_maps(), ball_scheme(m, 1.5));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.n_evaluated, 0u);
}

TEST(LevelSet, HyperbolicBallSublevelHolds) {
  const Manifold m = Manifold::hyperboloid(2);
  const CheckReport r = check_level_set_invex(m, ScalarField::squared_distance(m.origin()), 1.0, log_maps(), ball_scheme(m, 1.5));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.premise, Premise::Met);
  EXPECT_GT(r.n_evaluated, 0u);
}

TEST(LevelSet, TwoWellDemonstratesContrapositive) {
  const Manifold m = Manifold::euclidean(2);
  const ScalarField h = ScalarField::product(ScalarField::squared_distance(m.point(vec({-1, 0}))),
                                             ScalarField::squared_distance(m.point(vec({1, 0}))));
  const CheckReport r = check_level_set_invex(m, h, 0.5, difference(), ball_scheme(m, 1.5, 600), HarnessMode::Demonstrate);
  EXPECT_EQ(r.premise, Premise::Failed);
  EXPECT_EQ(r.verdict, Verdict::Violated);
  EXPECT_FALSE(r.falsified);
}

TEST(PreinvexImpliesInvex, ConvexQuadraticHolds) {
  const Manifold m = Manifold::euclidean(2);
  const CheckReport r = theorem_preinvex_implies_invex(m, ScalarField::squared_distance(m.origin()), difference(), ball_scheme(m, 2.0));
  EXPECT_EQ(r.premise, Premise::Met);
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_FALSE(r.falsified);
}

TEST(PreinvexImpliesInvex, NegatedFieldFailsPremise) {
  const Manifold m = Manifold::hyperboloid(2);
  const CheckReport r = theorem_preinvex_implies_invex(m, ScalarField::negated(ScalarField::squared_distance(m.origin())),
                                                       log_maps(), ball_scheme(m, 1.0));
  EXPECT_EQ(r.premise, Premise::Failed);
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_EQ(r.subreports.size(), 1u);
  EXPECT_FALSE(r.falsified);
}

TEST(InvexPlusAImpliesPreinvex, HyperbolicSquaredDistanceHolds) {
  const Manifold m = Manifold::hyperboloid(2);
  const CheckReport r = theorem_invex_plus_a_implies_preinvex(m, ScalarField::squared_distance(m.lift(vec({0.2, 0.1}))), log_maps(),
                                                              ball_scheme(m, 1.5));
  EXPECT_EQ(r.premise, Premise::Met);
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.subreports.size(), 3u);
}

TEST(InvexPlusAImpliesPreinvex, ScaledLogFailsConditionA) {
  const Manifold m = Manifold::hyperboloid(2);
  const CheckReport r = theorem_invex_plus_a_implies_preinvex(m, ScalarField::squared_distance(m.origin()), log_maps(2.0),
                                                              ball_scheme(m, 1.5));
  EXPECT_EQ(r.premise, Premise::Failed);
  EXPECT_EQ(r.subreports[1].verdict, Verdict::Violated);
  EXPECT_FALSE(r.falsified);
}

TEST(InvexPlusAImpliesPreinvex, EuclideanQuadraticHolds) {
  const Manifold m = Manifold::euclidean(2);
  const CheckReport r = theorem_invex_plus_a_implies_preinvex(m, ScalarField::squared_distance(m.point(vec({1, 1}))), difference(),
                                                              ball_scheme(m, 2.0));
  EXPECT_EQ(r.verdict, Verdict::HoldsOnSamples);
  EXPECT_EQ(r.premise, Premise::Met);
}

TEST(AssembleHarness, FalsifiedOnlyWhenPremisesHold) {
  CheckReport ok;
  CheckReport bad;
  bad.verdict = Verdict::Violated;
  EXPECT_TRUE(assemble_harness("h", {ok}, bad).falsified);
  EXPECT_FALSE(assemble_harness("h", {bad}, bad).falsified);
  EXPECT_FALSE(assemble_harness("h", {ok}, ok).falsified);
  const CheckReport skipped = assemble_harness("h", {bad}, std::nullopt);
  EXPECT_EQ(skipped.verdict, Verdict::Inconclusive);
  EXPECT_EQ(skipped.premise, Premise::Failed);
}
