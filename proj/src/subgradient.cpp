#include "geoinvex/subgradient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geoinvex/errors.hpp"
#include "geoinvex/parallel.hpp"

namespace geoinvex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PointOutcome {
  bool in_domain = false;
  SampleValue value;
};

// Evaluates `fn` on every sample point and reduces in sample order.
template <class Fn>
CheckReport run_points(const std::string& name, const std::vector<Point>& points, const Point& base,
                       const SampleScheme& scheme, const Manifold& m, Fn&& fn) {
  std::vector<PointOutcome> out(points.size());
  parallel_for(points.size(), scheme.jobs, [&](std::size_t i) { out[i] = fn(points[i]); });

  CheckReport report;
  report.check = name;
  report.scheme = echo(scheme);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!out[i].in_domain) {
      ++report.n_skipped;
      continue;
    }
    ++report.n_evaluated;
    const SampleValue& v = out[i].value;
    report.max_gap = std::max(report.max_gap, v.gap);
    if (v.gap > scheme.tol) {
      ++report.n_violations;
      if (static_cast<int>(report.witnesses.size()) < scheme.max_witnesses) {
        report.witnesses.push_back({"", points[i], base, m.distance(points[i], base), v.lhs, v.rhs, v.gap});
      }
    }
  }
  report.verdict = report.n_violations > 0 ? Verdict::Violated : Verdict::HoldsOnSamples;
  return report;
}

bool same_direction(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() <= 1e-12 * std::max(1.0, b.norm());
}

}  // namespace

void validate(const Manifold& m, const ProximalCertificate& cert) {
  m.require_chart(cert.base, "proximal certificate");
  if (!(cert.mu > 0.0)) throw DescriptorError("proximal certificate needs mu > 0");
  if (!(cert.lambda >= 0.0)) throw DescriptorError("proximal certificate needs lambda >= 0");
  if ((cert.sigma.base.coords - cert.base.coords).norm() > 1e-12 * std::max(1.0, cert.base.coords.norm())) {
    throw DescriptorError("proximal certificate sigma is not based at the certificate base point");
  }
  m.tangent(cert.base, cert.sigma.comps);
}

SampleValue proximal_sample(const Manifold& m, const ScalarField& h,
                            const ProximalCertificate& cert, const Point& x) {
  const double hx = eval_scalar(m, h, x);
  const double hb = eval_scalar(m, h, cert.base);
  const TangentVector l = m.log_map(cert.base, x);
  const double d = m.norm(l);
  const double rhs = hb + m.inner(cert.sigma, l) - cert.lambda * d * d;
  if (hx == kInf) return {hx, rhs, -kInf};
  return {hx, rhs, rhs - hx};
}

SampleValue i5_sample(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                      const ProximalCertificate& cert, const Point& a) {
  const double ha = eval_scalar(m, h, a);
  const double hb = eval_scalar(m, h, cert.base);
  const TangentVector g = eval_bimap(m, maps.g, a, cert.base);
  const double rhs = hb + m.inner(cert.sigma, g);
  if (ha == kInf) return {ha, rhs, -kInf};
  return {ha, rhs, rhs - ha};
}

std::vector<Point> neighborhood_samples(const Manifold& m, const SampleScheme& scheme,
                                        const Point& center, double radius, std::uint64_t seed) {
  std::vector<Point> pts;
  if (const auto* list = std::get_if<samplers::ExplicitList>(&scheme.sampler)) {
    for (const Point& p : list->points) {
      if (m.distance(p, center) < radius) pts.push_back(p);
    }
    return pts;
  }
  Rng rng(seed);
  pts.reserve(static_cast<std::size_t>(scheme.n_pairs));
  for (int i = 0; i < scheme.n_pairs; ++i) {
    Point p = sample_in_ball(m, center, radius, rng);
    // The ball is open; radius * u^(1/n) with u < 1 stays inside, but guard
    // against rounding at the rim.
    if (m.distance(p, center) < radius) pts.push_back(std::move(p));
  }
  return pts;
}

CheckReport verify_proximal_subgradient(const Manifold& m, const ScalarField& h,
                                        const ProximalCertificate& cert, const SampleScheme& scheme) {
  scheme.validate();
  validate(m, cert);
  if (!std::isfinite(eval_scalar(m, h, cert.base))) {
    throw PremiseFailure("certificate base point is not in dom(H)");
  }
  const std::vector<Point> pts = neighborhood_samples(m, scheme, cert.base, cert.mu, scheme.rng_seed);
  CheckReport report = run_points("verify_proximal_subgradient", pts, cert.base, scheme, m, [&](const Point& x) {
    PointOutcome o;
    if (scheme.domain && !set_contains(m, *scheme.domain, x)) return o;
    o.value = proximal_sample(m, h, cert, x);
    o.in_domain = std::isfinite(o.value.lhs);
    return o;
  });
  if (report.n_evaluated == 0) {
    throw EmptyNeighborhood("no sample of N(base, mu) lies in dom(H)");
  }
  report.set_metric("lambda", cert.lambda);
  report.set_metric("mu", cert.mu);
  return report;
}

std::vector<ProximalCertificate> search_proximal_subgradient(const Manifold& m, const ScalarField& h,
                                                             const Point& base,
                                                             std::vector<double> lambda_grid,
                                                             double mu, const SampleScheme& scheme) {
  const double hb = eval_scalar(m, h, base);
  if (!std::isfinite(hb)) throw PremiseFailure("search base point is not in dom(H)");
  std::sort(lambda_grid.begin(), lambda_grid.end());

  std::vector<TangentVector> candidates;
  auto add = [&](const TangentVector& v) {
    if (!v.comps.allFinite()) return;
    for (const TangentVector& c : candidates) {
      if (same_direction(c.comps, v.comps)) return;
    }
    candidates.push_back(v);
  };
  if (h.differential_kind() == DifferentialKind::Analytic) {
    try {
      add(eval_differential(m, h, base));
    } catch (const NonDifferentiable&) {
    }
  }
  try {
    add(fd_differential(m, h, base));
  } catch (const Error&) {
  }
  add(m.zero_tangent(base));
  constexpr int kProbes = 8;
  Rng rng(derive_seed(scheme.rng_seed, 0x5ec));
  for (int k = 0; k < kProbes; ++k) {
    const Point x = sample_in_ball(m, base, mu, rng);
    const double hx = eval_scalar(m, h, x);
    const TangentVector l = m.log_map(base, x);
    const double d2 = m.inner(l, l);
    if (!std::isfinite(hx) || d2 == 0.0) continue;
    add(l.scaled((hx - hb) / d2));
  }

  std::vector<ProximalCertificate> found;
  for (const TangentVector& sigma : candidates) {
    for (double lambda : lambda_grid) {
      ProximalCertificate cert{base, sigma, lambda, mu};
      try {
        if (verify_proximal_subgradient(m, h, cert, scheme).verdict == Verdict::HoldsOnSamples) {
          found.push_back(std::move(cert));
          break;
        }
      } catch (const EmptyNeighborhood&) {
        return found;
      }
    }
  }
  return found;
}

CheckReport verify_theorem_i5(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                              const ProximalCertificate& cert, const SampleScheme& scheme) {
  scheme.validate();
  validate(m, cert);
  if (!m.is_hadamard()) throw PremiseFailure("not Hadamard: " + to_string(m.kind()) + " has positive curvature");
  if (!h.lower_semicontinuous()) throw PremiseFailure("H is not lower semicontinuous");
  if (!std::isfinite(eval_scalar(m, h, cert.base))) throw PremiseFailure("base point is not in dom(H)");

  CheckReport preinvex = check_preinvex(m, h, maps, scheme);
  if (preinvex.verdict != Verdict::HoldsOnSamples) {
    throw PremiseFailure("H is not (E,F)-preinvex on the scheme (" + to_string(preinvex.verdict) + ")");
  }
  const double min_dist = m.tolerances().strict_min_distance;
  for (const auto& [r1, s1] : sample_pairs(m, scheme)) {
    const Point a = eval_point_map(m, maps.e, r1);
    const Point b = eval_point_map(m, maps.f, s1);
    if (m.distance(a, b) < min_dist) continue;
    if (m.norm(eval_bimap(m, maps.g, a, b)) == 0.0) {
      throw PremiseFailure("G vanishes on a pair of distinct points");
    }
  }
  CheckReport certificate = verify_proximal_subgradient(m, h, cert, scheme);
  if (certificate.verdict != Verdict::HoldsOnSamples) {
    throw PremiseFailure("sigma is not a verified proximal subgradient");
  }

  CheckReport last;
  std::optional<double> passing;
  int levels = 0;
  for (double radius = cert.mu; radius >= m.tolerances().mu_floor; radius /= 2.0, ++levels) {
    const std::vector<Point> pts =
        neighborhood_samples(m, scheme, cert.base, radius, derive_seed(scheme.rng_seed, 100 + levels));
    last = run_points("verify_theorem_i5", pts, cert.base, scheme, m, [&](const Point& a) {
      PointOutcome o;
      if (scheme.domain && !set_contains(m, *scheme.domain, a)) return o;
      o.value = i5_sample(m, h, maps, cert, a);
      o.in_domain = std::isfinite(o.value.lhs);
      return o;
    });
    last.set_metric("mu_tried", radius);
    if (last.verdict == Verdict::HoldsOnSamples) {
      passing = radius;
      ++levels;
      break;
    }
  }

  CheckReport report = assemble_harness("verify_theorem_i5", {std::move(preinvex), std::move(certificate)}, last);
  report.set_metric("levels_tried", levels);
  if (passing) {
    report.set_metric("mu_prime", *passing);
  } else {
    std::ostringstream os;
    os << "no radius down to " << m.tolerances().mu_floor << " satisfies the inequality (falsification at scale)";
    report.notes.push_back(os.str());
  }
  return report;
}

}  // namespace geoinvex
