#pragma once

#include <vector>

#include "geoinvex/geometry.hpp"
#include "geoinvex/invexity.hpp"
#include "geoinvex/maps.hpp"
#include "geoinvex/report.hpp"
#include "geoinvex/sampling.hpp"

namespace geoinvex {

/// Claim that sigma is an (E,F)-proximal subgradient of H at `base`:
///   H(x) >= H(base) + <sigma, log_base x> - lambda d(x, base)^2
/// for every x in the open ball N(base, mu). lambda = 0 is accepted.
struct ProximalCertificate {
  Point base;
  TangentVector sigma;
  double lambda = 0.0;
  double mu = 1.0;
};

void validate(const Manifold& m, const ProximalCertificate& cert);

/// lhs = H(x), rhs = H(base) + <sigma, log_base x> - lambda d^2, gap = rhs - lhs.
SampleValue proximal_sample(const Manifold& m, const ScalarField& h,
                            const ProximalCertificate& cert, const Point& x);
/// lhs = H(a), rhs = H(base) + <sigma, G(a, base)>, gap = rhs - lhs.
SampleValue i5_sample(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                      const ProximalCertificate& cert, const Point& a);

/// Points of the scheme that fall in N(center, radius). A uniform-ball
/// scheme is re-centered: n_pairs fresh draws from N(center, radius) with
/// the given seed. An explicit list is filtered.
std::vector<Point> neighborhood_samples(const Manifold& m, const SampleScheme& scheme,
                                        const Point& center, double radius, std::uint64_t seed);

/// Throws EmptyNeighborhood if no sample lands in dom(h).
CheckReport verify_proximal_subgradient(const Manifold& m, const ScalarField& h,
                                        const ProximalCertificate& cert, const SampleScheme& scheme);

/// Candidate directions: the analytic differential (when available), the
/// finite-difference gradient, zero, and secant directions
/// (H(x_k) - H(base)) / d_k^2 * log_base(x_k) towards probe points x_k.
/// Each candidate is paired with the smallest lambda of the grid that
/// verifies; candidates that never verify are dropped.
std::vector<ProximalCertificate> search_proximal_subgradient(const Manifold& m, const ScalarField& h,
                                                             const Point& base,
                                                             std::vector<double> lambda_grid,
                                                             double mu, const SampleScheme& scheme);

inline std::vector<double> default_lambda_grid() { return {0.0, 1e-3, 1e-1, 1.0, 10.0}; }

/// Numerical exercise of the proximal inequality theorem on a Hadamard
/// manifold: after checking the premises, halves mu' from cert.mu down to
/// the mu floor until H(a) >= H(base) + <sigma, G(a, base)> holds on every
/// sample a in N(base, mu') (intersected with scheme.domain). Reaching the
/// floor is a falsification event.
///
/// Throws PremiseFailure naming the failed premise.
CheckReport verify_theorem_i5(const Manifold& m, const ScalarField& h, const MapTriple& maps,
                              const ProximalCertificate& cert, const SampleScheme& scheme);

}  // namespace geoinvex
