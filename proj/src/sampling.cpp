#include "geoinvex/sampling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "geoinvex/errors.hpp"

namespace geoinvex {

std::vector<double> SampleScheme::grid() const {
  std::vector<double> g(static_cast<std::size_t>(s_grid));
  const double last = static_cast<double>(s_grid - 1);
  for (int k = 0; k < s_grid; ++k) g[static_cast<std::size_t>(k)] = k / last;
  g.back() = 1.0;
  return g;
}

void SampleScheme::validate() const {
  if (n_pairs < 1) throw DescriptorError("sample scheme needs n_pairs >= 1");
  if (s_grid < 2) throw DescriptorError("sample scheme needs s_grid >= 2");
  if (!(tol >= 0.0)) throw DescriptorError("sample scheme tolerance must be >= 0");
  if (max_witnesses < 1) throw DescriptorError("sample scheme needs max_witnesses >= 1");
  if (const auto* b = std::get_if<samplers::UniformBall>(&sampler); b && !(b->radius >= 0.0)) {
    throw DescriptorError("uniform_ball radius must be >= 0");
  }
}

double Rng::uniform() {
  // 53 random mantissa bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  return r * std::cos(t);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Point sample_in_ball(const Manifold& m, const Point& center, double radius, Rng& rng) {
  m.require_chart(center, "sample_in_ball");
  const std::vector<TangentVector> basis = m.tangent_basis(center);
  const int n = static_cast<int>(basis.size());
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Eigen::VectorXd coeff(n);
    for (int i = 0; i < n; ++i) coeff[i] = rng.normal();
    const double len = coeff.norm();
    const double r = radius * std::pow(rng.uniform(), 1.0 / n);
    if (len == 0.0) continue;
    TangentVector v = m.zero_tangent(center);
    for (int i = 0; i < n; ++i) v.comps += (r * coeff[i] / len) * basis[static_cast<std::size_t>(i)].comps;
    try {
      return m.exp_map(v);
    } catch (const OutOfChart&) {
      // the cap boundary cuts the ball; draw again
    }
  }
  throw OutOfChart("uniform_ball sampler could not place a point inside the chart");
}

std::vector<Point> sample_points(const Manifold& m, const Sampler& sampler, std::size_t n, Rng& rng) {
  std::vector<Point> out;
  if (const auto* ball = std::get_if<samplers::UniformBall>(&sampler)) {
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_in_ball(m, ball->center, ball->radius, rng));
    return out;
  }
  const auto& list = std::get<samplers::ExplicitList>(sampler);
  for (const Point& p : list.points) m.require_chart(p, "explicit_list");
  for (std::size_t i = 0; i < n && !list.points.empty(); ++i) out.push_back(list.points[i % list.points.size()]);
  return out;
}

std::vector<std::pair<Point, Point>> sample_pairs(const Manifold& m, const SampleScheme& scheme) {
  scheme.validate();
  std::vector<std::pair<Point, Point>> pairs;
  if (const auto* ball = std::get_if<samplers::UniformBall>(&scheme.sampler)) {
    Rng rng(scheme.rng_seed);
    pairs.reserve(static_cast<std::size_t>(scheme.n_pairs));
    for (int i = 0; i < scheme.n_pairs; ++i) {
      Point r1 = sample_in_ball(m, ball->center, ball->radius, rng);
      Point s1 = sample_in_ball(m, ball->center, ball->radius, rng);
      pairs.emplace_back(std::move(r1), std::move(s1));
    }
    return pairs;
  }
  const auto& list = std::get<samplers::ExplicitList>(scheme.sampler);
  for (const Point& p : list.points) m.require_chart(p, "explicit_list");
  pairs.reserve(list.points.size() * list.points.size());
  for (const Point& r1 : list.points) {
    for (const Point& s1 : list.points) pairs.emplace_back(r1, s1);
  }
  return pairs;
}

std::string describe(const Sampler& sampler) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* ball = std::get_if<samplers::UniformBall>(&sampler)) {
    os << "uniform_ball([";
    for (Eigen::Index i = 0; i < ball->center.coords.size(); ++i) os << (i ? ", " : "") << ball->center.coords[i];
    os << "], " << ball->radius << ")";
  } else {
    os << "explicit_list(" << std::get<samplers::ExplicitList>(sampler).points.size() << ")";
  }
  return os.str();
}

}  // namespace geoinvex
