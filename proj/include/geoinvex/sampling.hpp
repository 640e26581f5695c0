#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "geoinvex/geometry.hpp"
#include "geoinvex/maps.hpp"

namespace geoinvex {

namespace samplers {
/// Points exp_center(v) with v uniform in the tangent ball of `radius`.
struct UniformBall {
  Point center;
  double radius = 1.0;
};
/// A fixed list; pair checks enumerate every ordered pair of it.
struct ExplicitList {
  std::vector<Point> points;
};
}  // namespace samplers

using Sampler = std::variant<samplers::UniformBall, samplers::ExplicitList>;

/// How a checker realizes "for all r1, s1 and all s in [0, 1]" at desk scale.
struct SampleScheme {
  int n_pairs = 1000;
  int s_grid = 11;
  std::uint64_t rng_seed = 0;
  double tol = 1e-8;
  Sampler sampler = samplers::ExplicitList{};
  // Optional restriction: only pairs with E(r1), F(s1) in this set count.
  std::optional<SetPredicate> domain;
  int max_witnesses = 16;
  // Worker threads for the sample loop; never affects results.
  int jobs = 1;

  /// Uniform grid k / (s_grid - 1), k = 0..s_grid-1; endpoints exact.
  std::vector<double> grid() const;
  /// Throws DescriptorError when an invariant of the scheme is broken.
  void validate() const;
};

/// Portable 64-bit generator plus the two distributions the toolkit needs.
/// Unlike the standard distributions its output is identical on every
/// platform for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Mixes a stream index into a base seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Point sample_in_ball(const Manifold& m, const Point& center, double radius, Rng& rng);
std::vector<Point> sample_points(const Manifold& m, const Sampler& sampler, std::size_t n, Rng& rng);
/// The (r1, s1) pairs of a scheme, in sample-index order.
std::vector<std::pair<Point, Point>> sample_pairs(const Manifold& m, const SampleScheme& scheme);

std::string describe(const Sampler& sampler);

}  // namespace geoinvex
