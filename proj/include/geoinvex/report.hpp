#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geoinvex/geometry.hpp"

namespace geoinvex {

enum class Verdict { HoldsOnSamples, Violated, Inconclusive };
enum class Premise { NotApplicable, Met, Failed };

std::string to_string(Verdict v);
std::string to_string(Premise p);
Verdict verdict_from_string(const std::string& s);
Premise premise_from_string(const std::string& s);

/// One sampled instance of a defining inequality. `gap > 0` means the
/// inequality fails by that amount; for set predicates lhs is the membership
/// excess of the probed point and rhs is 0.
struct Witness {
  std::string label;
  Point r1;
  Point s1;
  double param = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

struct SchemeEcho {
  int n_pairs = 0;
  int s_grid = 0;
  std::uint64_t rng_seed = 0;
  double tol = 0.0;
  std::string sampler;
};

struct CheckReport {
  std::string check;
  Verdict verdict = Verdict::HoldsOnSamples;
  Premise premise = Premise::NotApplicable;
  bool theorem_harness = false;
  // A theorem harness whose premises held but whose conclusion was violated.
  bool falsified = false;
  std::vector<Witness> witnesses;
  std::uint64_t n_evaluated = 0;
  std::uint64_t n_skipped = 0;
  std::uint64_t n_inconclusive = 0;
  std::uint64_t n_violations = 0;
  double max_gap = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::string, double>> metrics;
  // Named ambient vectors: minimizers, certificate directions.
  std::vector<std::pair<std::string, Eigen::VectorXd>> vectors;
  std::vector<std::string> notes;
  std::optional<SchemeEcho> scheme;
  std::vector<CheckReport> subreports;

  std::optional<double> metric(const std::string& name) const;
  void set_metric(const std::string& name, double value);
};

}  // namespace geoinvex
