#pragma once

// Declarative scenario files: a JSON document naming a manifold, the catalog
// descriptors, sampling schemes and a list of self-grading checks. See
// docs/scenario-format.md for the vocabulary.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoinvex/geometry.hpp"
#include "geoinvex/report.hpp"

namespace geoinvex {

using Json = nlohmann::ordered_json;

enum class RunStatus { Pass, Fail, Falsification };

std::string to_string(RunStatus s);
int exit_code(RunStatus s);

/// Process exit code for configuration errors.
inline constexpr int kConfigErrorExit = 3;

struct MetricBound {
  std::string name;
  std::optional<double> min;  // value >= min
  std::optional<double> max;  // value <= max
  std::optional<double> gt;   // value > gt
  std::optional<double> lt;   // value < lt
};

struct CheckOutcome {
  std::string id;
  std::string op;
  std::string expect;
  bool met = false;
  std::vector<std::string> failures;
  CheckReport report;
};

struct RunReport {
  std::string scenario;
  std::string toolkit_version;
  ManifoldKind manifold_kind = ManifoldKind::Euclidean;
  int manifold_dim = 1;
  RunStatus status = RunStatus::Pass;
  std::vector<CheckOutcome> checks;
  std::uint64_t evaluations = 0;
  std::optional<double> wall_clock_ms;
};

struct LoadOptions {
  // Replaces the seed of every scheme when set.
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  // Dot-path assignments applied to the document before it is interpreted,
  // e.g. "schemes.default.n_pairs=200" or "checks.0.expect=violated".
  std::vector<std::string> overrides;
};

class Scenario {
 public:
  struct Check {
    std::string id;
    std::string op;
    std::string expect;
    std::vector<MetricBound> expect_metrics;
    std::function<CheckReport()> run;
  };

  const std::string& name() const { return name_; }
  const Manifold& manifold() const { return *manifold_; }
  const std::vector<Check>& checks() const { return checks_; }

  /// Runs every check in order. Wall-clock time is recorded only when
  /// `timing` is set, so that reports stay byte-identical by default.
  RunReport run(bool timing = false) const;

 private:
  friend Scenario load_scenario(const Json& doc, const LoadOptions& options);
  std::string name_;
  std::optional<Manifold> manifold_;
  std::vector<Check> checks_;
};

/// Interprets a scenario document. Every descriptor is resolved eagerly, so
/// a returned scenario cannot fail on configuration later.
///
/// Throws ConfigError naming the offending field path.
Scenario load_scenario(const Json& doc, const LoadOptions& options = {});
/// Reads and parses a scenario file; JSON syntax errors are reported with
/// their line and column.
Json read_scenario_file(const std::filesystem::path& path);
void apply_override(Json& doc, const std::string& assignment);

/// True if the outcome's report meets the expectation and metric bounds;
/// failure reasons are appended to `failures`.
bool grade(const CheckReport& report, const std::string& expect,
           const std::vector<MetricBound>& bounds, std::vector<std::string>& failures);

/// Multi-line text listing the descriptor vocabulary.
std::string catalog_listing();

}  // namespace geoinvex
