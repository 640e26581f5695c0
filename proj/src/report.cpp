#include "geoinvex/report.hpp"

#include "geoinvex/errors.hpp"

namespace geoinvex {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::HoldsOnSamples:
      return "HOLDS_ON_SAMPLES";
    case Verdict::Violated:
      return "VIOLATED";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::string to_string(Premise p) {
  switch (p) {
    case Premise::NotApplicable:
      return "NOT_APPLICABLE";
    case Premise::Met:
      return "MET";
    case Premise::Failed:
      return "FAILED";
  }
  return "NOT_APPLICABLE";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "HOLDS_ON_SAMPLES") return Verdict::HoldsOnSamples;
  if (s == "VIOLATED") return Verdict::Violated;
  if (s == "INCONCLUSIVE") return Verdict::Inconclusive;
  throw ConfigError("verdict", "unknown verdict '" + s + "'");
}

Premise premise_from_string(const std::string& s) {
  if (s == "NOT_APPLICABLE") return Premise::NotApplicable;
  if (s == "MET") return Premise::Met;
  if (s == "FAILED") return Premise::Failed;
  throw ConfigError("premise", "unknown premise state '" + s + "'");
}

std::optional<double> CheckReport::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  return std::nullopt;
}

void CheckReport::set_metric(const std::string& name, double value) {
  for (auto& [k, v] : metrics) {
    if (k == name) {
      v = value;
      return;
    }
  }
  metrics.emplace_back(name, value);
}

}  // namespace geoinvex
