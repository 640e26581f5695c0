#include "geoinvex/report_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geoinvex/errors.hpp"

namespace geoinvex {

namespace {

constexpr int kSchemaVersion = 1;

Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double num(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw ConfigError("report", "expected a number, got '" + s + "'");
}

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

Eigen::VectorXd vec(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = num(j[i]);
  return v;
}

std::string full(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string full(const Eigen::VectorXd& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + full(v(i));
  return s + ")";
}

ManifoldKind kind_from_string(const std::string& s) {
  if (s == "euclidean") return ManifoldKind::Euclidean;
  if (s == "sphere_cap") return ManifoldKind::SphereCap;
  if (s == "hyperboloid") return ManifoldKind::Hyperboloid;
  throw ConfigError("manifold.kind", "unknown manifold kind '" + s + "'");
}

RunStatus status_from_string(const std::string& s) {
  if (s == "PASS") return RunStatus::Pass;
  if (s == "FAIL") return RunStatus::Fail;
  if (s == "FALSIFICATION") return RunStatus::Falsification;
  throw ConfigError("status", "unknown run status '" + s + "'");
}

CheckReport check_from_json(const Json& j, const Chart& chart) {
  CheckReport r;
  r.check = j.at("check").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.premise = premise_from_string(j.at("premise").get<std::string>());
  r.theorem_harness = j.at("theorem_harness").get<bool>();
  r.falsified = j.at("falsified").get<bool>();
  r.n_evaluated = j.at("n_evaluated").get<std::uint64_t>();
  r.n_skipped = j.at("n_skipped").get<std::uint64_t>();
  r.n_inconclusive = j.at("n_inconclusive").get<std::uint64_t>();
  r.n_violations = j.at("n_violations").get<std::uint64_t>();
  r.max_gap = num(j.at("max_gap"));
  for (const auto& [k, v] : j.at("metrics").items()) r.metrics.emplace_back(k, num(v));
  for (const auto& [k, v] : j.at("vectors").items()) r.vectors.emplace_back(k, vec(v));
  for (const auto& n : j.at("notes")) r.notes.push_back(n.get<std::string>());
  if (j.contains("scheme")) {
    const Json& s = j["scheme"];
    r.scheme = SchemeEcho{s.at("n_pairs").get<int>(), s.at("s_grid").get<int>(), s.at("seed").get<std::uint64_t>(),
                          num(s.at("tol")), s.at("sampler").get<std::string>()};
  }
  for (const auto& w : j.at("witnesses")) {
    r.witnesses.push_back({w.at("label").get<std::string>(), Point{chart, vec(w.at("r1"))},
                           Point{chart, vec(w.at("s1"))}, num(w.at("param")), num(w.at("lhs")), num(w.at("rhs")),
                           num(w.at("gap"))});
  }
  for (const auto& sub : j.at("subreports")) r.subreports.push_back(check_from_json(sub, chart));
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void text_check(std::ostringstream& os, const CheckReport& r, const std::string& indent) {
  os << indent << r.check << ": " << to_string(r.verdict) << "  premise " << to_string(r.premise);
  if (r.falsified) os << "  FALSIFIED";
  os << "\n";
  os << indent << "  evaluated " << r.n_evaluated << ", skipped " << r.n_skipped << ", inconclusive "
     << r.n_inconclusive << ", violations " << r.n_violations << ", max gap " << full(r.max_gap) << "\n";
  if (r.scheme) {
    os << indent << "  scheme: " << r.scheme->sampler << ", n_pairs " << r.scheme->n_pairs << ", s_grid "
       << r.scheme->s_grid << ", seed " << r.scheme->rng_seed << ", tol " << full(r.scheme->tol) << "\n";
  }
  for (const auto& [k, v] : r.metrics) os << indent << "  " << k << " = " << full(v) << "\n";
  for (const auto& [k, v] : r.vectors) os << indent << "  " << k << " = " << full(v) << "\n";
  for (const std::string& n : r.notes) os << indent << "  note: " << n << "\n";
  for (const Witness& w : r.witnesses) {
    os << indent << "  witness";
    if (!w.label.empty()) os << " [" << w.label << "]";
    os << ": r1 = " << full(w.r1.coords) << ", s1 = " << full(w.s1.coords) << ", param = " << full(w.param)
       << ", lhs = " << full(w.lhs) << ", rhs = " << full(w.rhs) << ", gap = " << full(w.gap) << "\n";
  }
  for (const CheckReport& sub : r.subreports) text_check(os, sub, indent + "    ");
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "text") return ReportFormat::Text;
  if (s == "csv") return ReportFormat::Csv;
  throw ConfigError("--format", "unknown format '" + s + "' (expected json, text or csv)");
}

Json to_json(const CheckReport& r) {
  Json j;
  j["check"] = r.check;
  j["verdict"] = to_string(r.verdict);
  j["premise"] = to_string(r.premise);
  j["theorem_harness"] = r.theorem_harness;
  j["falsified"] = r.falsified;
  j["n_evaluated"] = r.n_evaluated;
  j["n_skipped"] = r.n_skipped;
  j["n_inconclusive"] = r.n_inconclusive;
  j["n_violations"] = r.n_violations;
  j["max_gap"] = num(r.max_gap);
  j["metrics"] = Json::object();
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = num(v);
  j["vectors"] = Json::object();
  for (const auto& [k, v] : r.vectors) j["vectors"][k] = vec(v);
  j["notes"] = r.notes;
  if (r.scheme) {
    j["scheme"] = {{"n_pairs", r.scheme->n_pairs},
                   {"s_grid", r.scheme->s_grid},
                   {"seed", r.scheme->rng_seed},
                   {"tol", num(r.scheme->tol)},
                   {"sampler", r.scheme->sampler}};
  }
  j["witnesses"] = Json::array();
  for (const Witness& w : r.witnesses) {
    j["witnesses"].push_back({{"label", w.label},
                              {"r1", vec(w.r1.coords)},
                              {"s1", vec(w.s1.coords)},
                              {"param", num(w.param)},
                              {"lhs", num(w.lhs)},
                              {"rhs", num(w.rhs)},
                              {"gap", num(w.gap)}});
  }
  j["subreports"] = Json::array();
  for (const CheckReport& sub : r.subreports) j["subreports"].push_back(to_json(sub));
  return j;
}

Json to_json(const RunReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["toolkit_version"] = r.toolkit_version;
  j["scenario"] = r.scenario;
  j["manifold"] = {{"kind", to_string(r.manifold_kind)}, {"dim", r.manifold_dim}};
  j["status"] = to_string(r.status);
  std::size_t met = 0;
  for (const CheckOutcome& c : r.checks) met += c.met ? 1 : 0;
  j["summary"] = {{"checks", r.checks.size()}, {"met", met}, {"evaluations", r.evaluations}};
  if (r.wall_clock_ms) j["wall_clock_ms"] = num(*r.wall_clock_ms);
  j["checks"] = Json::array();
  for (const CheckOutcome& c : r.checks) {
    j["checks"].push_back({{"id", c.id},
                           {"op", c.op},
                           {"expect", c.expect},
                           {"met", c.met},
                           {"failures", c.failures},
                           {"report", to_json(c.report)}});
  }
  return j;
}

CheckReport check_report_from_json(const Json& j, const Manifold& m) { return check_from_json(j, m.chart()); }

RunReport run_report_from_json(const Json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw ConfigError("schema_version", "unsupported report schema");
    }
    RunReport r;
    r.toolkit_version = j.at("toolkit_version").get<std::string>();
    r.scenario = j.at("scenario").get<std::string>();
    r.manifold_kind = kind_from_string(j.at("manifold").at("kind").get<std::string>());
    r.manifold_dim = j.at("manifold").at("dim").get<int>();
    r.status = status_from_string(j.at("status").get<std::string>());
    r.evaluations = j.at("summary").at("evaluations").get<std::uint64_t>();
    if (j.contains("wall_clock_ms")) r.wall_clock_ms = num(j["wall_clock_ms"]);
    const Chart chart{r.manifold_kind, r.manifold_dim};
    for (const auto& c : j.at("checks")) {
      CheckOutcome o;
      o.id = c.at("id").get<std::string>();
      o.op = c.at("op").get<std::string>();
      o.expect = c.at("expect").get<std::string>();
      o.met = c.at("met").get<bool>();
      for (const auto& f : c.at("failures")) o.failures.push_back(f.get<std::string>());
      o.report = check_from_json(c.at("report"), chart);
      r.checks.push_back(std::move(o));
    }
    return r;
  } catch (const Json::exception& e) {
    throw ConfigError("report", e.what());
  }
}

std::string emit_report(const RunReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(r).dump(2) + "\n";
  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "id,op,expect,met,verdict,premise,falsified,n_evaluated,n_violations,max_gap\n";
    for (const CheckOutcome& c : r.checks) {
      os << csv_field(c.id) << "," << c.op << "," << c.expect << "," << (c.met ? "true" : "false") << ","
         << to_string(c.report.verdict) << "," << to_string(c.report.premise) << ","
         << (c.report.falsified ? "true" : "false") << "," << c.report.n_evaluated << "," << c.report.n_violations
         << "," << full(c.report.max_gap) << "\n";
    }
    return os.str();
  }
  std::size_t met = 0;
  for (const CheckOutcome& c : r.checks) met += c.met ? 1 : 0;
  os << "scenario " << r.scenario << " (" << to_string(r.manifold_kind) << ", dim " << r.manifold_dim
     << ", toolkit " << r.toolkit_version << ")\n";
  os << "status " << to_string(r.status) << ": " << met << "/" << r.checks.size() << " expectations met, "
     << r.evaluations << " evaluations";
  if (r.wall_clock_ms) os << ", " << full(*r.wall_clock_ms) << " ms";
  os << "\n";
  for (const CheckOutcome& c : r.checks) {
    os << "\n[" << (c.met ? "met" : "UNMET") << "] " << c.id << " (" << c.op << ", expect " << c.expect << ")\n";
    for (const std::string& f : c.failures) os << "  failure: " << f << "\n";
    text_check(os, c.report, "  ");
  }
  return os.str();
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(path, "cannot open output file");
    out << content;
    if (!out.flush()) throw ConfigError(path, "write failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace geoinvex
