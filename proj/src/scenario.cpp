#include "geoinvex/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "geoinvex/errors.hpp"
#include "geoinvex/invexity.hpp"
#include "geoinvex/maps.hpp"
#include "geoinvex/optimize.hpp"
#include "geoinvex/sampling.hpp"
#include "geoinvex/subgradient.hpp"
#include "geoinvex/version.hpp"

namespace geoinvex {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Pass:
      return "PASS";
    case RunStatus::Fail:
      return "FAIL";
    case RunStatus::Falsification:
      return "FALSIFICATION";
  }
  return "FAIL";
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Pass:
      return 0;
    case RunStatus::Fail:
      return 1;
    case RunStatus::Falsification:
      return 2;
  }
  return 1;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path, what); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing required field");
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(path, "expected a number");
}

double number(const Json& obj, const std::string& key, const std::string& path, std::optional<double> fallback) {
  const Json* j = optional_field(obj, key);
  if (!j) {
    if (!fallback) fail(join(path, key), "missing required field");
    return *fallback;
  }
  return number(*j, join(path, key));
}

int integer(const Json& obj, const std::string& key, const std::string& path, std::optional<int> fallback) {
  const Json* j = optional_field(obj, key);
  if (!j) {
    if (!fallback) fail(join(path, key), "missing required field");
    return *fallback;
  }
  if (!j->is_number_integer()) fail(join(path, key), "expected an integer");
  return j->get<int>();
}

bool boolean(const Json& obj, const std::string& key, const std::string& path, bool fallback) {
  const Json* j = optional_field(obj, key);
  if (!j) return fallback;
  if (!j->is_boolean()) fail(join(path, key), "expected true or false");
  return j->get<bool>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd vector(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], join(path, i));
  return v;
}

Eigen::MatrixXd matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Eigen::VectorXd row = vector(j[r], join(path, r));
    if (static_cast<std::size_t>(row.size()) != cols) fail(join(path, r), "ragged matrix row");
    a.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return a;
}

std::string type_of(const Json& j, const std::string& path) { return text(require(j, "type", path), join(path, "type")); }

Tolerances read_tolerances(const Json* j, const std::string& path) {
  Tolerances t;
  if (!j) return t;
  if (!j->is_object()) fail(path, "expected an object");
  const std::map<std::string, double Tolerances::*> fields{
      {"point_tol", &Tolerances::point_tol},
      {"tangent_tol", &Tolerances::tangent_tol},
      {"reproject_tol", &Tolerances::reproject_tol},
      {"violation_tol", &Tolerances::violation_tol},
      {"fd_step", &Tolerances::fd_step},
      {"strict_min_distance", &Tolerances::strict_min_distance},
      {"differential_rel_tol", &Tolerances::differential_rel_tol},
      {"spread_tol", &Tolerances::spread_tol},
      {"opt_rel_tol", &Tolerances::opt_rel_tol},
      {"diameter_tol", &Tolerances::diameter_tol},
      {"mu_floor", &Tolerances::mu_floor},
  };
  for (const auto& [key, value] : j->items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) fail(join(path, key), "unknown tolerance");
    const double v = number(value, join(path, key));
    if (!(v > 0.0)) fail(join(path, key), "tolerances must be positive");
    t.*(it->second) = v;
  }
  return t;
}

Manifold read_manifold(const Json& doc, const Tolerances& tol) {
  const std::string path = "manifold";
  const Json& j = require(doc, "manifold", "");
  const std::string kind = text(require(j, "kind", path), join(path, "kind"));
  try {
    if (kind == "euclidean") return Manifold::euclidean(integer(j, "dim", path, std::nullopt), tol);
    if (kind == "hyperboloid") return Manifold::hyperboloid(integer(j, "dim", path, std::nullopt), tol);
    if (kind == "sphere_cap") {
      const Eigen::VectorXd center = vector(require(j, "center", path), join(path, "center"));
      if (const Json* d = optional_field(j, "dim"); d && d->get<int>() + 1 != center.size()) {
        fail(join(path, "dim"), "sphere_cap dim must be one less than the center's length");
      }
      return Manifold::sphere_cap(center, number(j, "radius", path, std::nullopt), tol);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
  fail(join(path, "kind"), "unknown manifold kind '" + kind + "' (expected euclidean, sphere_cap or hyperboloid)");
}

const std::set<std::string> kHarnessOps{"check_sum_preinvex", "check_level_set_invex",
                                         "theorem_preinvex_implies_invex",
                                         "theorem_invex_plus_A_implies_preinvex", "verify_theorem_i5",
                                         "multistart_local_global"};

const std::set<std::string> kExpectations{"holds", "violated", "inconclusive", "premise_failed"};

// Resolves descriptors against the document, memoizing named entries.
class Resolver {
 public:
  Resolver(const Json& doc, Manifold m, int jobs) : doc_(doc), m_(std::move(m)), jobs_(jobs) {}

  const Manifold& manifold() const { return m_; }

  Point point(const Json& j, const std::string& path) {
    if (j.is_string()) {
      const std::string name = j.get<std::string>();
      if (name == "origin") return m_.origin();
      return named(points_, "points", name, path, [&](const Json& d, const std::string& p) { return point(d, p); });
    }
    try {
      if (j.is_array()) return m_.point(vector(j, path));
      if (j.is_object()) {
        if (const Json* c = optional_field(j, "lift")) return m_.lift(vector(*c, join(path, "lift")));
        if (const Json* c = optional_field(j, "from_origin")) {
          const Eigen::VectorXd coeffs = vector(*c, join(path, "from_origin"));
          const Point o = m_.origin();
          const std::vector<TangentVector> basis = m_.tangent_basis(o);
          if (static_cast<std::size_t>(coeffs.size()) != basis.size()) {
            fail(join(path, "from_origin"), "expected " + std::to_string(basis.size()) + " intrinsic coordinates");
          }
          Eigen::VectorXd v = Eigen::VectorXd::Zero(o.coords.size());
          for (std::size_t i = 0; i < basis.size(); ++i) v += coeffs(static_cast<Eigen::Index>(i)) * basis[i].comps;
          return m_.exp_map(m_.tangent(o, v));
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(path, e.what());
    }
    fail(path, "expected a point: name, coordinate array, {\"lift\": [...]} or {\"from_origin\": [...]}");
  }

  std::vector<Point> points(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of points");
    std::vector<Point> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], join(path, i)));
    return out;
  }

  ScalarField field(const Json& j, const std::string& path) {
    if (j.is_string()) {
      return named(fields_, "fields", j.get<std::string>(), path,
                   [&](const Json& d, const std::string& p) { return field(d, p); });
    }
    const std::string type = type_of(j, path);
    ScalarField h = build_field(type, j, path);
    if (const Json* d = optional_field(j, "differential")) {
      const std::string kind = text(*d, join(path, "differential"));
      if (kind == "analytic") {
        h = h.with_differential(DifferentialKind::Analytic);
      } else if (kind == "finite_difference") {
        h = h.with_differential(DifferentialKind::FiniteDifference);
      } else if (kind == "none") {
        h = h.with_differential(DifferentialKind::None);
      } else {
        fail(join(path, "differential"), "expected analytic, finite_difference or none");
      }
    }
    if (optional_field(j, "lsc")) h = h.with_lsc(boolean(j, "lsc", path, true));
    return h;
  }

  SetPredicate set(const Json& j, const std::string& path) {
    if (j.is_string()) {
      return named(sets_, "sets", j.get<std::string>(), path,
                   [&](const Json& d, const std::string& p) { return set(d, p); });
    }
    const std::string type = type_of(j, path);
    try {
      if (type == "metric_ball") {
        return SetPredicate::metric_ball(point(require(j, "center", path), join(path, "center")),
                                         number(j, "radius", path, std::nullopt));
      }
      if (type == "sublevel") {
        return SetPredicate::sublevel(field(require(j, "field", path), join(path, "field")),
                                      number(j, "level", path, std::nullopt));
      }
      if (type == "finite_union" || type == "intersection") {
        const Json& members = require(j, "members", path);
        if (!members.is_array()) fail(join(path, "members"), "expected an array of sets");
        std::vector<SetPredicate> sets;
        for (std::size_t i = 0; i < members.size(); ++i) sets.push_back(set(members[i], join(join(path, "members"), i)));
        return type == "finite_union" ? SetPredicate::finite_union(std::move(sets))
                                      : SetPredicate::intersection(std::move(sets));
      }
      if (type == "difference") {
        return SetPredicate::difference(set(require(j, "keep", path), join(path, "keep")),
                                        set(require(j, "remove", path), join(path, "remove")));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(path, e.what());
    }
    fail(join(path, "type"), "unknown set predicate '" + type + "'");
  }

  PointMap point_map(const Json& j, const std::string& path) {
    const std::string type = j.is_string() ? j.get<std::string>() : type_of(j, path);
    try {
      if (type == "identity") return pointmaps::Identity{};
      if (type == "constant") return pointmaps::Constant{point(require(j, "point", path), join(path, "point"))};
      if (type == "geodesic_contraction") {
        return make_contraction(point(require(j, "center", path), join(path, "center")),
                                number(j, "factor", path, std::nullopt));
      }
      if (type == "coordinate_affine") {
        if (m_.kind() != ManifoldKind::Euclidean) fail(path, "coordinate_affine needs a euclidean manifold");
        pointmaps::CoordinateAffine a{matrix(require(j, "matrix", path), join(path, "matrix")),
                                      vector(require(j, "offset", path), join(path, "offset"))};
        if (a.matrix.rows() != m_.ambient_dim() || a.matrix.cols() != m_.ambient_dim() ||
            a.offset.size() != m_.ambient_dim()) {
          fail(path, "matrix and offset must match the manifold dimension");
        }
        return a;
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(path, e.what());
    }
    fail(path, "unknown point map '" + type + "'");
  }

  BiMap bimap(const Json& j, const std::string& path) {
    const std::string type = j.is_string() ? j.get<std::string>() : type_of(j, path);
    if (type == "log_based") return bimaps::LogBased{};
    if (type == "scaled_log") return bimaps::ScaledLog{number(j, "factor", path, std::nullopt)};
    if (type == "euclidean_difference") {
      if (m_.kind() != ManifoldKind::Euclidean) fail(path, "euclidean_difference needs a euclidean manifold");
      return bimaps::EuclideanDifference{};
    }
    if (type == "custom_table") {
      bimaps::CustomTable table;
      table.match_tol = number(j, "match_tol", path, 1e-12);
      if (const Json* entries = optional_field(j, "entries")) {
        if (!entries->is_array()) fail(join(path, "entries"), "expected an array");
        for (std::size_t i = 0; i < entries->size(); ++i) {
          const std::string p = join(join(path, "entries"), i);
          const Point a = point(require((*entries)[i], "a", p), join(p, "a"));
          const Point b = point(require((*entries)[i], "b", p), join(p, "b"));
          const Eigen::VectorXd value = vector(require((*entries)[i], "value", p), join(p, "value"));
          try {
            m_.tangent(b, value);
          } catch (const Error& e) {
            fail(join(p, "value"), e.what());
          }
          table.entries.push_back({a.coords, b.coords, value});
        }
      }
      // Shorthand: G = 0 on every ordered pair of the listed points.
      if (const Json* zero = optional_field(j, "zero_on")) {
        const std::vector<Point> pts = points(*zero, join(path, "zero_on"));
        for (const Point& a : pts) {
          for (const Point& b : pts) {
            table.entries.push_back({a.coords, b.coords, Eigen::VectorXd::Zero(b.coords.size())});
          }
        }
      }
      if (table.entries.empty()) fail(path, "custom_table needs entries or zero_on");
      return table;
    }
    fail(path, "unknown bi-map '" + type + "'");
  }

  MapTriple maps(const Json* j, const std::string& path, MapTriple base) {
    if (!j) return base;
    if (!j->is_object()) fail(path, "expected an object with E, F and G");
    for (const auto& [key, value] : j->items()) {
      if (key == "E") {
        base.e = point_map(value, join(path, key));
      } else if (key == "F") {
        base.f = point_map(value, join(path, key));
      } else if (key == "G") {
        base.g = bimap(value, join(path, key));
      } else {
        fail(join(path, key), "unknown map slot (expected E, F or G)");
      }
    }
    return base;
  }

  SampleScheme scheme(const Json& j, const std::string& path, std::optional<std::uint64_t> seed_override) {
    if (j.is_string()) {
      const std::string name = j.get<std::string>();
      const Json* section = optional_field(doc_, "schemes");
      if (!section || !section->contains(name)) fail(path, "unknown scheme '" + name + "'");
      return scheme((*section)[name], join("schemes", name), seed_override);
    }
    if (!j.is_object()) fail(path, "expected a scheme name or object");
    SampleScheme s;
    s.n_pairs = integer(j, "n_pairs", path, 1000);
    s.s_grid = integer(j, "s_grid", path, 11);
    const Json& seed = require(j, "seed", path);
    if (!seed.is_number_unsigned()) fail(join(path, "seed"), "expected a non-negative integer");
    s.rng_seed = seed_override ? *seed_override : seed.get<std::uint64_t>();
    s.tol = number(j, "tol", path, m_.tolerances().violation_tol);
    s.max_witnesses = integer(j, "max_witnesses", path, 16);
    s.jobs = jobs_;
    const Json& sampler = require(j, "sampler", path);
    const std::string sp = join(path, "sampler");
    const std::string type = type_of(sampler, sp);
    if (type == "uniform_ball") {
      s.sampler = samplers::UniformBall{point(require(sampler, "center", sp), join(sp, "center")),
                                        number(sampler, "radius", sp, std::nullopt)};
    } else if (type == "explicit_list") {
      s.sampler = samplers::ExplicitList{points(require(sampler, "points", sp), join(sp, "points"))};
    } else {
      fail(join(sp, "type"), "unknown sampler '" + type + "' (expected uniform_ball or explicit_list)");
    }
    if (const Json* d = optional_field(j, "domain")) s.domain = set(*d, join(path, "domain"));
    try {
      s.validate();
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return s;
  }

  DescentConfig descent(const Json* j, const std::string& path) {
    DescentConfig cfg;
    if (!j) return cfg;
    if (j->is_string()) {
      const std::string name = j->get<std::string>();
      const Json* section = optional_field(doc_, "descent");
      if (!section || !section->contains(name)) fail(path, "unknown descent config '" + name + "'");
      return descent(&(*section)[name], join("descent", name));
    }
    if (!j->is_object()) fail(path, "expected a descent config name or object");
    cfg.max_iters = integer(*j, "max_iters", path, cfg.max_iters);
    cfg.grad_tol = number(*j, "grad_tol", path, cfg.grad_tol);
    cfg.value_tol = number(*j, "value_tol", path, cfg.value_tol);
    cfg.subgradient_mode = boolean(*j, "subgradient_mode", path, false);
    if (const Json* step = optional_field(*j, "step")) {
      const std::string sp = join(path, "step");
      const std::string type = type_of(*step, sp);
      if (type == "fixed") {
        cfg.step = steps::Fixed{number(*step, "eta", sp, 0.1)};
      } else if (type == "backtracking") {
        steps::Backtracking b;
        b.initial = number(*step, "initial", sp, b.initial);
        b.shrink = number(*step, "shrink", sp, b.shrink);
        b.armijo = number(*step, "armijo", sp, b.armijo);
        cfg.step = b;
      } else {
        fail(join(sp, "type"), "unknown step rule '" + type + "' (expected fixed or backtracking)");
      }
    }
    try {
      cfg.validate();
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return cfg;
  }

 private:
  template <class T, class Build>
  T named(std::map<std::string, T>& cache, const std::string& section, const std::string& name,
          const std::string& path, Build&& build) {
    if (const auto it = cache.find(name); it != cache.end()) return it->second;
    const Json* entries = optional_field(doc_, section);
    if (!entries || !entries->is_object() || !entries->contains(name)) {
      fail(path, "unknown name '" + name + "' (not defined under " + section + ")");
    }
    const std::string key = section + "." + name;
    if (!resolving_.insert(key).second) fail(path, "circular reference through " + key);
    T value = build((*entries)[name], key);
    resolving_.erase(key);
    cache.emplace(name, value);
    return value;
  }

  ScalarField build_field(const std::string& type, const Json& j, const std::string& path) {
    try {
      if (type == "squared_distance") {
        return ScalarField::squared_distance(point(require(j, "anchor", path), join(path, "anchor")));
      }
      if (type == "distance") return ScalarField::distance(point(require(j, "anchor", path), join(path, "anchor")));
      if (type == "linear_height") {
        const Eigen::VectorXd w = vector(require(j, "weights", path), join(path, "weights"));
        if (w.size() != m_.ambient_dim()) fail(join(path, "weights"), "length must match the ambient dimension");
        return ScalarField::linear_height(w);
      }
      if (type == "negated") return ScalarField::negated(field(require(j, "of", path), join(path, "of")));
      if (type == "weighted_sum") return ScalarField::weighted_sum(terms(require(j, "terms", path), join(path, "terms")));
      if (type == "zero") return ScalarField::weighted_sum({});
      if (type == "product") {
        return ScalarField::product(field(require(j, "lhs", path), join(path, "lhs")),
                                    field(require(j, "rhs", path), join(path, "rhs")));
      }
      if (type == "indicator_extended") {
        return ScalarField::indicator_extended(field(require(j, "of", path), join(path, "of")),
                                               set(require(j, "domain", path), join(path, "domain")));
      }
      if (type == "spike") {
        return ScalarField::spike(point(require(j, "at", path), join(path, "at")), number(j, "height", path, 1.0));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(path, e.what());
    }
    fail(join(path, "type"), "unknown scalar field '" + type + "'");
  }

 public:
  std::vector<std::pair<double, ScalarField>> terms(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of {weight, field} terms");
    std::vector<std::pair<double, ScalarField>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = join(path, i);
      out.emplace_back(number(j[i], "weight", p, std::nullopt), field(require(j[i], "field", p), join(p, "field")));
    }
    return out;
  }

  ProximalCertificate certificate(const Json& j, const std::string& path, const ScalarField& h) {
    ProximalCertificate c;
    c.base = point(require(j, "base", path), join(path, "base"));
    const Json& sigma = require(j, "sigma", path);
    try {
      if (sigma.is_string() && sigma.get<std::string>() == "differential") {
        c.sigma = eval_differential(m_, h, c.base);
      } else {
        c.sigma = m_.tangent(c.base, vector(sigma, join(path, "sigma")));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(join(path, "sigma"), e.what());
    }
    c.lambda = number(j, "lambda", path, std::nullopt);
    c.mu = number(j, "mu", path, std::nullopt);
    try {
      validate(m_, c);
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return c;
  }

 private:
  const Json& doc_;
  Manifold m_;
  int jobs_;
  std::map<std::string, Point> points_;
  std::map<std::string, ScalarField> fields_;
  std::map<std::string, SetPredicate> sets_;
  std::set<std::string> resolving_;
};

HarnessMode harness_mode(const Json& j, const std::string& path, HarnessMode fallback) {
  const Json* mode = optional_field(j, "mode");
  if (!mode) return fallback;
  const std::string s = text(*mode, join(path, "mode"));
  if (s == "demonstrate") return HarnessMode::Demonstrate;
  if (s == "skip_on_premise_failure") return HarnessMode::SkipOnPremiseFailure;
  fail(join(path, "mode"), "expected demonstrate or skip_on_premise_failure");
}

std::vector<MetricBound> metric_bounds(const Json* j, const std::string& path) {
  std::vector<MetricBound> out;
  if (!j) return out;
  if (!j->is_object()) fail(path, "expected an object of metric bounds");
  for (const auto& [name, bound] : j->items()) {
    const std::string p = join(path, name);
    if (!bound.is_object() || bound.empty()) fail(p, "expected {min, max, gt, lt} bounds");
    MetricBound b{name, {}, {}, {}, {}};
    for (const auto& [key, value] : bound.items()) {
      const double v = number(value, join(p, key));
      if (key == "min") {
        b.min = v;
      } else if (key == "max") {
        b.max = v;
      } else if (key == "gt") {
        b.gt = v;
      } else if (key == "lt") {
        b.lt = v;
      } else {
        fail(join(p, key), "unknown bound (expected min, max, gt or lt)");
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

// Runs a check body, mapping structural premise failures and numerical
// failures to an inconclusive report instead of aborting the scenario.
CheckReport guarded_run(const std::string& op, const std::string& path, const std::function<CheckReport()>& body) {
  auto failed = [&](const std::string& note, Premise premise) {
    CheckReport r;
    r.check = op;
    r.verdict = Verdict::Inconclusive;
    r.premise = premise;
    r.theorem_harness = kHarnessOps.count(op) > 0;
    r.notes.push_back(note);
    return r;
  };
  try {
    return body();
  } catch (const PremiseFailure& e) {
    return failed(std::string("premise failed: ") + e.what(), Premise::Failed);
  } catch (const DescriptorError& e) {
    throw ConfigError(path, e.what());
  } catch (const ChartMismatch& e) {
    throw ConfigError(path, e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    return failed(std::string("error: ") + e.what(), Premise::NotApplicable);
  }
}

void add_solve_metrics(CheckReport& r, const SolveResult& s) {
  r.set_metric("value", s.value);
  r.set_metric("iterations", s.iterations);
  r.set_metric("converged", s.converged ? 1.0 : 0.0);
  r.set_metric("final_step_norm", s.final_step_norm);
  r.vectors.emplace_back("minimizer", s.minimizer.coords);
  r.notes.push_back("status: " + to_string(s.status));
}

Scenario::Check build_check(Resolver& res, const Json& doc, const Json& j, std::size_t index,
                            const std::optional<std::uint64_t>& seed) {
  const std::string path = join("checks", index);
  if (!j.is_object()) fail(path, "expected an object");
  Scenario::Check c;
  c.op = text(require(j, "op", path), join(path, "op"));
  c.id = j.contains("id") ? text(j["id"], join(path, "id")) : c.op + "#" + std::to_string(index);
  c.expect = text(require(j, "expect", path), join(path, "expect"));
  if (!kExpectations.count(c.expect)) {
    fail(join(path, "expect"), "expected one of holds, violated, inconclusive, premise_failed");
  }
  c.expect_metrics = metric_bounds(optional_field(j, "expect_metrics"), join(path, "expect_metrics"));

  const Manifold m = res.manifold();
  const MapTriple maps = res.maps(optional_field(j, "maps"), join(path, "maps"),
                                  res.maps(optional_field(doc, "maps"), "maps", MapTriple{}));
  auto scheme = [&] { return res.scheme(require(j, "scheme", path), join(path, "scheme"), seed); };
  auto field = [&](const char* key = "field") { return res.field(require(j, key, path), join(path, key)); };
  auto opt_set = [&](const char* key) -> std::optional<SetPredicate> {
    if (const Json* s = optional_field(j, key)) return res.set(*s, join(path, key));
    return std::nullopt;
  };
  const std::string op = c.op;
  std::function<CheckReport()> body;

  if (op == "check_invex_set_flat" || op == "check_geodesic_invex_set") {
    if (op == "check_invex_set_flat" && m.kind() != ManifoldKind::Euclidean) {
      fail(join(path, "op"), "check_invex_set_flat needs a euclidean manifold");
    }
    const SetPredicate a = res.set(require(j, "set", path), join(path, "set"));
    const SampleScheme s = scheme();
    const bool flat = op == "check_invex_set_flat";
    body = [=] { return flat ? check_invex_set_flat(m, a, maps, s) : check_geodesic_invex_set(m, a, maps, s); };
  } else if (op == "check_preinvex") {
    const ScalarField h = field();
    const SampleScheme s = scheme();
    const bool strict = boolean(j, "strict", path, false);
    body = [=] { return check_preinvex(m, h, maps, s, strict); };
  } else if (op == "check_invex_function") {
    const ScalarField h = field();
    const SampleScheme s = scheme();
    body = [=] { return check_invex_function(m, h, maps, s); };
  } else if (op == "check_condition_A") {
    const SampleScheme s = scheme();
    body = [=] { return check_condition_a(m, maps, s); };
  } else if (op == "check_sum_preinvex") {
    const auto terms = res.terms(require(j, "terms", path), join(path, "terms"));
    const SampleScheme s = scheme();
    body = [=] { return check_sum_preinvex(m, terms, maps, s); };
  } else if (op == "check_level_set_invex") {
    const ScalarField h = field();
    const double level = number(j, "level", path, std::nullopt);
    const SampleScheme s = scheme();
    const HarnessMode mode = harness_mode(j, path, HarnessMode::Demonstrate);
    body = [=] { return check_level_set_invex(m, h, level, maps, s, mode); };
  } else if (op == "theorem_preinvex_implies_invex" || op == "theorem_invex_plus_A_implies_preinvex") {
    const ScalarField h = field();
    const SampleScheme s = scheme();
    const HarnessMode mode = harness_mode(j, path, HarnessMode::SkipOnPremiseFailure);
    const bool first = op == "theorem_preinvex_implies_invex";
    body = [=] {
      return first ? theorem_preinvex_implies_invex(m, h, maps, s, mode)
                   : theorem_invex_plus_a_implies_preinvex(m, h, maps, s, mode);
    };
  } else if (op == "verify_proximal_subgradient" || op == "verify_theorem_i5") {
    const ScalarField h = field();
    const ProximalCertificate cert = res.certificate(require(j, "certificate", path), join(path, "certificate"), h);
    const SampleScheme s = scheme();
    const bool i5 = op == "verify_theorem_i5";
    body = [=] { return i5 ? verify_theorem_i5(m, h, maps, cert, s) : verify_proximal_subgradient(m, h, cert, s); };
  } else if (op == "search_proximal_subgradient") {
    const ScalarField h = field();
    const Point base = res.point(require(j, "base", path), join(path, "base"));
    std::vector<double> grid = default_lambda_grid();
    if (const Json* g = optional_field(j, "lambda_grid")) {
      const Eigen::VectorXd v = vector(*g, join(path, "lambda_grid"));
      if (v.size() == 0) fail(join(path, "lambda_grid"), "needs at least one value");
      grid.assign(v.data(), v.data() + v.size());
    }
    const double mu = number(j, "mu", path, std::nullopt);
    if (!(mu > 0.0)) fail(join(path, "mu"), "needs mu > 0");
    const SampleScheme s = scheme();
    body = [=] {
      const std::vector<ProximalCertificate> certs = search_proximal_subgradient(m, h, base, grid, mu, s);
      CheckReport r;
      r.check = "search_proximal_subgradient";
      r.scheme = echo(s);
      r.n_evaluated = certs.size();
      r.verdict = certs.empty() ? Verdict::Violated : Verdict::HoldsOnSamples;
      r.set_metric("n_certificates", static_cast<double>(certs.size()));
      if (!certs.empty()) {
        double min_lambda = certs.front().lambda;
        for (std::size_t i = 0; i < certs.size(); ++i) {
          min_lambda = std::min(min_lambda, certs[i].lambda);
          r.vectors.emplace_back("sigma[" + std::to_string(i) + "]", certs[i].sigma.comps);
          r.set_metric("lambda[" + std::to_string(i) + "]", certs[i].lambda);
        }
        r.set_metric("min_lambda", min_lambda);
      } else {
        r.notes.push_back("no candidate direction is a proximal subgradient on the lambda grid");
      }
      return r;
    };
  } else if (op == "geodesic_descent") {
    const ScalarField h = field();
    const Point start = res.point(require(j, "start", path), join(path, "start"));
    DescentConfig cfg = res.descent(optional_field(j, "descent"), join(path, "descent"));
    cfg.keep_trajectory = true;
    const std::optional<SetPredicate> feasible = opt_set("feasible");
    std::optional<Point> expected;
    if (const Json* e = optional_field(j, "expect_minimizer")) expected = res.point(*e, join(path, "expect_minimizer"));
    const double tol = number(j, "minimizer_tol", path, 1e-6);
    body = [=] {
      const SolveResult s = geodesic_descent(m, h, start, cfg, feasible);
      CheckReport r;
      r.check = "geodesic_descent";
      r.n_evaluated = static_cast<std::uint64_t>(s.iterations);
      add_solve_metrics(r, s);
      double max_increase = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < s.values.size(); ++k) max_increase = std::max(max_increase, s.values[k] - s.values[k - 1]);
      r.set_metric("max_increase", max_increase);
      r.verdict = s.converged ? Verdict::HoldsOnSamples : Verdict::Inconclusive;
      if (expected) {
        const double d = m.distance(s.minimizer, *expected);
        r.set_metric("distance_to_expected", d);
        r.max_gap = d - tol;
        if (s.converged && d > tol) {
          r.verdict = Verdict::Violated;
          r.n_violations = 1;
          r.witnesses.push_back({"minimizer far from expected", s.minimizer, *expected, d, d, tol, d - tol});
        }
      }
      return r;
    };
  } else if (op == "multistart_local_global" || op == "solution_set_invex") {
    const ScalarField h = field();
    const std::optional<SetPredicate> feasible = opt_set("feasible");
    const int n_starts = integer(j, "n_starts", path, 32);
    const DescentConfig cfg = res.descent(optional_field(j, "descent"), join(path, "descent"));
    const SampleScheme s = scheme();
    if (op == "multistart_local_global") {
      const HarnessMode mode = harness_mode(j, path, HarnessMode::SkipOnPremiseFailure);
      body = [=] { return multistart_local_global(m, h, maps, feasible, n_starts, cfg, s, mode).report; };
    } else {
      const bool strict = boolean(j, "strict", path, false);
      std::optional<std::vector<Point>> pool;
      if (const Json* p = optional_field(j, "pool")) pool = res.points(*p, join(path, "pool"));
      body = [=] {
        std::vector<SolveResult> runs;
        if (pool) {
          // A fixed pool stands in for solver output, each point counted as
          // a converged run at its own objective value.
          for (const Point& x : *pool) {
            SolveResult r;
            r.minimizer = x;
            r.value = eval_scalar(m, h, x);
            r.converged = true;
            r.status = DescentStatus::Converged;
            runs.push_back(std::move(r));
          }
        } else {
          runs = multistart_local_global(m, h, maps, feasible, n_starts, cfg, s, HarnessMode::Demonstrate).runs;
        }
        return solution_set_invex(m, h, maps, feasible, runs, s, strict);
      };
    }
  } else {
    fail(join(path, "op"), "unknown operation '" + op + "'");
  }
  c.run = [op, path, body] { return guarded_run(op, path, body); };
  return c;
}

std::uint64_t count_evaluations(const CheckReport& r) {
  std::uint64_t n = r.n_evaluated;
  for (const CheckReport& sub : r.subreports) n += count_evaluations(sub);
  return n;
}

bool any_falsified(const CheckReport& r) {
  if (r.falsified) return true;
  for (const CheckReport& sub : r.subreports) {
    if (any_falsified(sub)) return true;
  }
  return false;
}

}  // namespace

bool grade(const CheckReport& report, const std::string& expect, const std::vector<MetricBound>& bounds,
           std::vector<std::string>& failures) {
  const std::size_t before = failures.size();
  if (expect == "premise_failed") {
    if (report.premise != Premise::Failed) failures.push_back("expected a failed premise, got " + to_string(report.premise));
  } else {
    const Verdict want = expect == "holds" ? Verdict::HoldsOnSamples
                         : expect == "violated" ? Verdict::Violated
                                                : Verdict::Inconclusive;
    if (report.verdict != want) {
      failures.push_back("expected " + to_string(want) + ", got " + to_string(report.verdict));
    }
  }
  for (const MetricBound& b : bounds) {
    const std::optional<double> v = report.metric(b.name);
    if (!v) {
      failures.push_back("metric '" + b.name + "' missing");
      continue;
    }
    std::ostringstream os;
    os.precision(17);
    if (b.min && !(*v >= *b.min)) os << b.name << " = " << *v << " below min " << *b.min;
    if (b.max && !(*v <= *b.max)) os << b.name << " = " << *v << " above max " << *b.max;
    if (b.gt && !(*v > *b.gt)) os << b.name << " = " << *v << " not > " << *b.gt;
    if (b.lt && !(*v < *b.lt)) os << b.name << " = " << *v << " not < " << *b.lt;
    if (!os.str().empty()) failures.push_back(os.str());
  }
  return failures.size() == before;
}

RunReport Scenario::run(bool timing) const {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport out;
  out.scenario = name_;
  out.toolkit_version = kToolkitVersion;
  out.manifold_kind = manifold_->kind();
  out.manifold_dim = manifold_->dim();
  bool all_met = true;
  bool falsified = false;
  for (const Check& c : checks_) {
    CheckOutcome o;
    o.id = c.id;
    o.op = c.op;
    o.expect = c.expect;
    o.report = c.run();
    o.met = grade(o.report, c.expect, c.expect_metrics, o.failures);
    all_met = all_met && o.met;
    falsified = falsified || any_falsified(o.report);
    out.evaluations += count_evaluations(o.report);
    out.checks.push_back(std::move(o));
  }
  out.status = falsified ? RunStatus::Falsification : all_met ? RunStatus::Pass : RunStatus::Fail;
  if (timing) {
    out.wall_clock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

void apply_override(Json& doc, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set", "expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json* node = &doc;
  std::istringstream parts(key);
  std::string part;
  std::vector<std::string> segments;
  while (std::getline(parts, part, '.')) segments.push_back(part);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string& seg = segments[i];
    if (seg.empty()) throw ConfigError("--set", "empty path segment in '" + key + "'");
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(seg);
      } catch (const std::exception&) {
        throw ConfigError("--set " + key, "'" + seg + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError("--set " + key, "index " + seg + " out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = Json::object();
      if (!node->is_object()) throw ConfigError("--set " + key, "'" + seg + "' descends into a scalar");
      node = &(*node)[seg];
    }
  }
  *node = std::move(value);
}

Scenario load_scenario(const Json& input, const LoadOptions& options) {
  Json doc = input;
  if (!doc.is_object()) throw ConfigError("", "scenario must be a JSON object");
  for (const std::string& o : options.overrides) apply_override(doc, o);
  if (options.jobs < 1) throw ConfigError("--jobs", "needs at least one job");

  Scenario s;
  s.name_ = text(require(doc, "name", ""), "name");
  const Tolerances tol = read_tolerances(optional_field(doc, "tolerances"), "tolerances");
  s.manifold_ = read_manifold(doc, tol);
  Resolver res(doc, *s.manifold_, options.jobs);
  // Resolve every named entry even if no check uses it.
  for (const char* section : {"points", "fields", "sets"}) {
    const Json* entries = optional_field(doc, section);
    if (!entries) continue;
    if (!entries->is_object()) fail(section, "expected an object of named entries");
    for (const auto& [name, value] : entries->items()) {
      const Json ref = name;
      const std::string path = std::string(section) + "." + name;
      if (std::string(section) == "points") res.point(ref, path);
      if (std::string(section) == "fields") res.field(ref, path);
      if (std::string(section) == "sets") res.set(ref, path);
    }
  }
  res.maps(optional_field(doc, "maps"), "maps", MapTriple{});
  if (const Json* schemes = optional_field(doc, "schemes")) {
    if (!schemes->is_object()) fail("schemes", "expected an object of named schemes");
    for (const auto& [name, value] : schemes->items()) res.scheme(value, "schemes." + name, options.seed);
  }
  if (const Json* descents = optional_field(doc, "descent")) {
    if (!descents->is_object()) fail("descent", "expected an object of named descent configs");
    for (const auto& [name, value] : descents->items()) res.descent(&value, "descent." + name);
  }

  const Json& checks = require(doc, "checks", "");
  if (!checks.is_array()) fail("checks", "expected an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Scenario::Check c = build_check(res, doc, checks[i], i, options.seed);
    if (!ids.insert(c.id).second) fail(join(join("checks", i), "id"), "duplicate check id '" + c.id + "'");
    s.checks_.push_back(std::move(c));
  }
  return s;
}

Json read_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();
  try {
    return Json::parse(content);
  } catch (const Json::parse_error& e) {
    // Report the position as line and column.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < content.size(); ++i) {
      if (content[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
  }
}

std::string catalog_listing() {
  return R"(manifolds
  euclidean      {dim}
  sphere_cap     {center, radius}           radius in (0, pi/2)
  hyperboloid    {dim}

points
  [x0, ..., xk]                             ambient coordinates
  {"lift": [...]}                           project / complete onto the manifold
  {"from_origin": [...]}                    exp of intrinsic coordinates at the origin
  "origin" | "<name>"

point maps (E, F)
  identity
  constant              {point}
  geodesic_contraction  {center, factor}    factor in [0, 1]
  coordinate_affine     {matrix, offset}    euclidean only

bi-maps (G)
  log_based
  scaled_log            {factor}
  euclidean_difference                      euclidean only
  custom_table          {entries: [{a, b, value}], zero_on: [points], match_tol}

scalar fields
  squared_distance      {anchor}
  distance              {anchor}
  linear_height         {weights}
  negated               {of}
  weighted_sum          {terms: [{weight, field}]}
  product               {lhs, rhs}
  indicator_extended    {of, domain}
  spike                 {at, height}
  zero
  options: differential = analytic | finite_difference | none, lsc = true | false

set predicates
  metric_ball           {center, radius}
  sublevel              {field, level}
  finite_union          {members}
  intersection          {members}
  difference            {keep, remove}

samplers
  uniform_ball          {center, radius}
  explicit_list         {points}

step rules
  fixed                 {eta}
  backtracking          {initial, shrink, armijo}

operations
  check_invex_set_flat                     {set, scheme}
  check_geodesic_invex_set                 {set, scheme}
  check_preinvex                           {field, scheme, strict}
  check_invex_function                     {field, scheme}
  check_condition_A                        {scheme}
  check_sum_preinvex                       {terms, scheme}
  check_level_set_invex                    {field, level, scheme, mode}
  theorem_preinvex_implies_invex           {field, scheme, mode}
  theorem_invex_plus_A_implies_preinvex    {field, scheme, mode}
  verify_proximal_subgradient              {field, certificate, scheme}
  search_proximal_subgradient              {field, base, mu, lambda_grid, scheme}
  verify_theorem_i5                        {field, certificate, scheme}
  geodesic_descent                         {field, start, descent, feasible, expect_minimizer}
  multistart_local_global                  {field, n_starts, descent, scheme, feasible, mode}
  solution_set_invex                       {field, n_starts, descent, scheme, feasible, strict, pool}

expectations
  holds | violated | inconclusive | premise_failed
  expect_metrics: {name: {min, max, gt, lt}}
)";
}

}  // namespace geoinvex
