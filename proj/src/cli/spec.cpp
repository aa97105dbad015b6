#include "frontlim/spec.hpp"

#include "frontlim/field_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace frontlim {

namespace pt = boost::property_tree;

namespace {

using Section = std::map<std::string, std::string>;
using Document = std::map<std::string, Section>;

const std::map<std::string, std::set<std::string>> kKeys = {
    {"model", {"file", "n1", "n2", "rho", "k", "epsilon", "scaling", "interface", "normal", "offset", "centre",
               "radius"}},
    {"grid", {"dim", "lo", "hi", "h", "n", "cells_per_eps", "boundary"}},
    {"solver", {"dt", "record_every", "mode", "curvature", "eta", "reinit_every", "stencil", "epsilon", "speed"}},
    {"experiment", {"name", "initial", "initial_file", "initial_mode", "d0", "t_end", "times", "epsilons", "beta",
                    "seed", "resolutions", "band_tol_cells", "ratio_bound", "reference", "reference_h", "jobs"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

Document read_ini(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("cannot read " + path.string() + ": " + e.message() + " (line " + std::to_string(e.line()) +
                      ")");
  }
  Document doc;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(path.string() + ": key '" + section + "' outside any section");
    for (const auto& [key, value] : body) doc[section][key] = trim(value.data());
  }
  return doc;
}

double to_double(const std::string& where, const std::string& text) {
  double v = 0.0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(where + ": '" + text + "' is not a finite number");
  }
  return v;
}

long to_long(const std::string& where, const std::string& text) {
  long v = 0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError(where + ": '" + text + "' is not an integer");
  return v;
}

bool to_bool(const std::string& where, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(where + ": '" + text + "' is not a boolean");
}

std::vector<double> to_list(const std::string& where, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(where, item));
  return out;
}

Point to_point(const std::string& where, const std::string& text) {
  const std::vector<double> v = to_list(where, text);
  if (v.size() == 1) return Point(v[0], 0.0);
  if (v.size() == 2) return Point(v[0], v[1]);
  throw ConfigError(where + ": expected one or two coordinates");
}

Expression to_expr(const std::string& where, const std::string& text) {
  try {
    return Expression::parse(text);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

void apply_override(Document& doc, const std::string& item) {
  const auto eq = item.find('=');
  const auto dot = item.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override '" + item + "' must look like section.key=value");
  }
  doc[trim(item.substr(0, dot))][trim(item.substr(dot + 1, eq - dot - 1))] = trim(item.substr(eq + 1));
}

void check_keys(const Document& doc, const std::filesystem::path& path) {
  for (const auto& [section, body] : doc) {
    const auto known = kKeys.find(section);
    if (known == kKeys.end()) throw ConfigError(path.string() + ": unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) throw ConfigError(path.string() + ": unknown key " + section + "." + key);
    }
  }
}

}  // namespace

Grid GridSpec::build() const {
  if (dim == 1) return Grid::line(lo, hi, h, boundary);
  if (dim != 2) throw ConfigError("grid.dim must be 1 or 2");
  if (n > 0) return Grid::square(lo, hi, n, boundary);
  if (!(h > 0.0)) throw ConfigError("grid.h must be positive");
  return Grid::square(lo, hi, static_cast<Index>(std::ceil((hi - lo) / h - 1e-9)) + 1, boundary);
}

HJConfig ExperimentSpec::hj_config(const Grid& g) const {
  HJConfig c{g};
  c.mode = mode;
  c.epsilon = bracket_epsilon();
  c.dt = dt;
  c.t_end = t_end;
  c.record_times = times;
  c.curvature = curvature;
  c.eta = eta;
  c.reinit_every = reinit_every;
  return c;
}

InitialData ExperimentSpec::initial_data() const {
  if (initial_file) {
    auto f = std::make_shared<ScalarField>(load_field(*initial_file, grid.boundary));
    return [f](const Point& x, double) { return (*f)[f->grid().nearest(x)]; };
  }
  const Expression e = Expression::parse(initial);
  if (initial_mode == InitialMode::Wave) return wave_initial_data(e, model);
  return [e](const Point& x, double) { return e(x); };
}

ScalarField ExperimentSpec::initial_field(const Grid& g) const {
  if (initial_file) {
    const ScalarField f = load_field(*initial_file, grid.boundary);
    if (f.grid().same_layout(g)) return f;
    return ScalarField::sample(g, [&](const Point& x) { return f[f.grid().nearest(x)]; });
  }
  const Expression e = Expression::parse(initial);
  return ScalarField::sample(g, [&](const Point& x) { return e(x); });
}

ExperimentSpec load_spec(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  if (!std::filesystem::exists(path)) throw ConfigError("spec file " + path.string() + " does not exist");
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() ? q : base / q;
  };

  Document doc = read_ini(path);
  for (const std::string& o : overrides) apply_override(doc, o);
  if (doc.count("model") && doc["model"].count("file")) {
    const std::filesystem::path mpath = resolve(doc["model"]["file"]);
    if (!std::filesystem::exists(mpath)) throw ConfigError("model file " + mpath.string() + " does not exist");
    Document mdoc = read_ini(mpath);
    for (const auto& [section, body] : mdoc) {
      if (section != "model") throw ConfigError(mpath.string() + ": model files may only hold a [model] section");
      for (const auto& [key, value] : body) doc["model"].try_emplace(key, value);
    }
    // inline keys and overrides win over the model file
    for (const std::string& o : overrides) apply_override(doc, o);
  }
  check_keys(doc, path);

  ExperimentSpec s;
  s.source = path;
  auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
    const auto it = doc.find(sec);
    if (it == doc.end()) return nullptr;
    const auto kt = it->second.find(key);
    return kt == it->second.end() ? nullptr : &kt->second;
  };
  auto num = [&](const std::string& sec, const std::string& key, double& out) {
    if (const auto* v = get(sec, key)) out = to_double(sec + "." + key, *v);
  };
  auto integer = [&](const std::string& sec, const std::string& key, auto& out) {
    if (const auto* v = get(sec, key)) out = static_cast<std::remove_reference_t<decltype(out)>>(to_long(sec + "." + key, *v));
  };

  // [model]
  VelocityModel& vm = s.model.velocity;
  if (const auto* v = get("model", "n1")) vm.n1 = to_expr("model.n1", *v);
  if (const auto* v = get("model", "n2")) vm.n2 = to_expr("model.n2", *v);
  num("model", "rho", vm.rho);
  num("model", "k", vm.k);
  num("model", "epsilon", s.model.epsilon);
  if (const auto* v = get("model", "scaling")) s.model.scaling = scaling_from_string(*v);
  const std::string kind = get("model", "interface") ? *get("model", "interface") : "hyperplane";
  if (kind == "hyperplane") {
    Point normal(1.0, 0.0);
    double offset = 0.0;
    if (const auto* v = get("model", "normal")) normal = to_point("model.normal", *v);
    num("model", "offset", offset);
    if (!(normal.norm() > 0.0)) throw ConfigError("model.normal must be nonzero");
    vm.interface = Interface::hyperplane(normal, offset);
  } else if (kind == "circle") {
    Point centre = Point::Zero();
    double radius = 1.0;
    if (const auto* v = get("model", "centre")) centre = to_point("model.centre", *v);
    num("model", "radius", radius);
    if (!(radius > 0.0)) throw ConfigError("model.radius must be positive");
    vm.interface = Interface::circle(centre, radius);
  } else {
    throw ConfigError("model.interface must be hyperplane or circle, not '" + kind + "'");
  }

  // [grid]
  integer("grid", "dim", s.grid.dim);
  num("grid", "lo", s.grid.lo);
  num("grid", "hi", s.grid.hi);
  num("grid", "h", s.grid.h);
  integer("grid", "n", s.grid.n);
  num("grid", "cells_per_eps", s.grid.cells_per_eps);
  if (const auto* v = get("grid", "boundary")) s.grid.boundary = boundary_from_string(*v);
  if (s.grid.dim != 1 && s.grid.dim != 2) throw ConfigError("grid.dim must be 1 or 2");

  // [solver]
  num("solver", "dt", s.dt);
  integer("solver", "record_every", s.record_every);
  if (const auto* v = get("solver", "mode")) s.mode = velocity_mode_from_string(*v);
  if (const auto* v = get("solver", "curvature")) s.curvature = to_bool("solver.curvature", *v);
  num("solver", "eta", s.eta);
  integer("solver", "reinit_every", s.reinit_every);
  if (const auto* v = get("solver", "stencil")) s.stencil = stencil_from_string(*v);
  if (const auto* v = get("solver", "epsilon")) s.solver_epsilon = to_double("solver.epsilon", *v);
  if (const auto* v = get("solver", "speed")) s.speed = to_expr("solver.speed", *v);

  // [experiment]
  if (const auto* v = get("experiment", "name")) s.name = *v;
  if (const auto* v = get("experiment", "initial")) s.initial = *v;
  to_expr("experiment.initial", s.initial);
  if (const auto* v = get("experiment", "initial_file")) {
    s.initial_file = resolve(*v);
    if (!std::filesystem::exists(*s.initial_file)) {
      throw ConfigError("initial_file " + s.initial_file->string() + " does not exist");
    }
  }
  if (const auto* v = get("experiment", "initial_mode")) {
    if (*v == "value") s.initial_mode = InitialMode::Value;
    else if (*v == "wave") s.initial_mode = InitialMode::Wave;
    else throw ConfigError("experiment.initial_mode must be value or wave");
  }
  if (const auto* v = get("experiment", "d0")) s.d0 = to_expr("experiment.d0", *v);
  num("experiment", "t_end", s.t_end);
  if (const auto* v = get("experiment", "times")) s.times = to_list("experiment.times", *v);
  if (const auto* v = get("experiment", "epsilons")) s.epsilons = to_list("experiment.epsilons", *v);
  num("experiment", "beta", s.beta);
  if (const auto* v = get("experiment", "seed")) s.seed = to_point("experiment.seed", *v);
  if (const auto* v = get("experiment", "resolutions")) {
    for (double r : to_list("experiment.resolutions", *v)) {
      if (r != std::floor(r) || r < 3) throw ConfigError("experiment.resolutions must be integers >= 3");
      s.resolutions.push_back(static_cast<Index>(r));
    }
  }
  num("experiment", "band_tol_cells", s.band_tol_cells);
  num("experiment", "ratio_bound", s.ratio_bound);
  num("experiment", "reference_h", s.reference_h);
  if (const auto* v = get("experiment", "reference")) {
    if (*v != "arrival" && *v != "hj") throw ConfigError("experiment.reference must be arrival or hj");
    s.reference = *v;
  }
  integer("experiment", "jobs", s.jobs);

  if (!(s.t_end > 0.0)) throw ConfigError("experiment.t_end must be positive");
  for (double t : s.times) {
    if (!(t > 0.0 && t <= s.t_end)) throw ConfigError("experiment.times must lie in (0, t_end]");
  }
  if (s.record_every < 1) throw ConfigError("solver.record_every must be >= 1");
  if (s.jobs < 1) throw ConfigError("experiment.jobs must be >= 1");
  return s;
}

}  // namespace frontlim
