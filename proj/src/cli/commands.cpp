#include "frontlim/cli.hpp"

#include "frontlim/field_io.hpp"
#include "frontlim/spec.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace frontlim {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string series_name(const std::string& prefix, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu.field", i);
  return prefix + buf;
}

std::string csv(double v) { return std::isfinite(v) ? format_double(v) : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); }

std::string csv(const std::optional<double>& v) { return v ? csv(*v) : ""; }

void write_json(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

/// u_000.field, ... plus an index file u_index.csv with t,path,front_point_count.
void write_series(const fs::path& dir, const std::string& prefix, const std::vector<Snapshot>& series,
                  const ScalarField* iso = nullptr) {
  std::ostringstream index;
  index << "t,path,front_point_count\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::string name = series_name(prefix, i);
    save_field(dir / name, series[i].field);
    const FrontTriple f = iso ? front_position(series[i].field, *iso) : zero_level_set(series[i].field);
    index << format_double(series[i].t) << "," << name << "," << f.gamma.size() << "\n";
  }
  write_file_atomic(dir / (prefix + "_index.csv"), index.str());
}

void append_front(std::ostringstream& os, double t, const FrontTriple& f) {
  for (const Point& p : f.gamma) os << format_double(t) << "," << format_double(p.x()) << "," << format_double(p.y()) << "\n";
}

void write_fronts(const fs::path& path, const std::vector<Snapshot>& series) {
  std::ostringstream os;
  os << "t,x,y\n";
  for (const Snapshot& s : series) append_front(os, s.t, zero_level_set(s.field));
  write_file_atomic(path, os.str());
}

// ---------------------------------------------------------------------------
// validation before compute

const std::set<std::string> kGeometric = {"0 < rho < 1/2", "2 rho <= n1", "n1 < n2"};

std::string describe_failures(const AssumptionReport& r, const std::set<std::string>* only) {
  std::ostringstream os;
  for (const AssumptionCheck& c : r.checks) {
    if (c.passed || c.informational) continue;
    if (only && !only->count(c.name)) continue;
    os << (os.tellp() > 0 ? "; " : "") << c.name << " (worst " << format_double(c.worst_value) << " at ("
       << format_double(c.worst_point.x()) << ", " << format_double(c.worst_point.y()) << "))";
    if (!c.detail.empty()) os << " " << c.detail;
  }
  return os.str();
}

void require_valid(const BistableModel& model, const Grid& grid, const std::set<std::string>* only) {
  const AssumptionReport r = validate_assumptions(model, grid);
  const std::string failures = describe_failures(r, only);
  if (!failures.empty()) throw ConfigError("validation failed: " + failures);
}

std::set<std::string> bracket_checks(const BistableModel& m) {
  std::set<std::string> s = kGeometric;
  s.insert("epsilon > 0");
  s.insert(m.scaling == Scaling::Two ? "0 <= k < 1" : "0 <= k <= 1/2");
  return s;
}

// ---------------------------------------------------------------------------

struct Context {
  ExperimentSpec spec;
  fs::path out;
  std::ostream& log;
};

ScalarField speed_for(const Context& c, const Grid& grid) {
  if (c.spec.speed) {
    const Expression e = *c.spec.speed;
    return ScalarField::sample(grid, [&](const Point& x) { return e(x); });
  }
  require_valid(c.spec.model, grid, &kGeometric);
  return velocity_field(grid, c.spec.mode, c.spec.model.velocity, c.spec.bracket_epsilon());
}

int cmd_validate(Context& c) {
  const Grid grid = c.spec.grid.build();
  std::vector<double> eps = c.spec.epsilons;
  if (eps.empty()) eps.push_back(c.spec.model.epsilon);
  json j;
  j["name"] = c.spec.name;
  bool ok = true;
  for (double e : eps) {
    BistableModel m = c.spec.model;
    m.epsilon = e;
    const AssumptionReport r = validate_assumptions(m, grid);
    json checks = json::array();
    for (const AssumptionCheck& k : r.checks) {
      c.log << (k.informational ? "INFO" : (k.passed ? "PASS" : "FAIL")) << "  eps=" << format_double(e) << "  "
            << k.name << "  worst=" << format_double(k.worst_value) << (k.detail.empty() ? "" : "  " + k.detail)
            << "\n";
      checks.push_back({{"name", k.name},
                        {"passed", k.passed},
                        {"informational", k.informational},
                        {"worst_value", number(k.worst_value)},
                        {"worst_point", {k.worst_point.x(), k.worst_point.y()}},
                        {"detail", k.detail}});
    }
    ok = ok && r.all_passed();
    j["reports"].push_back({{"epsilon", e}, {"all_passed", r.all_passed()}, {"checks", checks}});
  }
  j["all_passed"] = ok;
  write_json(c.out / "validate.json", j);
  c.log << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? 0 : 2;
}

int cmd_rd_run(Context& c) {
  const Grid grid = c.spec.grid.build();
  require_valid(c.spec.model, grid, nullptr);
  const InitialData g = c.spec.initial_data();
  const double eps = c.spec.model.epsilon;
  const ScalarField g0 = ScalarField::sample(grid, [&](const Point& x) { return g(x, eps); });
  RDConfig cfg{c.spec.model, grid, c.spec.dt, c.spec.t_end, c.spec.record_every, c.spec.times};
  const RDTrajectory traj = rd_run(cfg, g0);
  write_series(c.out, "u", traj.snapshots, &traj.iso_level);
  std::ostringstream fronts;
  fronts << "t,x,y\n";
  for (const FrontRecord& r : traj.front_history) append_front(fronts, r.t, r.front);
  write_file_atomic(c.out / "front.csv", fronts.str());

  json j;
  j["name"] = c.spec.name;
  j["epsilon"] = eps;
  j["h"] = grid.h();
  j["dt"] = RDStepper(cfg, g0).dt();
  j["snapshots"] = traj.snapshots.size();
  if (grid.dim() == 1) {
    try {
      const double v = fitted_front_speed(traj, 0.2 * c.spec.t_end, c.spec.t_end);
      j["fitted_front_speed"] = v;
      c.log << "fitted front speed " << format_double(v) << "\n";
    } catch (const ConfigError&) {
      j["fitted_front_speed"] = nullptr;
    }
  }
  write_json(c.out / "summary.json", j);
  c.log << "rd-run: " << traj.snapshots.size() << " snapshots written to " << c.out.string() << "\n";
  return 0;
}

int run_hj(Context& c, bool curvature) {
  const Grid grid = c.spec.grid.build();
  const ScalarField speed = speed_for(c, grid);
  HJConfig cfg = c.spec.hj_config(grid);
  cfg.curvature = cfg.curvature || curvature;
  const HJSolution sol = hj_run(cfg, c.spec.initial_field(grid), speed);
  write_series(c.out, "u", sol.snapshots);
  write_fronts(c.out / "front.csv", sol.snapshots);
  c.log << (curvature ? "mcf-run: " : "hj-run: ") << sol.snapshots.size() << " snapshots written to "
        << c.out.string() << "\n";
  return 0;
}

int cmd_arrival(Context& c) {
  const Grid grid = c.spec.grid.build();
  require_valid(c.spec.model, grid, &kGeometric);
  const ArrivalField a = arrival_time(grid, c.spec.model.velocity, c.spec.seed, {c.spec.stencil});
  save_field(c.out / "arrival.field", a.times);
  std::ostringstream os;
  write_field_csv(os, a.times);
  write_file_atomic(c.out / "arrival.csv", os.str());
  c.log << "arrival: seed " << a.seed << ", max time " << format_double(a.times.values().maxCoeff()) << "\n";
  return 0;
}

std::vector<double> sample_times(const ExperimentSpec& s) {
  std::vector<double> t = s.times;
  t.push_back(s.t_end);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

int cmd_represent(Context& c) {
  const Grid grid = c.spec.grid.build();
  require_valid(c.spec.model, grid, &kGeometric);
  const ScalarField u0 = c.spec.initial_field(grid);
  const Representation rep(u0, c.spec.model.velocity, {c.spec.stencil});
  std::vector<Snapshot> series{{0.0, rep.at(0.0)}};
  for (double t : sample_times(c.spec)) series.push_back({t, rep.at(t)});
  write_series(c.out, "v", series);
  write_fronts(c.out / "front.csv", series);
  c.log << "represent: " << series.size() << " level-set fields written to " << c.out.string() << "\n";
  return 0;
}

int cmd_bracket(Context& c) {
  const Grid grid = c.spec.grid.build();
  BistableModel m = c.spec.model;
  m.epsilon = c.spec.bracket_epsilon();
  const std::set<std::string> checks = bracket_checks(m);
  require_valid(m, grid, &checks);
  const BracketResult br = bracket_run(c.spec.hj_config(grid), c.spec.initial_field(grid), m.velocity, m.epsilon);
  write_series(c.out, "lower", br.lower.snapshots);
  write_series(c.out, "upper", br.upper.snapshots);
  std::ostringstream os;
  os << "t,gap\n";
  for (const auto& [t, gap] : br.gap) os << format_double(t) << "," << csv(gap) << "\n";
  write_file_atomic(c.out / "gap.csv", os.str());
  const double bound = 2.0 * grid.h() + 3.0 * m.epsilon;
  json j;
  j["name"] = c.spec.name;
  j["epsilon"] = m.epsilon;
  j["h"] = grid.h();
  j["max_gap"] = number(br.max_gap());
  j["bound_2h_plus_3eps"] = bound;
  j["within_bound"] = br.max_gap() <= bound;
  write_json(c.out / "summary.json", j);
  c.log << "bracket: max gap " << format_double(br.max_gap()) << " (2h + 3 eps = " << format_double(bound) << ")\n";
  return 0;
}

EpsLadder ladder_of(const ExperimentSpec& s) {
  EpsLadder ladder;
  ladder.epsilons = s.epsilons;
  ladder.model = s.model;
  ladder.grid = s.grid.policy();
  ladder.validate();
  return ladder;
}

void validate_ladder(const EpsLadder& ladder) {
  for (double e : ladder.epsilons) {
    try {
      require_valid(ladder.model_for(e), ladder.grid_for(e), nullptr);
    } catch (const ConfigError& err) {
      throw ConfigError("eps = " + format_double(e) + ": " + err.what());
    }
  }
}

/// Signed distance of the initial front: the initial expression itself in
/// wave mode, otherwise experiment.d0.
std::function<double(const Point&)> initial_distance(const ExperimentSpec& s) {
  if (s.initial_mode == InitialMode::Wave && !s.initial_file) {
    const Expression e = Expression::parse(s.initial);
    return [e](const Point& x) { return e(x); };
  }
  if (s.d0) {
    const Expression e = *s.d0;
    return [e](const Point& x) { return e(x); };
  }
  return {};
}

int cmd_converge(Context& c) {
  const ExperimentSpec& s = c.spec;
  const EpsLadder ladder = ladder_of(s);
  validate_ladder(ladder);
  if (s.times.empty()) throw ConfigError("converge needs experiment.times");

  const Grid finest = ladder.grid_for(ladder.epsilons.back());
  GridSpec ref_spec = s.grid;
  ref_spec.h = s.reference_h > 0.0 ? s.reference_h : finest.h() / 4.0;
  ref_spec.n = 0;
  const Grid ref_grid = ref_spec.build();
  const auto d0 = initial_distance(s);
  const ScalarField ref0 = d0 ? ScalarField::sample(ref_grid, d0) : s.initial_field(ref_grid);

  ConvergeOptions opt;
  opt.times = s.times;
  opt.d0 = d0;
  opt.beta = s.beta;
  opt.jobs = s.jobs;
  if (s.reference == "arrival") {
    const Representation rep(ref0, s.model.velocity, {s.stencil});
    for (double t : s.times) opt.reference.push_back({t, rep.at(t)});
  } else {
    HJConfig cfg{ref_grid};
    cfg.t_end = *std::max_element(s.times.begin(), s.times.end());
    cfg.record_times = s.times;
    opt.reference = hj_run(cfg, ref0, s.model.velocity).snapshots;
  }
  const ConvergenceReport r = converge_report(ladder, s.initial_data(), opt);

  json j;
  j["name"] = s.name;
  j["scaling"] = to_string(r.scaling);
  j["reference"] = s.reference;
  j["times"] = r.times;
  std::ostringstream hcsv, fcsv, gcsv;
  hcsv << "epsilon,h,t,hausdorff\n";
  fcsv << "epsilon,t,fraction_plus,fraction_minus\n";
  gcsv << "epsilon,h,generation_time,scale,ratio\n";
  for (const EpsEntry& e : r.entries) {
    json je;
    je["epsilon"] = e.epsilon;
    je["h"] = e.h;
    je["margin"] = e.margin;
    json hd = json::array(), fp = json::array(), fm = json::array();
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      hd.push_back(number(e.hausdorff[i]));
      fp.push_back(number(e.fraction_plus[i]));
      fm.push_back(number(e.fraction_minus[i]));
      hcsv << format_double(e.epsilon) << "," << format_double(e.h) << "," << format_double(r.times[i]) << ","
           << csv(e.hausdorff[i]) << "\n";
      fcsv << format_double(e.epsilon) << "," << format_double(r.times[i]) << "," << csv(e.fraction_plus[i]) << ","
           << csv(e.fraction_minus[i]) << "\n";
    }
    je["hausdorff"] = hd;
    je["fraction_plus"] = fp;
    je["fraction_minus"] = fm;
    je["generation_time"] = number(e.generation_time);
    const double scale = generation_scale(e.epsilon, r.scaling);
    gcsv << format_double(e.epsilon) << "," << format_double(e.h) << "," << csv(e.generation_time) << ","
         << format_double(scale) << "," << (e.generation_time ? csv(*e.generation_time / scale) : "") << "\n";
    j["entries"].push_back(je);
  }
  if (r.generation_fit) j["generation_fit"] = {{"slope", r.generation_fit->slope}, {"intercept", r.generation_fit->intercept}};
  else j["generation_fit"] = nullptr;
  j["generation_spread"] = number(r.generation_spread);
  j["half_limits"] = {{"label", r.half_limit_label},
                      {"finest_disagreement", number(r.finest_disagreement)},
                      {"finest_agree", r.finest_agree},
                      {"omega_clearance", number(r.omega_clearance)},
                      {"omega_margin", number(r.omega_margin)},
                      {"omega_clear", r.omega_clear}};
  j["verdicts"] = {{"hausdorff", r.hausdorff_verdict}, {"generation", r.generation_verdict}};
  write_json(c.out / "report.json", j);
  write_file_atomic(c.out / "hausdorff.csv", hcsv.str());
  write_file_atomic(c.out / "fractions.csv", fcsv.str());
  write_file_atomic(c.out / "generation.csv", gcsv.str());
  c.log << "converge: hausdorff " << r.hausdorff_verdict << "; generation " << r.generation_verdict << "\n";
  return 0;
}

int cmd_gen_time(Context& c) {
  const ExperimentSpec& s = c.spec;
  const EpsLadder ladder = ladder_of(s);
  validate_ladder(ladder);
  const auto d0 = initial_distance(s);
  if (!d0) throw ConfigError("gen-time needs experiment.d0 (or initial_mode = wave)");
  const InitialData g = s.initial_data();
  json j;
  j["name"] = s.name;
  j["scaling"] = to_string(s.model.scaling);
  j["beta"] = s.beta;
  std::ostringstream os;
  os << "epsilon,h,generation_time,scale,ratio\n";
  std::vector<double> ratios;
  for (double e : ladder.epsilons) {
    const BistableModel m = ladder.model_for(e);
    const Grid grid = ladder.grid_for(e);
    const ScalarField g0 = ScalarField::sample(grid, [&](const Point& x) { return g(x, e); });
    std::optional<double> t;
    try {
      t = generation_time(m, g0, ScalarField::sample(grid, d0), s.beta, s.t_end);
    } catch (const ConfigError& err) {
      throw ConfigError("eps = " + format_double(e) + ": " + err.what());
    }
    const double scale = generation_scale(e, s.model.scaling);
    if (t) ratios.push_back(*t / scale);
    os << format_double(e) << "," << format_double(grid.h()) << "," << csv(t) << "," << format_double(scale) << ","
       << (t ? csv(*t / scale) : "") << "\n";
    j["entries"].push_back({{"epsilon", e}, {"h", grid.h()}, {"generation_time", number(t)},
                            {"ratio", t ? number(*t / scale) : json(nullptr)}});
  }
  const double bound = s.model.scaling == Scaling::One ? 0.20 : 0.25;
  if (ratios.size() == ladder.epsilons.size()) {
    const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
    const double spread = *mx / *mn - 1.0;
    j["spread"] = spread;
    j["spread_bound"] = bound;
    j["verdict"] = spread <= bound ? "constant within bound" : "not constant within bound";
    c.log << "gen-time: ratio spread " << format_double(spread) << " (bound " << format_double(bound) << ")\n";
  } else {
    j["spread"] = nullptr;
    j["verdict"] = "not reached by t_end for every epsilon";
    c.log << "gen-time: not reached by t_end for every epsilon\n";
  }
  write_json(c.out / "report.json", j);
  write_file_atomic(c.out / "generation.csv", os.str());
  return 0;
}

int cmd_no_interior(Context& c) {
  const ExperimentSpec& s = c.spec;
  std::vector<Grid> grids;
  if (s.resolutions.empty()) {
    grids.push_back(s.grid.build());
  } else {
    for (Index n : s.resolutions) {
      GridSpec g = s.grid;
      if (g.dim == 1) g.h = (g.hi - g.lo) / static_cast<double>(n - 1);
      else g.n = n;
      grids.push_back(g.build());
    }
  }
  std::vector<std::vector<Snapshot>> runs;
  for (const Grid& grid : grids) {
    const ScalarField speed = speed_for(c, grid);
    runs.push_back(hj_run(s.hj_config(grid), s.initial_field(grid), speed).snapshots);
  }
  for (auto& run : runs) run.erase(run.begin());  // t = 0 is the data, not the flow
  const NoInteriorReport r = no_interior_check(runs, s.band_tol_cells, s.ratio_bound);
  std::ostringstream os;
  os << "h,t,band_measure,front_length,ratio\n";
  json entries = json::array();
  for (const NoInteriorEntry& e : r.entries) {
    os << format_double(e.h) << "," << format_double(e.t) << "," << format_double(e.band_measure) << ","
       << format_double(e.front_length) << "," << csv(e.ratio) << "\n";
    entries.push_back({{"h", e.h}, {"t", e.t}, {"band_measure", e.band_measure}, {"front_length", e.front_length},
                       {"ratio", number(e.ratio)}});
  }
  json j;
  j["name"] = s.name;
  j["entries"] = entries;
  j["ratio_bound"] = r.ratio_bound;
  j["max_ratio"] = number(r.max_ratio);
  j["verdict"] = r.verdict;
  write_json(c.out / "report.json", j);
  write_file_atomic(c.out / "band.csv", os.str());
  c.log << "no-interior: max ratio " << csv(r.max_ratio) << ", " << r.verdict << "\n";
  return 0;
}

const std::map<std::string, std::function<int(Context&)>>& table() {
  static const std::map<std::string, std::function<int(Context&)>> t = {
      {"rd-run", cmd_rd_run},
      {"hj-run", [](Context& c) { return run_hj(c, false); }},
      {"mcf-run", [](Context& c) { return run_hj(c, true); }},
      {"arrival", cmd_arrival},
      {"represent", cmd_represent},
      {"bracket", cmd_bracket},
      {"converge", cmd_converge},
      {"no-interior", cmd_no_interior},
      {"validate", cmd_validate},
      {"gen-time", cmd_gen_time},
  };
  return t;
}

}  // namespace

std::vector<std::string> subcommands() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : table()) out.push_back(name);
  return out;
}

int run_command(const std::string& subcommand, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto it = table().find(subcommand);
  if (it == table().end()) {
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return 2;
  }
  try {
    std::vector<std::string> overrides = options.overrides;
    if (!options.model.empty()) overrides.push_back("model.file=" + fs::absolute(options.model).string());
    if (!options.seed.empty()) overrides.push_back("experiment.seed=" + options.seed);
    Context c{load_spec(options.spec, overrides), options.out, out};
    if (options.jobs > 0) c.spec.jobs = options.jobs;
    fs::create_directories(c.out);
    return it->second(c);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular-limit experiments for bistable reaction-diffusion fronts"};
  app.require_subcommand(1);
  CommandOptions options;
  for (const std::string& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--spec", options.spec, "experiment file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", options.out, "output directory")->capture_default_str();
    sub->add_option("--jobs", options.jobs, "concurrent ladder jobs")->check(CLI::PositiveNumber);
    sub->add_option("--override", options.overrides, "section.key=value, repeatable");
    sub->add_option("--model", options.model, "model file replacing [model] file")->check(CLI::ExistingFile);
    if (name == "arrival") sub->add_option("--seed", options.seed, "seed point x[,y]");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  return run_command(app.get_subcommands().front()->get_name(), options, out, err);
}

}  // namespace frontlim
