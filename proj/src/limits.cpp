#include "frontlim/limits.hpp"

#include "frontlim/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace frontlim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string eps_tag(double eps) { return "eps = " + format_double(eps) + ": "; }

bool same_domain(const Grid& a, const Grid& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (int ax = 0; ax < a.dim(); ++ax) {
    if (std::abs(a.origin()[ax] - b.origin()[ax]) > tol) return false;
    if (std::abs(a.upper(ax) - b.upper(ax)) > tol) return false;
  }
  return true;
}

const Grid& coarsest(std::span<const ScalarField> fields) {
  const ScalarField* c = &fields.front();
  for (const ScalarField& f : fields)
    if (f.grid().h() > c->grid().h()) c = &f;
  return c->grid();
}

Eigen::ArrayXd resample(const ScalarField& f, const Grid& target) {
  Eigen::ArrayXd v(target.size());
  for (Index k = 0; k < target.size(); ++k) v[k] = f[f.grid().nearest(target.node(k))];
  return v;
}

HalfLimits windowed(const Grid& g, const std::vector<Eigen::ArrayXd>& layers, double r) {
  const int reach = static_cast<int>(std::floor(r / g.h() + 1e-9));
  const int reach_y = g.dim() == 2 ? reach : 0;
  Eigen::ArrayXd lo(g.size()), hi(g.size());
  for (Index j = 0; j < g.ny(); ++j) {
    for (Index i = 0; i < g.nx(); ++i) {
      double mn = kInf, mx = -kInf;
      for (int dj = -reach_y; dj <= reach_y; ++dj) {
        for (int di = -reach; di <= reach; ++di) {
          if (std::hypot(double(di), double(dj)) * g.h() > r * (1.0 + 1e-12)) continue;
          const Index ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= g.nx() || jj < 0 || jj >= g.ny()) continue;
          for (const auto& layer : layers) {
            mn = std::min(mn, layer[g.index(ii, jj)]);
            mx = std::max(mx, layer[g.index(ii, jj)]);
          }
        }
      }
      lo[g.index(i, j)] = mn;
      hi[g.index(i, j)] = mx;
    }
  }
  return {ScalarField(g, std::move(lo)), ScalarField(g, std::move(hi))};
}

void check_ladder_fields(std::span<const ScalarField> fields) {
  if (fields.size() < 2) throw ConfigError("relaxed_limits needs at least two epsilon entries");
  const Grid& c = coarsest(fields);
  for (const ScalarField& f : fields) {
    if (!same_domain(f.grid(), c, 0.5 * c.h())) throw ConfigError("relaxed_limits: mismatched domains");
  }
}

}  // namespace

Grid GridPolicy::grid_for(double epsilon, double k) const {
  if (!(cells_per_eps >= 4.0)) throw ConfigError("cells_per_eps must be at least 4 (h <= eps/4)");
  if (!(hi > lo)) throw ConfigError("grid box must have hi > lo");
  const double h = std::min(epsilon, std::pow(epsilon, k)) / cells_per_eps;
  if (dim == 1) return Grid::line(lo, hi, h, boundary);
  if (dim == 2) {
    const auto n = static_cast<Index>(std::ceil((hi - lo) / h - 1e-9)) + 1;
    return Grid::square(lo, hi, n, boundary);
  }
  throw ConfigError("grid dimension must be 1 or 2");
}

void EpsLadder::validate() const {
  if (epsilons.size() < 3) throw ConfigError("epsilon ladder needs at least 3 entries");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw ConfigError("epsilon ladder entries must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw ConfigError("epsilon ladder must be strictly decreasing");
    }
  }
}

BistableModel EpsLadder::model_for(double epsilon) const {
  BistableModel m = model;
  m.epsilon = epsilon;
  return m;
}

Grid EpsLadder::grid_for(double epsilon) const { return grid.grid_for(epsilon, model.velocity.k); }

InitialData wave_initial_data(std::function<double(const Point&)> d0, const BistableModel& model) {
  return [d0 = std::move(d0), model](const Point& x, double eps) {
    BistableModel m = model;
    m.epsilon = eps;
    return traveling_wave(d0(x) / eps, x, m);
  };
}

HalfLimits relaxed_limits(std::span<const ScalarField> fields, double r) {
  check_ladder_fields(fields);
  const auto finest = fields.subspan(fields.size() - 2);
  const Grid& g = coarsest(finest);
  if (r <= 0.0) r = 2.0 * g.h();
  std::vector<Eigen::ArrayXd> layers;
  for (const ScalarField& f : finest) layers.push_back(resample(f, g));
  return windowed(g, layers, r);
}

HalfLimits relaxed_limits_scaled(std::span<const ScalarField> fields, std::span<const double> epsilons, double r) {
  check_ladder_fields(fields);
  if (epsilons.size() != fields.size()) throw ConfigError("relaxed_limits: one epsilon per field required");
  const std::size_t n = fields.size();
  const Grid& g = coarsest(fields.subspan(n - 2));
  if (r <= 0.0) r = 2.0 * g.h();
  std::vector<Eigen::ArrayXd> minus_one, plus_one;
  for (std::size_t i = n - 2; i < n; ++i) {
    const Eigen::ArrayXd v = resample(fields[i], g);
    minus_one.push_back((v - 1.0) / epsilons[i]);
    plus_one.push_back((v + 1.0) / epsilons[i]);
  }
  return {windowed(g, minus_one, r).lower, windowed(g, plus_one, r).upper};
}

OmegaSets omega_sets(const ScalarField& liminf, const ScalarField& limsup, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("omega_sets: tol must lie in (0, 1)");
  return {liminf.values() >= 1.0 - tol, limsup.values() <= -1.0 + tol};
}

OmegaSets omega_sets_scaled(const ScalarField& liminf, const ScalarField& limsup, double tol) {
  if (!(tol > 0.0)) throw ConfigError("omega_sets: tol must be positive");
  return {liminf.values() >= -tol, limsup.values() <= tol};
}

std::optional<double> generation_time(const BistableModel& model, const ScalarField& g, const ScalarField& d0,
                                      double beta, double t_end, double margin) {
  const Grid& grid = g.grid();
  if (!d0.grid().same_layout(grid)) throw ConfigError("generation_time: d0 grid does not match g");
  if (!(beta > 0.0)) throw ConfigError("generation_time: beta must be positive");
  std::vector<Index> region;
  for (Index k = 0; k < grid.size(); ++k)
    if (d0[k] >= beta) region.push_back(k);
  if (region.empty()) throw ConfigError("generation_time: region {d0 >= beta} is empty");
  const bool two = model.scaling == Scaling::Two;
  for (Index k : region) {
    const double m_bar = two ? 0.0 : alpha_envelopes(grid.node(k), model.velocity, grid.h() / 2.0).upper / 2.0;
    if (!(g[k] > m_bar + margin)) {
      throw ConfigError("generation_time: g = " + format_double(g[k]) + " does not exceed m_bar + margin = " +
                        format_double(m_bar + margin) + " on {d0 >= beta}");
    }
  }
  const double target = two ? 1.0 - beta * model.epsilon : 1.0 - beta;
  auto reached = [&](const ScalarField& u) {
    return std::all_of(region.begin(), region.end(), [&](Index k) { return u[k] >= target; });
  };
  RDConfig cfg{model, grid, 0.0, t_end, 1, {}};
  RDStepper stepper(cfg, g);
  if (reached(stepper.state())) return 0.0;
  while (stepper.time() < t_end) {
    stepper.step(std::min(stepper.dt(), t_end - stepper.time()));
    if (reached(stepper.state())) return stepper.time();
  }
  return std::nullopt;
}

std::vector<ChiPoint> ode_chi(double xi, const Point& x, const BistableModel& model, double tau_end, double dtau) {
  if (!(tau_end > 0.0)) throw ConfigError("ode_chi: tau_end must be positive");
  if (!(dtau > 0.0)) throw ConfigError("ode_chi: dtau must be positive");
  const double c = c_eps(x, model);
  auto rhs = [c](double q) { return -bistable_cubic(q, c); };
  const double bound = std::max(1.0, std::abs(xi));
  const double lip = 6.0 * bound * bound + 2.0 * std::abs(c) * bound + 2.0;
  const auto n = static_cast<long>(std::ceil(tau_end / dtau - 1e-9));
  const double step = tau_end / static_cast<double>(n);
  std::vector<ChiPoint> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  double q = xi;
  out.push_back({0.0, q});
  for (long s = 1; s <= n; ++s) {
    const double k1 = rhs(q);
    const double k2 = rhs(q + 0.5 * step * k1);
    const double k3 = rhs(q + 0.5 * step * k2);
    const double k4 = rhs(q + step * k3);
    q += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(q) || std::abs(q) > bound * (1.0 + 1e-9)) {
      throw NumericalError("ode_chi: RK4 unstable at step " + std::to_string(s) + " (dtau = " +
                           format_double(step) + "); use dtau <= " + format_double(1.0 / lip));
    }
    out.push_back({static_cast<double>(s) * step, q});
  }
  return out;
}

std::optional<double> chi_entry_time(std::span<const ChiPoint> traj, const Point& x, const BistableModel& model,
                                     double level) {
  if (traj.empty()) return std::nullopt;
  if (traj.back().chi < level) return std::nullopt;
  std::size_t last_below = traj.size();
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (traj[i].chi < level) last_below = i;
  if (last_below == traj.size()) return traj.front().tau;
  const ChiPoint a = traj[last_below], b = traj[last_below + 1];
  const double c = c_eps(x, model);
  const double da = -bistable_cubic(a.chi, c), db = -bistable_cubic(b.chi, c);
  const double len = b.tau - a.tau;
  auto hermite = [&](double s) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a.chi + (s3 - 2 * s2 + s) * len * da + (-2 * s3 + 3 * s2) * b.chi +
           (s3 - s2) * len * db;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (hermite(mid) < level ? lo : hi) = mid;
  }
  return a.tau + hi * len;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit_line needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw ConfigError("fit_line: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

double generation_scale(double epsilon, Scaling scaling) {
  return scaling == Scaling::One ? epsilon : epsilon * epsilon * std::abs(std::log(epsilon));
}

namespace {

struct JobResult {
  EpsEntry entry;
  ScalarField last;
};

const Snapshot& reference_at(const std::vector<Snapshot>& ref, double t) {
  const Snapshot* best = nullptr;
  for (const Snapshot& s : ref)
    if (!best || std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
  if (!best || std::abs(best->t - t) > 1e-9 * std::max(1.0, std::abs(t))) {
    throw ConfigError("reference does not cover t = " + format_double(t));
  }
  return *best;
}

JobResult run_entry(const EpsLadder& ladder, double eps, const InitialData& g, const ConvergeOptions& opt) {
  const BistableModel model = ladder.model_for(eps);
  const Grid grid = ladder.grid_for(eps);
  const ScalarField g0 =
      ScalarField::sample(grid, [&](const Point& x) { return std::clamp(g(x, eps), -1.0, 1.0); });
  const double t_end = *std::max_element(opt.times.begin(), opt.times.end());
  RDConfig cfg{model, grid, 0.0, t_end, std::numeric_limits<long>::max(), opt.times};
  const RDTrajectory traj = rd_run(cfg, g0);

  EpsEntry e;
  e.epsilon = eps;
  e.h = grid.h();
  e.margin = std::max(5.0 * eps, 4.0 * grid.h());
  for (double t : opt.times) {
    const FrontTriple front = front_position(traj, t);
    const FrontTriple ref = zero_level_set(reference_at(opt.reference, t).field);
    if (front.empty() && ref.empty()) e.hausdorff.push_back(0.0);
    else if (front.empty() || ref.empty()) e.hausdorff.push_back(kInf);
    else e.hausdorff.push_back(hausdorff(front.gamma, ref.gamma));
    const EquilibriumFractions fr = equilibrium_fraction(traj.nearest(t).field, front, e.margin, opt.equilibrium_tol);
    e.fraction_plus.push_back(fr.plus);
    e.fraction_minus.push_back(fr.minus);
  }
  if (opt.d0) {
    const ScalarField d0 = ScalarField::sample(grid, opt.d0);
    e.generation_time = generation_time(model, g0, d0, opt.beta, t_end);
  }
  return {std::move(e), traj.nearest(t_end).field};
}

JobResult run_entry_annotated(const EpsLadder& ladder, double eps, const InitialData& g,
                              const ConvergeOptions& opt) {
  try {
    return run_entry(ladder, eps, g, opt);
  } catch (const ConfigError& err) {
    throw ConfigError(eps_tag(eps) + err.what());
  } catch (const NumericalError& err) {
    throw NumericalError(eps_tag(eps) + err.what());
  }
}

std::string trend_verdict(const std::vector<EpsEntry>& entries, std::size_t n_times) {
  int worst = 0;  // 0 strictly decreasing, 1 one small inversion, 2 not monotone
  for (std::size_t ti = 0; ti < n_times; ++ti) {
    int inversions = 0;
    bool large = false;
    for (std::size_t i = 1; i < entries.size(); ++i) {
      const double prev = entries[i - 1].hausdorff[ti], cur = entries[i].hausdorff[ti];
      if (cur < prev) continue;
      ++inversions;
      if (!(cur - prev <= entries[i].h)) large = true;
    }
    const int level = inversions == 0 ? 0 : (inversions == 1 && !large ? 1 : 2);
    worst = std::max(worst, level);
  }
  if (worst == 0) return "decreasing in epsilon";
  if (worst == 1) return "nonincreasing in epsilon within grid noise";
  return "not decreasing in epsilon";
}

}  // namespace

ConvergenceReport converge_report(const EpsLadder& ladder, const InitialData& g, const ConvergeOptions& options) {
  ladder.validate();
  if (options.times.empty()) throw ConfigError("converge_report: no sample times");
  for (double t : options.times) {
    if (!(t > 0.0)) throw ConfigError("converge_report: sample times must be positive");
    reference_at(options.reference, t);
  }
  const std::size_t n = ladder.epsilons.size();
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  std::vector<std::optional<JobResult>> results(n);
  for (std::size_t start = 0; start < n; start += jobs) {
    const std::size_t stop = std::min(n, start + jobs);
    if (stop - start == 1) {
      results[start] = run_entry_annotated(ladder, ladder.epsilons[start], g, options);
      continue;
    }
    std::vector<std::future<JobResult>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, run_entry_annotated, std::cref(ladder), ladder.epsilons[i],
                                 std::cref(g), std::cref(options)));
    }
    for (std::size_t i = start; i < stop; ++i) results[i] = batch[i - start].get();
  }

  ConvergenceReport rep;
  rep.scaling = ladder.model.scaling;
  rep.times = options.times;
  std::vector<ScalarField> last;
  for (auto& r : results) {
    rep.entries.push_back(r->entry);
    last.push_back(r->last);
  }

  // agreement of the two finest entries away from the reference front
  const double t_last = *std::max_element(options.times.begin(), options.times.end());
  const FrontTriple ref_last = zero_level_set(reference_at(options.reference, t_last).field);
  const ScalarField& a = last[n - 2];
  const ScalarField& b = last[n - 1];
  const Grid& coarse = a.grid().h() >= b.grid().h() ? a.grid() : b.grid();
  const Eigen::ArrayXd ref_dist = distance_to_points(coarse, ref_last.gamma);
  const double margin = std::max(rep.entries[n - 2].margin, rep.entries[n - 1].margin);
  const Eigen::ArrayXd va = resample(a, coarse), vb = resample(b, coarse);
  rep.finest_disagreement = 0.0;
  for (Index k = 0; k < coarse.size(); ++k)
    if (ref_dist[k] > margin) rep.finest_disagreement = std::max(rep.finest_disagreement, std::abs(va[k] - vb[k]));
  rep.finest_agree = rep.finest_disagreement <= options.agreement_tol;

  const HalfLimits hl = relaxed_limits(last);
  const OmegaSets om = omega_sets(hl.lower, hl.upper, options.omega_tol);
  const Eigen::ArrayXd om_dist = distance_to_points(hl.lower.grid(), ref_last.gamma);
  rep.omega_clearance = kInf;
  for (Index k = 0; k < om_dist.size(); ++k)
    if (om.omega1[k] || om.omega2[k]) rep.omega_clearance = std::min(rep.omega_clearance, om_dist[k]);
  rep.omega_margin = 2.0 * hl.lower.grid().h();
  rep.omega_clear = rep.omega_clearance > rep.omega_margin;

  const bool all_gen = std::all_of(rep.entries.begin(), rep.entries.end(),
                                   [](const EpsEntry& e) { return e.generation_time.has_value(); });
  if (all_gen) {
    std::vector<double> xs, ys, ratios;
    for (const EpsEntry& e : rep.entries) {
      const double s = generation_scale(e.epsilon, rep.scaling);
      xs.push_back(s);
      ys.push_back(*e.generation_time);
      ratios.push_back(*e.generation_time / s);
    }
    rep.generation_fit = fit_line(xs, ys);
    const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
    if (*mn > 0.0) rep.generation_spread = *mx / *mn - 1.0;
  }

  const std::string withheld = "withheld: the two finest entries disagree by " +
                               format_double(rep.finest_disagreement) + " off the front";
  if (!rep.finest_agree) {
    rep.hausdorff_verdict = withheld;
    rep.generation_verdict = withheld;
    return rep;
  }
  rep.hausdorff_verdict = trend_verdict(rep.entries, options.times.size());
  if (!options.d0) {
    rep.generation_verdict = "not measured";
  } else if (!all_gen) {
    rep.generation_verdict = "not reached by t_end for every epsilon";
  } else if (!rep.generation_spread) {
    rep.generation_verdict = "no scaling measured: the data is already generated at t = 0 for some epsilon";
  } else {
    const double bound = rep.scaling == Scaling::One ? 0.20 : 0.25;
    const std::string scale = rep.scaling == Scaling::One ? "eps" : "eps^2 |ln eps|";
    rep.generation_verdict = std::string(*rep.generation_spread <= bound ? "consistent" : "inconsistent") +
                             " with t_eps proportional to " + scale + " (spread " +
                             format_double(*rep.generation_spread) + ")";
  }
  return rep;
}

}  // namespace frontlim
