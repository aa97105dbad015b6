#include "frontlim/rd.hpp"

#include "frontlim/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace frontlim {

namespace {

std::vector<Point> nodes_of(const Grid& grid) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(grid.size()));
  for (Index k = 0; k < grid.size(); ++k) pts.push_back(grid.node(k));
  return pts;
}

double diffusion_coefficient(const BistableModel& m) { return m.scaling == Scaling::One ? m.epsilon : 1.0; }
double reaction_scale(const BistableModel& m) {
  return m.scaling == Scaling::One ? m.epsilon : m.epsilon * m.epsilon;
}

}  // namespace

const Snapshot& RDTrajectory::nearest(double t) const {
  if (snapshots.empty()) throw ConfigError("empty trajectory");
  const Snapshot* best = &snapshots.front();
  for (const Snapshot& s : snapshots)
    if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
  return *best;
}

double rd_stable_dt(const BistableModel& model, const Grid& grid) {
  const std::vector<Point> pts = nodes_of(grid);
  const double lip = reaction_lipschitz(model, pts);
  const double h2 = grid.h() * grid.h();
  return 1.0 / (2.0 * grid.dim() * diffusion_coefficient(model) / h2 + lip / reaction_scale(model));
}

ScalarField unstable_level(const BistableModel& model, const Grid& grid) {
  return ScalarField::sample(grid, [&](const Point& x) { return unstable_root(x, model); });
}

RDStepper::RDStepper(const RDConfig& config, const ScalarField& g)
    : grid_(config.grid),
      dt_(config.dt),
      diffusion_(diffusion_coefficient(config.model)),
      reaction_scale_(reaction_scale(config.model)),
      u_(g),
      iso_(unstable_level(config.model, config.grid)) {
  if (!(config.model.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!g.grid().same_layout(grid_)) throw ConfigError("initial data grid does not match the solver grid");
  if ((g.values() < -1.0).any() || (g.values() > 1.0).any()) {
    throw ConfigError("initial data must lie in [-1, 1]");
  }
  c_ = 2.0 * iso_.values();
  if ((c_.abs() >= 2.0).any()) throw ConfigError("traveling-wave speed must satisfy |c_eps| < 2");
  const double bound = rd_stable_dt(config.model, grid_);
  if (dt_ <= 0.0) {
    dt_ = 0.9 * bound;
  } else if (dt_ > bound * (1.0 + 1e-12)) {
    throw ConfigError("dt = " + format_double(dt_) + " violates the CFL bound dt <= " + format_double(bound) +
                      " = 1/(2 dim D/h^2 + L_f/R)");
  }
  next_.resize(grid_.size());
}

void RDStepper::step(double dt) {
  const Grid& g = grid_;
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const auto& u = u_.values();
  const double a = dt * diffusion_ * inv_h2;
  const double b = dt / reaction_scale_;
  for (Index j = 0; j < g.ny(); ++j) {
    for (Index i = 0; i < g.nx(); ++i) {
      const Index k = g.index(i, j);
      const double uk = u[k];
      double lap = (u[g.neighbor(i, j, 0, -1)] + u[g.neighbor(i, j, 0, 1)]) - 2.0 * uk;
      if (g.dim() == 2) lap += (u[g.neighbor(i, j, 1, -1)] + u[g.neighbor(i, j, 1, 1)]) - 2.0 * uk;
      next_[k] = uk + a * lap - b * bistable_cubic(uk, c_[k]);
    }
  }
  ++steps_;
  if (!next_.allFinite()) {
    throw NumericalError("rd_run: non-finite value at step " + std::to_string(steps_));
  }
  u_.values().swap(next_);
  t_ += dt;
}

RDTrajectory rd_run(const RDConfig& config, const ScalarField& g) {
  if (!(config.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (config.record_every < 1) throw ConfigError("record_every must be >= 1");
  RDStepper stepper(config, g);

  std::vector<double> targets = config.record_times;
  targets.push_back(config.t_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::remove_if(targets.begin(), targets.end(),
                               [&](double t) { return t <= 0.0 || t > config.t_end; }),
                targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  RDTrajectory traj{{}, {}, stepper.iso_level()};
  auto record = [&](double t) {
    if (!traj.snapshots.empty() && traj.snapshots.back().t == t) return;
    traj.snapshots.push_back({t, stepper.state()});
    traj.front_history.push_back({t, front_position(stepper.state(), traj.iso_level)});
  };
  record(0.0);

  double t = 0.0;
  const double dt = stepper.dt();
  for (double target : targets) {
    while (t < target) {
      const double remaining = target - t;
      const bool lands = remaining <= dt * (1.0 + 1e-9);
      stepper.step(lands ? remaining : dt);
      t = lands ? target : t + dt;
      if (lands || stepper.steps() % config.record_every == 0) record(t);
    }
  }
  return traj;
}

FrontTriple front_position(const ScalarField& u, const ScalarField& iso_level) {
  ScalarField diff(u.grid(), u.values() - iso_level.values());
  return zero_level_set(diff, 0.0);
}

FrontTriple front_position(const RDTrajectory& traj, double t) {
  return front_position(traj.nearest(t).field, traj.iso_level);
}

EquilibriumFractions equilibrium_fraction(const ScalarField& u, const FrontTriple& front, double margin,
                                          double tol) {
  if (!(margin >= 2.0 * u.grid().h() * (1.0 - 1e-12))) {
    throw ConfigError("equilibrium_fraction: margin must be at least 2h");
  }
  const Eigen::ArrayXd dist = distance_to_points(u.grid(), front.gamma);
  long np = 0, nm = 0, hp = 0, hm = 0;
  for (Index k = 0; k < u.size(); ++k) {
    if (!(dist[k] > margin)) continue;
    if (front.d_plus[k]) {
      ++np;
      hp += std::abs(u[k] - 1.0) < tol;
    } else if (front.d_minus[k]) {
      ++nm;
      hm += std::abs(u[k] + 1.0) < tol;
    }
  }
  EquilibriumFractions out;
  if (np > 0) out.plus = static_cast<double>(hp) / static_cast<double>(np);
  if (nm > 0) out.minus = static_cast<double>(hm) / static_cast<double>(nm);
  return out;
}

EquilibriumFractions equilibrium_fraction(const RDTrajectory& traj, double t, const FrontTriple& front,
                                          double margin, double tol) {
  return equilibrium_fraction(traj.nearest(t).field, front, margin, tol);
}

double fitted_front_speed(const RDTrajectory& traj, double t0, double t1) {
  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  int n = 0;
  for (const FrontRecord& r : traj.front_history) {
    if (r.t < t0 || r.t > t1 || r.front.gamma.empty()) continue;
    double x = 0.0;
    for (const Point& p : r.front.gamma) x += p.x();
    x /= static_cast<double>(r.front.gamma.size());
    st += r.t;
    sx += x;
    stt += r.t * r.t;
    stx += r.t * x;
    ++n;
  }
  if (n < 2) throw ConfigError("fitted_front_speed: fewer than two front samples in the window");
  return (n * stx - st * sx) / (n * stt - st * st);
}

}  // namespace frontlim
