#include "frontlim/hj.hpp"

#include "frontlim/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frontlim {

std::string to_string(VelocityMode m) {
  switch (m) {
    case VelocityMode::LowerEnvelope: return "lower_envelope";
    case VelocityMode::UpperEnvelope: return "upper_envelope";
    case VelocityMode::OneSidedLower: return "one_sided_lower";
    case VelocityMode::OneSidedUpper: return "one_sided_upper";
  }
  return "?";
}

VelocityMode velocity_mode_from_string(const std::string& s) {
  if (s == "lower_envelope") return VelocityMode::LowerEnvelope;
  if (s == "upper_envelope") return VelocityMode::UpperEnvelope;
  if (s == "one_sided_lower") return VelocityMode::OneSidedLower;
  if (s == "one_sided_upper") return VelocityMode::OneSidedUpper;
  throw ConfigError("unknown velocity mode '" + s + "'");
}

const Snapshot& HJSolution::nearest(double t) const {
  if (snapshots.empty()) throw ConfigError("empty solution");
  const Snapshot* best = &snapshots.front();
  for (const Snapshot& s : snapshots)
    if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
  return *best;
}

ScalarField velocity_field(const Grid& grid, VelocityMode mode, const VelocityModel& model, double epsilon) {
  const double snap = grid.h() / 2.0;
  const bool one_sided = mode == VelocityMode::OneSidedLower || mode == VelocityMode::OneSidedUpper;
  if (one_sided && !(epsilon > 0.0)) throw ConfigError("one-sided velocity modes need epsilon > 0");
  const BistableModel bistable{model, epsilon, Scaling::One};
  return ScalarField::sample(grid, [&](const Point& x) {
    switch (mode) {
      case VelocityMode::LowerEnvelope: return alpha_envelopes(x, model, snap).lower;
      case VelocityMode::UpperEnvelope: return alpha_envelopes(x, model, snap).upper;
      case VelocityMode::OneSidedLower: return one_sided_velocities(x, bistable).c_lower;
      case VelocityMode::OneSidedUpper: return one_sided_velocities(x, bistable).c_upper;
    }
    return 0.0;
  });
}

double hj_stable_dt(const Grid& grid, double max_speed, bool curvature) {
  double bound = std::numeric_limits<double>::infinity();
  if (max_speed > 0.0) bound = grid.h() / (grid.dim() * max_speed);
  if (curvature) bound = std::min(bound, grid.h() * grid.h() / (4.0 * grid.dim()));
  return bound;
}

namespace {

class HJStepper {
 public:
  HJStepper(const HJConfig& cfg, const ScalarField& u0, const ScalarField& speed)
      : g_(cfg.grid), speed_(speed.values()), u_(u0), next_(u0.values()), curvature_(cfg.curvature) {
    eta_ = cfg.eta > 0.0 ? cfg.eta : 1e-6 / g_.h();
  }

  void step(double dt) {
    const Grid& g = g_;
    const Index nx = g.nx(), ny = g.ny();
    const bool two = g.dim() == 2;
    for (Index j = 0; j < ny; ++j) {
      const bool inner_row = !two || (j > 0 && j + 1 < ny);
      for (Index i = 0; i < nx; ++i) {
        const Index k = g.index(i, j);
        Stencil s;
        if (inner_row && i > 0 && i + 1 < nx) {
          s = {k - 1, k + 1, k - nx, k + nx};
        } else {
          s = {g.neighbor(i, j, 0, -1), g.neighbor(i, j, 0, 1), two ? g.neighbor(i, j, 1, -1) : k,
               two ? g.neighbor(i, j, 1, 1) : k};
        }
        next_[k] = u_[k] + dt * rate(k, s);
      }
    }
    ++steps_;
    if (!next_.allFinite()) throw NumericalError("hj_run: non-finite value at step " + std::to_string(steps_));
    u_.values().swap(next_);
  }

  void reinitialise() {
    const auto& v = u_.values();
    if ((v > 0.0).any() && (v < 0.0).any()) u_ = signed_distance(u_);
  }

  long steps() const { return steps_; }
  const ScalarField& state() const { return u_; }

 private:
  struct Stencil {
    Index xm, xp, ym, yp;
  };

  double rate(Index k, const Stencil& s) const {
    const auto& u = u_.values();
    const double h = g_.h();
    const double uk = u[k];
    const bool two = g_.dim() == 2;
    auto upwind = [&](double ul, double ur) {
      return std::max({(uk - ul) / h, 0.0, -(ur - uk) / h});
    };
    const double gx = upwind(u[s.xm], u[s.xp]);
    const double gy = two ? upwind(u[s.ym], u[s.yp]) : 0.0;
    double r = -speed_[k] * std::sqrt(gx * gx + gy * gy);
    if (!curvature_) return r;

    const double px = (u[s.xp] - u[s.xm]) / (2.0 * h);
    const double uxx = (u[s.xp] - 2.0 * uk + u[s.xm]) / (h * h);
    double py = 0.0, uyy = 0.0, uxy = 0.0;
    if (two) {
      py = (u[s.yp] - u[s.ym]) / (2.0 * h);
      uyy = (u[s.yp] - 2.0 * uk + u[s.ym]) / (h * h);
      const Index ip = g_.col(s.xp), im = g_.col(s.xm), jp = g_.row(s.yp), jm = g_.row(s.ym);
      uxy = (u[g_.index(ip, jp)] - u[g_.index(ip, jm)] - u[g_.index(im, jp)] + u[g_.index(im, jm)]) / (4.0 * h * h);
    }
    const double pn = std::max(std::sqrt(px * px + py * py), eta_);
    const double pxp = px * px * uxx + 2.0 * px * py * uxy + py * py * uyy;
    return r + uxx + uyy - pxp / (pn * pn);
  }

  Grid g_;
  Eigen::ArrayXd speed_;
  ScalarField u_;
  Eigen::ArrayXd next_;
  bool curvature_;
  double eta_;
  long steps_ = 0;
};

}  // namespace

HJSolution hj_run(const HJConfig& config, const ScalarField& u0, const ScalarField& speed) {
  if (!u0.grid().same_layout(config.grid) || !speed.grid().same_layout(config.grid)) {
    throw ConfigError("hj_run: field grids do not match the solver grid");
  }
  if (!(config.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if ((speed.values() < 0.0).any()) throw ConfigError("hj_run: speed must be nonnegative");
  const double max_speed = speed.values().maxCoeff();
  const double bound = hj_stable_dt(config.grid, max_speed, config.curvature);
  double dt = config.dt;
  if (dt <= 0.0) {
    dt = std::isfinite(bound) ? 0.9 * bound : config.t_end;
  } else if (dt > bound * (1.0 + 1e-12)) {
    throw ConfigError("dt = " + format_double(dt) + " violates the CFL bound dt <= " + format_double(bound) +
                      (config.curvature ? " = min(h/(dim max alpha), h^2/(4 dim))" : " = h/(dim max alpha)"));
  }

  std::vector<double> targets = config.record_times;
  targets.push_back(config.t_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::remove_if(targets.begin(), targets.end(),
                               [&](double t) { return t <= 0.0 || t > config.t_end; }),
                targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  HJStepper stepper(config, u0, speed);
  HJSolution sol;
  sol.snapshots.push_back({0.0, u0});
  double t = 0.0;
  for (double target : targets) {
    while (t < target) {
      const double remaining = target - t;
      const bool lands = remaining <= dt * (1.0 + 1e-9);
      stepper.step(lands ? remaining : dt);
      t = lands ? target : t + dt;
      if (config.reinit_every > 0 && stepper.steps() % config.reinit_every == 0) stepper.reinitialise();
    }
    sol.snapshots.push_back({target, stepper.state()});
  }
  return sol;
}

HJSolution hj_run(const HJConfig& config, const ScalarField& u0, const VelocityModel& model) {
  return hj_run(config, u0, velocity_field(config.grid, config.mode, model, config.epsilon));
}

HJSolution mcf_run(HJConfig config, const ScalarField& u0, const VelocityModel& model) {
  config.curvature = true;
  return hj_run(config, u0, model);
}

HJSolution mcf_run(HJConfig config, const ScalarField& u0, const ScalarField& speed) {
  config.curvature = true;
  return hj_run(config, u0, speed);
}

double zero_set_gap(const ScalarField& a, const ScalarField& b) {
  const FrontTriple fa = zero_level_set(a);
  const FrontTriple fb = zero_level_set(b);
  if (fa.empty() && fb.empty()) return 0.0;
  if (fa.empty() || fb.empty()) return std::numeric_limits<double>::infinity();
  return hausdorff(fa.gamma, fb.gamma);
}

double BracketResult::max_gap() const {
  double m = 0.0;
  for (const auto& [t, g] : gap) m = std::max(m, g);
  return m;
}

BracketResult bracket_run(const HJConfig& config, const ScalarField& u0, const VelocityModel& model,
                          double epsilon) {
  HJConfig lo = config;
  lo.mode = VelocityMode::OneSidedLower;
  lo.epsilon = epsilon;
  HJConfig hi = lo;
  hi.mode = VelocityMode::OneSidedUpper;
  // both runs share one step so their snapshots line up
  if (lo.dt <= 0.0) {
    const double vmax = velocity_field(config.grid, hi.mode, model, epsilon).values().maxCoeff();
    lo.dt = hi.dt = 0.9 * hj_stable_dt(config.grid, vmax, config.curvature);
  }
  BracketResult out{hj_run(lo, u0, model), hj_run(hi, u0, model), {}};
  for (std::size_t s = 0; s < out.lower.snapshots.size(); ++s) {
    const Snapshot& a = out.lower.snapshots[s];
    const Snapshot& b = out.upper.snapshots[s];
    out.gap.emplace_back(a.t, zero_set_gap(a.field, b.field));
  }
  return out;
}

}  // namespace frontlim
