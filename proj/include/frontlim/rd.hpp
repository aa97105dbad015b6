#pragma once

#include "frontlim/field.hpp"
#include "frontlim/model.hpp"

#include <optional>
#include <vector>

namespace frontlim {

/// Explicit finite-difference solver configuration for
///   scaling one:  u_t - eps  Lap u + f(u, x) / eps   = 0
///   scaling two:  u_t -      Lap u + f(u, x) / eps^2 = 0
struct RDConfig {
  BistableModel model;
  Grid grid;
  /// Time step; zero or negative selects 0.9 of the stability bound.
  double dt = 0.0;
  double t_end = 1.0;
  /// Steps between snapshots (the initial and final states are always kept).
  long record_every = 100;
  /// Extra snapshot times; steps are shortened to land on them exactly.
  std::vector<double> record_times;
};

struct FrontRecord {
  double t;
  FrontTriple front;
};

struct RDTrajectory {
  std::vector<Snapshot> snapshots;
  std::vector<FrontRecord> front_history;
  /// The tracked level m_o(x) = c_eps(x) / 2.
  ScalarField iso_level;

  const Snapshot& nearest(double t) const;
};

/// Largest stable step: 1 / (2 dim D / h^2 + L_f / R) with D the diffusion
/// coefficient (eps or 1) and R the reaction scale (eps or eps^2). Under it
/// the update is monotone and preserves [-1, 1].
double rd_stable_dt(const BistableModel& model, const Grid& grid);

/// The tracked level c_eps / 2 sampled on the grid.
ScalarField unstable_level(const BistableModel& model, const Grid& grid);

/// Forward-Euler stepper shared by rd_run and the generation-time probe.
class RDStepper {
 public:
  /// Validates the configuration and initial data; throws ConfigError.
  RDStepper(const RDConfig& config, const ScalarField& g);

  /// Advance by `dt` (at most the configured step).
  void step(double dt);
  void step() { step(dt_); }

  double time() const { return t_; }
  long steps() const { return steps_; }
  double dt() const { return dt_; }
  const ScalarField& state() const { return u_; }
  const ScalarField& iso_level() const { return iso_; }

 private:
  Grid grid_;
  double dt_;
  double diffusion_;
  double reaction_scale_;
  Eigen::ArrayXd c_;
  ScalarField u_;
  ScalarField iso_;
  Eigen::ArrayXd next_;
  double t_ = 0.0;
  long steps_ = 0;
};

RDTrajectory rd_run(const RDConfig& config, const ScalarField& g);

/// Zero level set of u - m_o at the snapshot nearest to t.
FrontTriple front_position(const RDTrajectory& traj, double t);
FrontTriple front_position(const ScalarField& u, const ScalarField& iso_level);

struct EquilibriumFractions {
  /// Undefined (nullopt) when the corresponding test region is empty.
  std::optional<double> plus;
  std::optional<double> minus;
};

/// Fraction of nodes farther than `margin` from the front inside D+ (D-)
/// whose value is within `tol` of +1 (-1).
EquilibriumFractions equilibrium_fraction(const ScalarField& u, const FrontTriple& front, double margin,
                                          double tol);
EquilibriumFractions equilibrium_fraction(const RDTrajectory& traj, double t, const FrontTriple& front,
                                          double margin, double tol);

/// Least-squares speed of a 1D front: slope of the (single) front point of
/// each snapshot with t in [t0, t1]. Snapshots without a front are skipped.
double fitted_front_speed(const RDTrajectory& traj, double t0, double t1);

}  // namespace frontlim
