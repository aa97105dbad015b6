#pragma once

#include "frontlim/field.hpp"
#include "frontlim/model.hpp"

#include <utility>
#include <vector>

namespace frontlim {

/// Which single-valued speed a level-set run uses for the discontinuous
/// limit velocity.
enum class VelocityMode { LowerEnvelope, UpperEnvelope, OneSidedLower, OneSidedUpper };

std::string to_string(VelocityMode m);
VelocityMode velocity_mode_from_string(const std::string& s);

struct HJConfig {
  explicit HJConfig(Grid g) : grid(std::move(g)) {}

  Grid grid;
  VelocityMode mode = VelocityMode::LowerEnvelope;
  /// Only read by the one-sided modes.
  double epsilon = 0.0;
  /// Zero or negative selects 0.9 of the stability bound.
  double dt = 0.0;
  double t_end = 1.0;
  /// Snapshot times; steps are shortened to land on them. t = 0 and t_end
  /// are always recorded.
  std::vector<double> record_times;
  /// Adds the mean-curvature operator tr[(I - p^ p^) D^2u].
  bool curvature = false;
  /// Gradient floor for the curvature operator; zero selects 1e-6 / h.
  double eta = 0.0;
  /// Re-initialise to signed distance every this many steps (0 = never).
  long reinit_every = 0;
};

struct HJSolution {
  std::vector<Snapshot> snapshots;

  const Snapshot& nearest(double t) const;
};

/// Per-node speed for a velocity mode. The envelopes snap to the interface
/// within h/2.
ScalarField velocity_field(const Grid& grid, VelocityMode mode, const VelocityModel& model, double epsilon);

/// dt <= h / (dim max alpha), and dt <= h^2 / (4 dim) when curvature is on.
double hj_stable_dt(const Grid& grid, double max_speed, bool curvature);

/// u_t + alpha |Du| = 0 (optionally + F(Du, D^2u)) by the Rouy-Tourin
/// upwind scheme. Throws ConfigError for CFL violations or negative speed and
/// NumericalError on non-finite values.
HJSolution hj_run(const HJConfig& config, const ScalarField& u0, const ScalarField& speed);
HJSolution hj_run(const HJConfig& config, const ScalarField& u0, const VelocityModel& model);

/// hj_run with the curvature operator switched on.
HJSolution mcf_run(HJConfig config, const ScalarField& u0, const VelocityModel& model);
HJSolution mcf_run(HJConfig config, const ScalarField& u0, const ScalarField& speed);

struct BracketResult {
  HJSolution lower;  // one-sided lower speed: the slower, larger solution
  HJSolution upper;
  std::vector<std::pair<double, double>> gap;  // (t, Hausdorff gap of the zero sets)

  double max_gap() const;
};

/// Runs the one-sided lower and upper families and reports the Hausdorff
/// distance between their zero sets at every snapshot time.
BracketResult bracket_run(const HJConfig& config, const ScalarField& u0, const VelocityModel& model,
                          double epsilon);

/// Hausdorff distance between zero sets; 0 if both are empty, +inf if only one is.
double zero_set_gap(const ScalarField& a, const ScalarField& b);

}  // namespace frontlim
