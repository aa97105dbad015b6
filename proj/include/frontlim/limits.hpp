#pragma once

#include "frontlim/field.hpp"
#include "frontlim/model.hpp"
#include "frontlim/rd.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace frontlim {

/// How the grid follows epsilon: h = min(eps, eps^k) / cells_per_eps on a
/// fixed box, so that h <= eps/4 and h <= eps^k/4 whenever cells_per_eps >= 4.
struct GridPolicy {
  int dim = 1;
  double lo = -1.0;
  double hi = 1.0;
  double cells_per_eps = 5.0;
  Boundary boundary = Boundary::Neumann;

  Grid grid_for(double epsilon, double k) const;
};

struct EpsLadder {
  /// Strictly decreasing, at least three entries.
  std::vector<double> epsilons;
  /// Template model; its epsilon is replaced per entry.
  BistableModel model;
  GridPolicy grid;

  void validate() const;
  BistableModel model_for(double epsilon) const;
  Grid grid_for(double epsilon) const;
};

/// Initial data that may depend on epsilon (well-prepared profiles do).
using InitialData = std::function<double(const Point& x, double epsilon)>;

/// Traveling-wave profile q(d0(x)/eps, x) around the signed distance d0,
/// positive (close to +1) where d0 > 0.
InitialData wave_initial_data(std::function<double(const Point&)> d0, const BistableModel& model);

struct HalfLimits {
  ScalarField lower;  // liminf_*
  ScalarField upper;  // limsup^*
};

/// Empirical half-limits: fields are ordered by decreasing epsilon, the last
/// two are resampled to the coarsest grid by nearest node and reduced by
/// min/max over a window of radius r (r <= 0 selects 2h of the coarsest grid).
/// Throws ConfigError when the physical domains differ.
HalfLimits relaxed_limits(std::span<const ScalarField> fields, double r = 0.0);

/// The same limits of (u - 1)/eps (lower) and (u + 1)/eps (upper).
HalfLimits relaxed_limits_scaled(std::span<const ScalarField> fields, std::span<const double> epsilons,
                                 double r = 0.0);

struct OmegaSets {
  Mask omega1;  // liminf >= 1 - tol
  Mask omega2;  // limsup <= -1 + tol
};

OmegaSets omega_sets(const ScalarField& liminf, const ScalarField& limsup, double tol);

/// Scaled variant: omega1 where the liminf of (u - 1)/eps >= -tol, omega2
/// where the limsup of (u + 1)/eps <= tol.
OmegaSets omega_sets_scaled(const ScalarField& liminf, const ScalarField& limsup, double tol);

/// First time at which u >= 1 - beta (scaling one) or u >= 1 - beta eps
/// (scaling two) on every node with d0 >= beta. nullopt if not reached by
/// t_end. Throws ConfigError when {d0 >= beta} is empty or g does not exceed
/// alpha^*/2 + margin there.
std::optional<double> generation_time(const BistableModel& model, const ScalarField& g, const ScalarField& d0,
                                      double beta, double t_end, double margin = 0.0);

struct ChiPoint {
  double tau;
  double chi;
};

/// RK4 for chi' + f_eps(chi, x) = 0, chi(0) = xi, with step dtau. Throws
/// ConfigError for tau_end <= 0 and NumericalError (naming a stable step)
/// when the iteration leaves the invariant interval.
std::vector<ChiPoint> ode_chi(double xi, const Point& x, const BistableModel& model, double tau_end,
                              double dtau = 0.01);

/// First tau from which chi stays >= level, by bisection between the
/// bracketing RK4 nodes (cubic Hermite interpolation). nullopt if never.
std::optional<double> chi_entry_time(std::span<const ChiPoint> traj, const Point& x, const BistableModel& model,
                                     double level);

struct ConvergeOptions {
  std::vector<double> times;
  /// Reference level-set series, positive on the same side as u = +1.
  std::vector<Snapshot> reference;
  /// Signed distance of the initial front for the generation-time probe;
  /// empty skips it.
  std::function<double(const Point&)> d0;
  double beta = 0.1;
  double equilibrium_tol = 0.1;
  double omega_tol = 0.1;
  double agreement_tol = 0.1;
  int jobs = 1;
};

struct EpsEntry {
  double epsilon = 0.0;
  double h = 0.0;
  std::vector<double> hausdorff;  // per time; +inf when one front is missing
  std::vector<std::optional<double>> fraction_plus;
  std::vector<std::optional<double>> fraction_minus;
  std::optional<double> generation_time;
  double margin = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

struct ConvergenceReport {
  Scaling scaling = Scaling::One;
  std::vector<double> times;
  std::vector<EpsEntry> entries;  // ordered by decreasing epsilon
  /// Generation time against eps (scaling one) or eps^2 |ln eps| (two).
  std::optional<LinearFit> generation_fit;
  /// max / min of t_eps over its scale, minus one; unset when some t_eps is 0.
  std::optional<double> generation_spread;
  /// max |u_a - u_b| between the two finest entries at the last time, away
  /// from the reference front.
  double finest_disagreement = 0.0;
  bool finest_agree = false;
  /// Smallest distance from an Omega node to the reference front at the last time.
  double omega_clearance = 0.0;
  /// Declared margin: the relaxed-limit window radius. The Omega masks must
  /// stay farther than this from the reference front.
  double omega_margin = 0.0;
  bool omega_clear = false;
  std::string hausdorff_verdict;
  std::string generation_verdict;
  std::string half_limit_label = "empirical half-limits";
};

ConvergenceReport converge_report(const EpsLadder& ladder, const InitialData& g, const ConvergeOptions& options);

/// Least squares line through (x_i, y_i).
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// eps (scaling one) or eps^2 |ln eps| (scaling two).
double generation_scale(double epsilon, Scaling scaling);

}  // namespace frontlim
