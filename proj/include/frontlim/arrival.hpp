#pragma once

#include "frontlim/field.hpp"
#include "frontlim/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace frontlim {

/// Graph neighbourhood for the minimum-time search. 1D grids always use the
/// two axis neighbours.
enum class Stencil { Eight, Sixteen };

std::string to_string(Stencil s);
Stencil stencil_from_string(const std::string& s);

struct ArrivalOptions {
  Stencil stencil = Stencil::Eight;
};

struct ArrivalSeed {
  Index cell;
  double time = 0.0;
};

/// Minimum travel time T_x(y) with cost 1 / alpha_*.
struct ArrivalField {
  ScalarField times;
  std::string seed;
};

/// 1 / alpha_* per node (alpha_* snapped to the interface within h/2).
/// Throws ConfigError where alpha_* <= 0.
Eigen::ArrayXd slowness_field(const Grid& grid, const VelocityModel& model);

/// Dijkstra over the stencil graph restricted to `allowed` nodes (empty mask
/// = all). Edge cost is the edge length times the mean endpoint slowness.
/// Unreached nodes are +inf.
Eigen::ArrayXd minimum_time(const Grid& grid, const Eigen::ArrayXd& slowness, std::span<const ArrivalSeed> seeds,
                            const Mask& allowed, Stencil stencil);

ArrivalField arrival_time(const Grid& grid, const VelocityModel& model, const Point& seed,
                          ArrivalOptions options = {});
ArrivalField arrival_time(const Grid& grid, const VelocityModel& model, std::span<const ArrivalSeed> seeds,
                          ArrivalOptions options = {});

/// Shortest stencil-path length between two nodes on a uniform grid.
double chamfer_distance(const Grid& grid, Index a, Index b, Stencil stencil);

/// Worst ratio of stencil-path length to Euclidean length.
double chamfer_distortion(Stencil stencil);

/// u(x, t) = min { u0(y) : T_x(y) <= t }.
double represent_u(const Point& x, double t, const ScalarField& u0, const VelocityModel& model,
                   ArrivalOptions options = {});

/// Level-set field of the minimum-time representation: the arrival times T+
/// on D+ and T- on D- are computed once from the zero set of u0, and
///   v(t) = T+ - t on D+,  -T- - t on D-,  -t on the zero set,
/// so that {v(t) > 0} = {T+ > t}. Regions that the front never reaches carry
/// a large finite time.
class Representation {
 public:
  Representation(const ScalarField& u0, const VelocityModel& model, ArrivalOptions options = {});

  ScalarField at(double t) const;
  const Grid& grid() const { return grid_; }
  const Eigen::ArrayXd& t_plus() const { return t_plus_; }
  const Eigen::ArrayXd& t_minus() const { return t_minus_; }

 private:
  Grid grid_;
  Eigen::ArrayXd t_plus_;
  Eigen::ArrayXd t_minus_;
  Mask plus_;
  Mask minus_;
};

/// One-off evaluation of Representation(u0, model).at(t).
ScalarField represent_field(double t, const ScalarField& u0, const VelocityModel& model, ArrivalOptions options = {});

struct NoInteriorEntry {
  double t = 0.0;
  double h = 0.0;
  double band_measure = 0.0;
  double front_length = 0.0;
  /// band / (h * length); +inf when there is a band but no front.
  double ratio = 0.0;
};

struct NoInteriorReport {
  std::vector<NoInteriorEntry> entries;
  double ratio_bound = 8.0;
  double max_ratio = 0.0;
  bool no_fattening = true;
  std::string verdict;
};

/// Measures the band {|v| <= tol} against h times the front length. A thin
/// front has a band of a few cells around it; a fattened one has a band of
/// positive measure that does not shrink with h. tol <= 0 selects h.
NoInteriorReport no_interior_check(std::span<const Snapshot> series, double tol = 0.0, double ratio_bound = 8.0);

/// The same check over several resolutions of one experiment; the band
/// tolerance is `tol_cells` grid cells at each resolution.
NoInteriorReport no_interior_check(const std::vector<std::vector<Snapshot>>& resolutions, double tol_cells = 1.0,
                                   double ratio_bound = 8.0);

}  // namespace frontlim
