#pragma once

#include "frontlim/arrival.hpp"
#include "frontlim/hj.hpp"
#include "frontlim/limits.hpp"
#include "frontlim/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace frontlim {

/// Grid section of an experiment file. `n` (2D) or `h` selects the spacing;
/// converge and gen-time derive h from epsilon through `cells_per_eps`.
struct GridSpec {
  int dim = 1;
  double lo = -1.0;
  double hi = 1.0;
  double h = 0.01;
  Index n = 0;
  double cells_per_eps = 5.0;
  Boundary boundary = Boundary::Neumann;

  Grid build() const;
  GridPolicy policy() const { return {dim, lo, hi, cells_per_eps, boundary}; }
};

enum class InitialMode { Value, Wave };

/// One experiment: model, grid, solver parameters and run controls, read
/// from an INI file with sections [model], [grid], [solver], [experiment].
struct ExperimentSpec {
  std::string name = "experiment";
  std::filesystem::path source;

  BistableModel model;
  GridSpec grid;

  double dt = 0.0;
  long record_every = 100;
  VelocityMode mode = VelocityMode::LowerEnvelope;
  bool curvature = false;
  double eta = 0.0;
  long reinit_every = 0;
  Stencil stencil = Stencil::Eight;
  /// Epsilon for the one-sided modes and bracket runs; model epsilon if unset.
  std::optional<double> solver_epsilon;
  /// Fixed speed field replacing the model envelopes in hj-run and mcf-run.
  std::optional<Expression> speed;

  std::string initial = "x";
  std::optional<std::filesystem::path> initial_file;
  InitialMode initial_mode = InitialMode::Value;
  /// Signed distance to the initial front, for gen-time in value mode.
  std::optional<Expression> d0;
  double t_end = 1.0;
  std::vector<double> times;
  std::vector<double> epsilons;
  double beta = 0.1;
  Point seed = Point::Zero();
  std::vector<Index> resolutions;
  double band_tol_cells = 1.0;
  double ratio_bound = 4.0;
  double reference_h = 0.0;
  std::string reference = "arrival";
  int jobs = 1;

  double bracket_epsilon() const { return solver_epsilon.value_or(model.epsilon); }
  HJConfig hj_config(const Grid& grid) const;
  /// g(x, eps): the expression value, the wave profile around it, or the
  /// nearest node of the field file.
  InitialData initial_data() const;
  /// Initial level-set function for the hyperbolic solvers on `grid`.
  ScalarField initial_field(const Grid& grid) const;
};

/// Reads an experiment file. Overrides have the form section.key=value and
/// are applied after the file (and its model file) are read. Unknown keys and
/// malformed values throw ConfigError.
ExperimentSpec load_spec(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace frontlim
