#pragma once

#include "frontlim/errors.hpp"
#include "frontlim/grid.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace frontlim {

/// Nodal values on a Grid. Values are kept finite; every constructor and
/// `check_finite` enforce it.
template <typename Scalar>
class BasicScalarField {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicScalarField(Grid grid, Scalar fill)
      : grid_(std::move(grid)), values_(Values::Constant(grid_.size(), fill)) {
    check_finite();
  }

  BasicScalarField(Grid grid, Values values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw ConfigError("field size does not match grid");
    }
    check_finite();
  }

  template <typename F>
  static BasicScalarField sample(const Grid& grid, F&& f) {
    Values v(grid.size());
    for (Index k = 0; k < grid.size(); ++k) v[k] = static_cast<Scalar>(f(grid.node(k)));
    return BasicScalarField(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Values& values() { return values_; }
  Index size() const { return values_.size(); }

  Scalar operator[](Index k) const { return values_[k]; }
  Scalar& operator[](Index k) { return values_[k]; }
  Scalar operator()(Index i, Index j = 0) const { return values_[grid_.index(i, j)]; }

  void check_finite() const {
    if (!values_.allFinite()) throw NumericalError("field contains non-finite values");
  }

 private:
  Grid grid_;
  Values values_;
};

using ScalarField = BasicScalarField<double>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

struct Snapshot {
  double t;
  ScalarField field;
};

/// Zero level set of a field together with the strict positive and
/// negative regions. Nodes whose value equals `iso` exactly belong to
/// neither region and contribute their own position to `gamma`.
struct FrontTriple {
  std::vector<Point> gamma;
  Mask d_plus;
  Mask d_minus;
  double iso = 0.0;

  bool empty() const { return gamma.empty(); }
};

FrontTriple zero_level_set(const ScalarField& f, double iso = 0.0);

/// Signed distance to the zero level set of `f`, positive where f > 0.
/// Throws ConfigError("no interface") when `f` has only one sign.
ScalarField signed_distance(const ScalarField& f);
/// Signed distance to the boundary of a node mask, positive inside it.
ScalarField signed_distance(const Grid& grid, const std::function<bool(const Point&)>& inside);

/// Unsigned distance from every node to the nearest point of `points`,
/// by two-pass nearest-seed propagation. Empty `points` gives +inf.
Eigen::ArrayXd distance_to_points(const Grid& grid, std::span<const Point> points);

/// Symmetric Hausdorff distance. Exact in both regimes: brute force for
/// fewer than 10^4 points in total, bucketed nearest-neighbour search above.
double hausdorff(std::span<const Point> a, std::span<const Point> b);
double directed_hausdorff(std::span<const Point> from, std::span<const Point> to);

/// Measure (cell count times h^dim) of the band {|f| <= tol}.
double interior_band_measure(const ScalarField& f, double tol);

/// Length of the zero level set: marching-squares segment length in 2D,
/// number of sign changes in 1D. Nodes at exactly `iso` count as positive.
double front_length(const ScalarField& f, double iso = 0.0);

}  // namespace frontlim
