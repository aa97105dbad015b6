#include "frontlim/grid.hpp"

#include "frontlim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace frontlim {

std::string to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "neumann";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "neumann" || s == "zero-normal-derivative") return Boundary::Neumann;
  throw ConfigError("unknown boundary kind '" + s + "'");
}

Grid::Grid(int dim, Point origin, double h, std::array<Index, 2> extents,
           Boundary boundary)
    : dim_(dim), origin_(origin), h_(h), extents_(extents), boundary_(boundary) {
  if (dim_ != 1 && dim_ != 2) throw ConfigError("grid dim must be 1 or 2");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ConfigError("grid spacing h must be positive");
  if (dim_ == 1) {
    extents_[1] = 1;
    origin_[1] = 0.0;
  }
  for (int a = 0; a < dim_; ++a) {
    if (extents_[a] < 3) throw ConfigError("grid extents must be >= 3 per axis");
  }
  if (extents_[0] > (Index{1} << 40) / std::max<Index>(extents_[1], 1)) {
    throw ConfigError("grid too large");
  }
}

Grid Grid::line(double lo, double hi, double h, Boundary boundary) {
  if (!(hi > lo)) throw ConfigError("line grid needs hi > lo");
  if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
  const auto n = static_cast<Index>(std::ceil((hi - lo) / h - 1e-9)) + 1;
  return Grid(1, Point(lo, 0.0), (hi - lo) / static_cast<double>(n - 1), {n, 1}, boundary);
}

Grid Grid::square(double lo, double hi, Index n, Boundary boundary) {
  if (n < 3) throw ConfigError("grid extents must be >= 3 per axis");
  const double h = (hi - lo) / static_cast<double>(n - 1);
  return Grid(2, Point(lo, lo), h, {n, n}, boundary);
}

Index Grid::neighbor(Index i, Index j, int axis, int step) const {
  Index c[2] = {i, j};
  const Index n = extents_[axis];
  Index k = c[axis] + step;
  if (k < 0 || k >= n) {
    if (boundary_ == Boundary::Periodic) {
      k = (k + n) % n;
    } else {
      k = k < 0 ? -k : 2 * (n - 1) - k;
    }
  }
  c[axis] = k;
  return index(c[0], c[1]);
}

Index Grid::nearest(const Point& p) const {
  Index c[2] = {0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double s = std::round((p[a] - origin_[a]) / h_);
    c[a] = static_cast<Index>(std::clamp(s, 0.0, static_cast<double>(extents_[a] - 1)));
  }
  return index(c[0], c[1]);
}

bool Grid::same_layout(const Grid& other) const {
  return dim_ == other.dim_ && extents_ == other.extents_ && h_ == other.h_ &&
         origin_ == other.origin_ && boundary_ == other.boundary_;
}

}  // namespace frontlim
