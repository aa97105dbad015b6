#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>

namespace frontlim {

using Index = Eigen::Index;
/// Points live in the plane; 1D problems use the first coordinate only.
using Point = Eigen::Vector2d;

enum class Boundary { Periodic, Neumann };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Uniform, isotropic, vertex-centred Cartesian grid in one or two
/// dimensions. Cell (i, j) sits at origin + h * (i, j); storage is row-major
/// with the x index running fastest.
class Grid {
 public:
  Grid(int dim, Point origin, double h, std::array<Index, 2> extents,
       Boundary boundary = Boundary::Neumann);

  /// 1D grid covering [lo, hi] with spacing close to (and not above) h.
  static Grid line(double lo, double hi, double h,
                   Boundary boundary = Boundary::Neumann);
  /// 2D grid with n x n nodes on the square [lo, hi]^2.
  static Grid square(double lo, double hi, Index n,
                     Boundary boundary = Boundary::Neumann);

  int dim() const { return dim_; }
  double h() const { return h_; }
  const Point& origin() const { return origin_; }
  Boundary boundary() const { return boundary_; }
  Index nx() const { return extents_[0]; }
  Index ny() const { return extents_[1]; }
  Index extent(int axis) const { return extents_[axis]; }
  Index size() const { return extents_[0] * extents_[1]; }

  Index index(Index i, Index j = 0) const { return j * extents_[0] + i; }
  Index col(Index idx) const { return idx % extents_[0]; }
  Index row(Index idx) const { return idx / extents_[0]; }

  Point node(Index i, Index j) const {
    return origin_ + h_ * Point(static_cast<double>(i), static_cast<double>(j));
  }
  Point node(Index idx) const { return node(col(idx), row(idx)); }

  /// Upper coordinate along an axis.
  double upper(int axis) const {
    return origin_[axis] + h_ * static_cast<double>(extents_[axis] - 1);
  }

  /// Neighbour index along `axis` in direction `step` (+1 or -1) with the
  /// boundary rule applied: periodic wrap, or mirror reflection (ghost node
  /// u_{-1} = u_{1}) for zero normal derivative.
  Index neighbor(Index i, Index j, int axis, int step) const;

  /// Nearest node to p, clamped into the grid.
  Index nearest(const Point& p) const;

  /// Cell measure h^dim.
  double cell_measure() const { return dim_ == 1 ? h_ : h_ * h_; }

  bool same_layout(const Grid& other) const;

 private:
  int dim_;
  Point origin_;
  double h_;
  std::array<Index, 2> extents_;
  Boundary boundary_;
};

}  // namespace frontlim
