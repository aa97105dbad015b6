#include "frontlim/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frontlim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point interpolate_crossing(const Point& pa, const Point& pb, double da, double db) {
  const double t = da / (da - db);
  return pa + t * (pb - pa);
}

}  // namespace

FrontTriple zero_level_set(const ScalarField& f, double iso) {
  const Grid& g = f.grid();
  FrontTriple tri;
  tri.iso = iso;
  tri.d_plus = f.values() > iso;
  tri.d_minus = f.values() < iso;

  for (Index j = 0; j < g.ny(); ++j) {
    for (Index i = 0; i < g.nx(); ++i) {
      const Index k = g.index(i, j);
      const double da = f[k] - iso;
      if (da == 0.0) {
        tri.gamma.push_back(g.node(i, j));
        continue;
      }
      // edges towards +x and +y; endpoints exactly at iso are handled above
      if (i + 1 < g.nx()) {
        const double db = f[g.index(i + 1, j)] - iso;
        if (da * db < 0.0) tri.gamma.push_back(interpolate_crossing(g.node(i, j), g.node(i + 1, j), da, db));
      }
      if (g.dim() == 2 && j + 1 < g.ny()) {
        const double db = f[g.index(i, j + 1)] - iso;
        if (da * db < 0.0) tri.gamma.push_back(interpolate_crossing(g.node(i, j), g.node(i, j + 1), da, db));
      }
    }
  }
  return tri;
}

Eigen::ArrayXd distance_to_points(const Grid& g, std::span<const Point> points) {
  const Index n = g.size();
  Eigen::ArrayXd best = Eigen::ArrayXd::Constant(n, kInf);
  std::vector<Index> seed(static_cast<std::size_t>(n), -1);
  if (points.empty()) return best;

  auto offer = [&](Index k, Index s) {
    const double d = (g.node(k) - points[static_cast<std::size_t>(s)]).norm();
    if (d < best[k]) {
      best[k] = d;
      seed[static_cast<std::size_t>(k)] = s;
      return true;
    }
    return false;
  };

  for (std::size_t s = 0; s < points.size(); ++s) {
    const Point& p = points[s];
    Index lo[2] = {0, 0};
    Index hi[2] = {0, 0};
    for (int a = 0; a < g.dim(); ++a) {
      const double r = std::floor((p[a] - g.origin()[a]) / g.h());
      lo[a] = static_cast<Index>(std::clamp(r, 0.0, static_cast<double>(g.extent(a) - 1)));
      hi[a] = std::min(lo[a] + 1, g.extent(a) - 1);
    }
    for (Index j = lo[1]; j <= hi[1]; ++j)
      for (Index i = lo[0]; i <= hi[0]; ++i) offer(g.index(i, j), static_cast<Index>(s));
  }

  auto pull = [&](Index i, Index j, Index di, Index dj) {
    const Index ni = i + di;
    const Index nj = j + dj;
    if (ni < 0 || nj < 0 || ni >= g.nx() || nj >= g.ny()) return false;
    const Index s = seed[static_cast<std::size_t>(g.index(ni, nj))];
    return s >= 0 && offer(g.index(i, j), s);
  };

  for (int sweep = 0; sweep < 16; ++sweep) {
    bool changed = false;
    if (g.dim() == 1) {
      for (Index i = 1; i < g.nx(); ++i) changed |= pull(i, 0, -1, 0);
      for (Index i = g.nx() - 2; i >= 0; --i) changed |= pull(i, 0, 1, 0);
    } else {
      for (Index j = 0; j < g.ny(); ++j) {
        for (Index i = 0; i < g.nx(); ++i) {
          changed |= pull(i, j, -1, 0);
          changed |= pull(i, j, -1, -1);
          changed |= pull(i, j, 0, -1);
          changed |= pull(i, j, 1, -1);
        }
        for (Index i = g.nx() - 1; i >= 0; --i) changed |= pull(i, j, 1, 0);
      }
      for (Index j = g.ny() - 1; j >= 0; --j) {
        for (Index i = g.nx() - 1; i >= 0; --i) {
          changed |= pull(i, j, 1, 0);
          changed |= pull(i, j, 1, 1);
          changed |= pull(i, j, 0, 1);
          changed |= pull(i, j, -1, 1);
        }
        for (Index i = 0; i < g.nx(); ++i) changed |= pull(i, j, -1, 0);
      }
    }
    if (!changed) break;
  }
  return best;
}

ScalarField signed_distance(const ScalarField& f) {
  const FrontTriple tri = zero_level_set(f, 0.0);
  if (!tri.d_plus.any() || !tri.d_minus.any()) throw ConfigError("no interface");
  Eigen::ArrayXd d = distance_to_points(f.grid(), tri.gamma);
  for (Index k = 0; k < d.size(); ++k) {
    if (tri.d_minus[k]) d[k] = -d[k];
    else if (!tri.d_plus[k]) d[k] = 0.0;
  }
  return ScalarField(f.grid(), std::move(d));
}

ScalarField signed_distance(const Grid& grid, const std::function<bool(const Point&)>& inside) {
  return signed_distance(ScalarField::sample(grid, [&](const Point& p) { return inside(p) ? 1.0 : -1.0; }));
}

namespace {

double brute_directed(std::span<const Point> from, std::span<const Point> to) {
  double worst = 0.0;
  for (const Point& p : from) {
    double best = kInf;
    for (const Point& q : to) best = std::min(best, (p - q).squaredNorm());
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

/// Uniform bucket grid over a point cloud for exact nearest-neighbour queries.
class BucketIndex {
 public:
  explicit BucketIndex(std::span<const Point> pts) : pts_(pts) {
    lo_ = pts[0];
    Point hi = pts[0];
    for (const Point& p : pts) {
      lo_ = lo_.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Point ext = hi - lo_;
    const double span = std::max({ext.x(), ext.y(), 1e-300});
    size_ = std::max(span / std::sqrt(static_cast<double>(pts.size())), 1e-300);
    nx_ = static_cast<Index>(ext.x() / size_) + 1;
    ny_ = static_cast<Index>(ext.y() / size_) + 1;
    start_.assign(static_cast<std::size_t>(nx_ * ny_ + 1), 0);
    std::vector<Index> cell(pts.size());
    for (std::size_t s = 0; s < pts.size(); ++s) {
      cell[s] = bucket_of(pts[s]);
      ++start_[static_cast<std::size_t>(cell[s]) + 1];
    }
    for (std::size_t b = 1; b < start_.size(); ++b) start_[b] += start_[b - 1];
    order_.resize(pts.size());
    std::vector<Index> fill(start_.begin(), start_.end() - 1);
    for (std::size_t s = 0; s < pts.size(); ++s) {
      order_[static_cast<std::size_t>(fill[static_cast<std::size_t>(cell[s])]++)] = static_cast<Index>(s);
    }
  }

  double nearest_sq(const Point& q) const {
    const Index ci = clamp_axis(q.x() - lo_.x(), nx_);
    const Index cj = clamp_axis(q.y() - lo_.y(), ny_);
    // distance from q to its clamped bucket, used to bound the ring search
    const Point cmin = lo_ + size_ * Point(static_cast<double>(ci), static_cast<double>(cj));
    const Point cmax = cmin + Point(size_, size_);
    const double dq = (q - q.cwiseMax(cmin).cwiseMin(cmax)).norm();
    double best = kInf;
    const Index rmax = std::max(nx_, ny_);
    for (Index r = 0; r <= rmax; ++r) {
      const double bound = static_cast<double>(r - 1) * size_ - dq;
      if (bound > 0.0 && bound * bound > best) break;
      for (Index j = cj - r; j <= cj + r; ++j) {
        if (j < 0 || j >= ny_) continue;
        const bool edge_row = (j == cj - r || j == cj + r);
        for (Index i = ci - r; i <= ci + r; i += (edge_row ? 1 : 2 * std::max<Index>(r, 1))) {
          if (i < 0 || i >= nx_) continue;
          const Index b = j * nx_ + i;
          for (Index s = start_[static_cast<std::size_t>(b)]; s < start_[static_cast<std::size_t>(b) + 1]; ++s) {
            best = std::min(best, (q - pts_[static_cast<std::size_t>(order_[static_cast<std::size_t>(s)])]).squaredNorm());
          }
        }
      }
    }
    return best;
  }

 private:
  Index clamp_axis(double off, Index n) const {
    const double c = std::floor(off / size_);
    return static_cast<Index>(std::clamp(c, 0.0, static_cast<double>(n - 1)));
  }
  Index bucket_of(const Point& p) const {
    return clamp_axis(p.y() - lo_.y(), ny_) * nx_ + clamp_axis(p.x() - lo_.x(), nx_);
  }

  std::span<const Point> pts_;
  Point lo_;
  double size_;
  Index nx_;
  Index ny_;
  std::vector<Index> start_;
  std::vector<Index> order_;
};

}  // namespace

double directed_hausdorff(std::span<const Point> from, std::span<const Point> to) {
  if (from.empty() || to.empty()) throw std::invalid_argument("hausdorff: empty point set");
  if (from.size() + to.size() < 10000) return brute_directed(from, to);
  const BucketIndex index(to);
  double worst = 0.0;
  for (const Point& p : from) worst = std::max(worst, index.nearest_sq(p));
  return std::sqrt(worst);
}

double hausdorff(std::span<const Point> a, std::span<const Point> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double interior_band_measure(const ScalarField& f, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("interior_band_measure: tol must be positive");
  const auto count = (f.values().abs() <= tol).count();
  return static_cast<double>(count) * f.grid().cell_measure();
}

double front_length(const ScalarField& f, double iso) {
  const Grid& g = f.grid();
  auto pos = [&](Index i, Index j) { return f(i, j) >= iso; };
  if (g.dim() == 1) {
    double n = 0.0;
    for (Index i = 0; i + 1 < g.nx(); ++i) n += pos(i, 0) != pos(i + 1, 0) ? 1.0 : 0.0;
    return n;
  }
  double length = 0.0;
  for (Index j = 0; j + 1 < g.ny(); ++j) {
    for (Index i = 0; i + 1 < g.nx(); ++i) {
      const std::array<Index, 4> ci = {i, i + 1, i + 1, i};
      const std::array<Index, 4> cj = {j, j, j + 1, j + 1};
      std::array<bool, 4> s{};
      for (int c = 0; c < 4; ++c) s[c] = pos(ci[c], cj[c]);
      std::array<Point, 4> cross;
      std::array<bool, 4> has{};
      int count = 0;
      for (int e = 0; e < 4; ++e) {
        const int a = e;
        const int b = (e + 1) % 4;
        if (s[a] != s[b]) {
          const double da = f(ci[a], cj[a]) - iso;
          const double db = f(ci[b], cj[b]) - iso;
          const double t = (da == db) ? 0.5 : da / (da - db);
          cross[e] = g.node(ci[a], cj[a]) + t * (g.node(ci[b], cj[b]) - g.node(ci[a], cj[a]));
          has[e] = true;
          ++count;
        }
      }
      if (count == 2) {
        Point p[2];
        int m = 0;
        for (int e = 0; e < 4; ++e)
          if (has[e]) p[m++] = cross[e];
        length += (p[0] - p[1]).norm();
      } else if (count == 4) {
        double centre = 0.0;
        for (int c = 0; c < 4; ++c) centre += f(ci[c], cj[c]);
        const bool centre_pos = centre / 4.0 >= iso;
        // edges: 0 = ab, 1 = bc, 2 = cd, 3 = da
        if (centre_pos == s[0]) {
          length += (cross[0] - cross[1]).norm() + (cross[2] - cross[3]).norm();
        } else {
          length += (cross[3] - cross[0]).norm() + (cross[1] - cross[2]).norm();
        }
      }
    }
  }
  return length;
}

}  // namespace frontlim
