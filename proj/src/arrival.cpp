#include "frontlim/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace frontlim {

std::string to_string(Stencil s) { return s == Stencil::Eight ? "8" : "16"; }

Stencil stencil_from_string(const std::string& s) {
  if (s == "8" || s == "eight") return Stencil::Eight;
  if (s == "16" || s == "sixteen") return Stencil::Sixteen;
  throw ConfigError("unknown stencil '" + s + "' (expected 8 or 16)");
}

Eigen::ArrayXd slowness_field(const Grid& grid, const VelocityModel& model) {
  Eigen::ArrayXd s(grid.size());
  const double snap = grid.h() / 2.0;
  for (Index k = 0; k < grid.size(); ++k) {
    const double a = alpha_envelopes(grid.node(k), model, snap).lower;
    if (!(a > 0.0)) {
      const Point x = grid.node(k);
      throw ConfigError("alpha_* = " + std::to_string(a) + " <= 0 at (" + std::to_string(x.x()) + ", " +
                        std::to_string(x.y()) + ")");
    }
    s[k] = 1.0 / a;
  }
  return s;
}

namespace {

struct Offset {
  int di, dj;
  double length;  // in units of h
};

std::vector<Offset> offsets(int dim, Stencil stencil) {
  std::vector<Offset> out;
  if (dim == 1) return {{-1, 0, 1.0}, {1, 0, 1.0}};
  const int reach = stencil == Stencil::Sixteen ? 2 : 1;
  for (int dj = -reach; dj <= reach; ++dj) {
    for (int di = -reach; di <= reach; ++di) {
      if (di == 0 && dj == 0) continue;
      if (std::gcd(std::abs(di), std::abs(dj)) != 1) continue;  // (2,0), (2,2) duplicate shorter moves
      out.push_back({di, dj, std::hypot(double(di), double(dj))});
    }
  }
  return out;
}

bool shift(const Grid& g, Index i, Index j, const Offset& o, Index& out) {
  Index ii = i + o.di, jj = j + o.dj;
  if (g.boundary() == Boundary::Periodic) {
    ii = (ii % g.nx() + g.nx()) % g.nx();
    jj = (jj % g.ny() + g.ny()) % g.ny();
  } else if (ii < 0 || ii >= g.nx() || jj < 0 || jj >= g.ny()) {
    return false;
  }
  out = g.index(ii, jj);
  return true;
}

}  // namespace

Eigen::ArrayXd minimum_time(const Grid& grid, const Eigen::ArrayXd& slowness, std::span<const ArrivalSeed> seeds,
                            const Mask& allowed, Stencil stencil) {
  if (seeds.empty()) throw ConfigError("minimum-time search needs at least one seed");
  if (slowness.size() != grid.size()) throw ConfigError("slowness size does not match grid");
  const bool masked = allowed.size() > 0;
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::ArrayXd t = Eigen::ArrayXd::Constant(grid.size(), inf);
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const ArrivalSeed& s : seeds) {
    if (s.cell < 0 || s.cell >= grid.size()) throw ConfigError("seed cell outside the grid");
    if (masked && !allowed[s.cell]) continue;
    if (s.time < t[s.cell]) {
      t[s.cell] = s.time;
      heap.emplace(s.time, s.cell);
    }
  }
  const std::vector<Offset> moves = offsets(grid.dim(), stencil);
  const double h = grid.h();
  while (!heap.empty()) {
    const auto [tk, k] = heap.top();
    heap.pop();
    if (tk > t[k]) continue;
    const Index i = grid.col(k), j = grid.row(k);
    for (const Offset& o : moves) {
      Index nb;
      if (!shift(grid, i, j, o, nb)) continue;
      if (masked && !allowed[nb]) continue;
      const double cand = tk + o.length * h * 0.5 * (slowness[k] + slowness[nb]);
      if (cand < t[nb]) {
        t[nb] = cand;
        heap.emplace(cand, nb);
      }
    }
  }
  return t;
}

ArrivalField arrival_time(const Grid& grid, const VelocityModel& model, std::span<const ArrivalSeed> seeds,
                          ArrivalOptions options) {
  const Eigen::ArrayXd t = minimum_time(grid, slowness_field(grid, model), seeds, Mask(), options.stencil);
  if (!t.allFinite()) throw NumericalError("arrival_time: some nodes are unreachable");
  std::string desc = std::to_string(seeds.size()) + " seed node(s)";
  return {ScalarField(grid, t), desc};
}

ArrivalField arrival_time(const Grid& grid, const VelocityModel& model, const Point& seed, ArrivalOptions options) {
  const ArrivalSeed s{grid.nearest(seed), 0.0};
  ArrivalField out = arrival_time(grid, model, std::span<const ArrivalSeed>(&s, 1), options);
  const Point x = grid.node(s.cell);
  out.seed = "node (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) + ")";
  return out;
}

double chamfer_distance(const Grid& grid, Index a, Index b, Stencil stencil) {
  double dx = std::abs(double(grid.col(a) - grid.col(b)));
  double dy = std::abs(double(grid.row(a) - grid.row(b)));
  if (grid.boundary() == Boundary::Periodic) {
    dx = std::min(dx, double(grid.nx()) - dx);
    dy = std::min(dy, double(grid.ny()) - dy);
  }
  const double big = std::max(dx, dy), small = std::min(dx, dy);
  double cells;
  if (grid.dim() == 1 || small == 0.0) {
    cells = big;
  } else if (stencil == Stencil::Eight) {
    cells = std::sqrt(2.0) * small + (big - small);
  } else if (2.0 * small <= big) {
    cells = std::sqrt(5.0) * small + (big - 2.0 * small);
  } else {
    cells = std::sqrt(5.0) * (big - small) + std::sqrt(2.0) * (2.0 * small - big);
  }
  return cells * grid.h();
}

double chamfer_distortion(Stencil stencil) {
  // worst direction is along tan = sqrt(2) - 1 (resp. sqrt(5) - 2)
  return stencil == Stencil::Eight ? std::sqrt(4.0 - 2.0 * std::sqrt(2.0)) : std::sqrt(10.0 - 4.0 * std::sqrt(5.0));
}

double represent_u(const Point& x, double t, const ScalarField& u0, const VelocityModel& model,
                   ArrivalOptions options) {
  const Grid& g = u0.grid();
  const ArrivalField a = arrival_time(g, model, x, options);
  double best = std::numeric_limits<double>::infinity();
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  for (Index k = 0; k < g.size(); ++k)
    if (a.times[k] <= t + slack) best = std::min(best, u0[k]);
  return best;
}

namespace {

constexpr double kUnreached = 1e12;

Eigen::ArrayXd region_times(const ScalarField& u, const Mask& region, const Eigen::ArrayXd& slowness,
                            Stencil stencil, double sign) {
  const Grid& g = u.grid();
  std::vector<ArrivalSeed> seeds;
  for (Index k = 0; k < g.size(); ++k) {
    if (!region[k]) continue;
    const Index i = g.col(k), j = g.row(k);
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < g.dim(); ++a) {
      for (int step : {-1, 1}) {
        const Index nb = g.neighbor(i, j, a, step);
        if (nb == k || region[nb]) continue;
        const double uk = sign * u[k], un = sign * u[nb];
        const double s = uk / (uk - un);
        best = std::min(best, s * g.h() * slowness[k]);
      }
    }
    if (std::isfinite(best)) seeds.push_back({k, best});
  }
  if (seeds.empty()) return Eigen::ArrayXd::Constant(g.size(), kUnreached);
  Eigen::ArrayXd t = minimum_time(g, slowness, seeds, region, stencil);
  return t.isFinite().select(t, kUnreached);
}

}  // namespace

Representation::Representation(const ScalarField& u0, const VelocityModel& model, ArrivalOptions options)
    : grid_(u0.grid()) {
  const FrontTriple f = zero_level_set(u0);
  plus_ = f.d_plus;
  minus_ = f.d_minus;
  const Eigen::ArrayXd slow = slowness_field(grid_, model);
  t_plus_ = region_times(u0, plus_, slow, options.stencil, 1.0);
  t_minus_ = region_times(u0, minus_, slow, options.stencil, -1.0);
}

ScalarField Representation::at(double t) const {
  Eigen::ArrayXd v(grid_.size());
  for (Index k = 0; k < grid_.size(); ++k) {
    if (plus_[k]) v[k] = t_plus_[k] - t;
    else if (minus_[k]) v[k] = -t_minus_[k] - t;
    else v[k] = -t;
  }
  return ScalarField(grid_, std::move(v));
}

ScalarField represent_field(double t, const ScalarField& u0, const VelocityModel& model, ArrivalOptions options) {
  return Representation(u0, model, options).at(t);
}

namespace {

NoInteriorEntry measure(const Snapshot& s, double tol) {
  const double h = s.field.grid().h();
  NoInteriorEntry e;
  e.t = s.t;
  e.h = h;
  e.band_measure = interior_band_measure(s.field, tol > 0.0 ? tol : h);
  e.front_length = front_length(s.field);
  if (e.front_length > 0.0) e.ratio = e.band_measure / (h * e.front_length);
  else e.ratio = e.band_measure > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return e;
}

void finish(NoInteriorReport& r) {
  r.max_ratio = 0.0;
  for (const NoInteriorEntry& e : r.entries) r.max_ratio = std::max(r.max_ratio, e.ratio);
  r.no_fattening = r.max_ratio <= r.ratio_bound;
  r.verdict = r.no_fattening ? "no fattening detected" : "fattening detected";
}

}  // namespace

NoInteriorReport no_interior_check(std::span<const Snapshot> series, double tol, double ratio_bound) {
  if (series.empty()) throw ConfigError("no_interior_check: empty series");
  NoInteriorReport r;
  r.ratio_bound = ratio_bound;
  for (const Snapshot& s : series) r.entries.push_back(measure(s, tol));
  finish(r);
  return r;
}

NoInteriorReport no_interior_check(const std::vector<std::vector<Snapshot>>& resolutions, double tol_cells,
                                   double ratio_bound) {
  if (resolutions.empty()) throw ConfigError("no_interior_check: no resolutions");
  if (!(tol_cells > 0.0)) throw ConfigError("no_interior_check: tolerance must be positive");
  NoInteriorReport r;
  r.ratio_bound = ratio_bound;
  for (const auto& series : resolutions) {
    if (series.empty()) throw ConfigError("no_interior_check: empty series");
    for (const Snapshot& s : series) r.entries.push_back(measure(s, tol_cells * s.field.grid().h()));
  }
  finish(r);
  return r;
}

}  // namespace frontlim
