#include "frontlim/field.hpp"
#include "frontlim/field_io.hpp"
#include "frontlim/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

using namespace frontlim;

namespace {

std::vector<Point> circle_points(double r, int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    pts.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return pts;
}

double brute_distance(const Point& x, const std::vector<Point>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : pts) best = std::min(best, (x - p).norm());
  return best;
}

// Deterministic point lattice on [-1, 1]^2 driven by the golden-ratio sequence.
std::vector<Point> weyl_points(int n, double shift) {
  const double a = 0.6180339887498949;
  const double b = 0.7548776662466927;
  std::vector<Point> pts;
  for (int i = 1; i <= n; ++i) {
    const double u = std::fmod(shift + a * i, 1.0);
    const double v = std::fmod(shift * 0.5 + b * i, 1.0);
    pts.emplace_back(2.0 * u - 1.0, 2.0 * v - 1.0);
  }
  return pts;
}

}  // namespace

TEST_CASE("grid layout and boundary neighbours") {
  const Grid g = Grid::square(-1.0, 1.0, 5, Boundary::Periodic);
  CHECK(g.h() == doctest::Approx(0.5));
  CHECK(g.size() == 25);
  CHECK(g.neighbor(0, 2, 0, -1) == g.index(4, 2));
  const Grid n = Grid::square(-1.0, 1.0, 5);
  CHECK(n.neighbor(0, 2, 0, -1) == n.index(1, 2));
  CHECK(n.neighbor(4, 4, 1, +1) == n.index(4, 3));
  CHECK_THROWS_AS(Grid::line(0.0, 1.0, -0.1), ConfigError);

  const Grid l = Grid::line(-0.5, 1.5, 0.03);
  CHECK(l.h() <= 0.03);
  CHECK(l.upper(0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("fields reject non-finite values") {
  const Grid g = Grid::line(0.0, 1.0, 0.25);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(g.size());
  v[2] = std::nan("");
  CHECK_THROWS_AS(ScalarField(g, v), NumericalError);
}

TEST_CASE("signed distance to a circle") {
  const Grid g = Grid::square(-2.0, 2.0, 161);
  const ScalarField d = signed_distance(g, [](const Point& x) { return x.norm() < 1.0; });
  double worst = 0.0;
  for (Index k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(d[k] - (1.0 - g.node(k).norm())));
  CHECK(worst <= 2.0 * g.h());
}

TEST_CASE("signed distance to a half-plane") {
  const Grid g = Grid::square(-2.0, 2.0, 81);
  const ScalarField d = signed_distance(g, [](const Point& x) { return x.x() < 0.0; });
  double worst = 0.0;
  for (Index k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(d[k] + g.node(k).x()));
  CHECK(worst <= 2.0 * g.h());
}

TEST_CASE("signed distance between two circles") {
  const Grid g = Grid::square(-2.0, 2.0, 161);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) {
    return std::max(0.5 - (x - Point(1, 0)).norm(), 0.5 - (x - Point(-1, 0)).norm());
  });
  const ScalarField d = signed_distance(f);
  const FrontTriple front = zero_level_set(f);
  const Index origin = g.nearest(Point::Zero());
  CHECK(std::abs(d[origin] + brute_distance(Point::Zero(), front.gamma)) <= 2.0 * g.h());
  CHECK(std::abs(d[origin] + 0.5) <= 2.0 * g.h());
}

TEST_CASE("signed distance needs both signs") {
  const Grid g = Grid::square(-1.0, 1.0, 11);
  CHECK_THROWS_WITH_AS(signed_distance(ScalarField(g, 1.0)), doctest::Contains("no interface"), ConfigError);
}

TEST_CASE("signed distance is 1-Lipschitz along grid edges") {
  const Grid g = Grid::square(-2.0, 2.0, 101);
  const ScalarField d = signed_distance(g, [](const Point& x) {
    return std::abs(x.x()) + 0.5 * std::abs(x.y()) < 1.0;
  });
  double worst = 0.0;
  for (Index j = 0; j < g.ny(); ++j) {
    for (Index i = 0; i + 1 < g.nx(); ++i) {
      worst = std::max(worst, std::abs(d(i + 1, j) - d(i, j)) / g.h());
      if (j + 1 < g.ny()) worst = std::max(worst, std::abs(d(i, j + 1) - d(i, j)) / g.h());
    }
  }
  CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("zero level set of a linear function in 1D") {
  const Grid g = Grid::line(-1.0, 1.0, 0.3);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) { return x.x(); });
  const FrontTriple t = zero_level_set(f);
  REQUIRE(t.gamma.size() == 1);
  CHECK(std::abs(t.gamma[0].x()) < 1e-14);
}

TEST_CASE("zero level set of a constant") {
  const Grid g = Grid::square(-1.0, 1.0, 9);
  const FrontTriple t = zero_level_set(ScalarField(g, 1.0));
  CHECK(t.empty());
  CHECK(t.d_plus.all());
  CHECK(t.d_minus.count() == 0);
}

TEST_CASE("zero level set of a cone is the unit circle") {
  const Grid g = Grid::square(-2.0, 2.0, 101);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) { return 1.0 - x.norm(); });
  const FrontTriple t = zero_level_set(f);
  REQUIRE_FALSE(t.empty());
  for (const Point& p : t.gamma) CHECK(std::abs(p.norm() - 1.0) <= g.h());
}

TEST_CASE("front triples are consistent") {
  const Grid g = Grid::square(-2.0, 2.0, 41);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) {
    return std::sin(3.0 * x.x()) * std::cos(2.0 * x.y()) + 0.1;
  });
  const FrontTriple t = zero_level_set(f);
  CHECK((t.d_plus && t.d_minus).count() == 0);
  // Every crossing sits on an axis edge whose endpoints straddle the level.
  for (const Point& p : t.gamma) {
    const Point s = (p - g.origin()) / g.h();
    const Index i = static_cast<Index>(std::floor(s.x() + 1e-12));
    const Index j = static_cast<Index>(std::floor(s.y() + 1e-12));
    const bool on_x = std::abs(s.y() - std::round(s.y())) < 1e-9;
    const Index i0 = on_x ? std::min(i, g.nx() - 2) : std::min(static_cast<Index>(std::round(s.x())), g.nx() - 1);
    const Index j0 = on_x ? std::min(static_cast<Index>(std::round(s.y())), g.ny() - 1) : std::min(j, g.ny() - 2);
    const double a = f(i0, j0);
    const double b = on_x ? f(i0 + 1, j0) : f(i0, j0 + 1);
    CHECK(std::min(a, b) <= 0.0);
    CHECK(std::max(a, b) >= 0.0);
  }
}

TEST_CASE("zero level set is invariant under increasing reparametrisation") {
  const Grid g = Grid::square(-2.0, 2.0, 61);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) { return 1.0 - x.norm() + 0.3 * x.x(); });
  const FrontTriple base = zero_level_set(f);
  for (auto psi : {+[](double v) { return v * v * v; }, +[](double v) { return std::tanh(4.0 * v); }}) {
    ScalarField h = f;
    h.values() = f.values().unaryExpr(psi);
    const FrontTriple t = zero_level_set(h);
    CHECK((t.d_plus == base.d_plus).all());
    CHECK((t.d_minus == base.d_minus).all());
    CHECK(hausdorff(t.gamma, base.gamma) <= g.h());
  }
}

TEST_CASE("hausdorff examples") {
  const std::vector<Point> a{Point(0, 0)};
  const std::vector<Point> b{Point(3, 0)};
  CHECK(hausdorff(a, b) == 3.0);
  const auto c = circle_points(1.0, 720);
  CHECK(hausdorff(c, c) == 0.0);
  CHECK(hausdorff(c, circle_points(1.1, 720)) == doctest::Approx(0.1).epsilon(0.01));
  CHECK_THROWS(hausdorff(a, std::vector<Point>{}));
}

TEST_CASE("hausdorff is a metric on lattice sets") {
  const auto a = weyl_points(300, 0.1);
  const auto b = weyl_points(500, 0.37);
  const auto c = weyl_points(200, 0.8);
  CHECK(hausdorff(a, b) == hausdorff(b, a));
  CHECK(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-15);
  CHECK(hausdorff(a, a) == 0.0);
}

TEST_CASE("hausdorff agrees across the brute-force and bucketed regimes") {
  const auto a = weyl_points(6000, 0.2);
  const auto b = weyl_points(7000, 0.55);
  double forward = 0.0, backward = 0.0;
  for (const Point& p : a) forward = std::max(forward, brute_distance(p, b));
  for (const Point& p : b) backward = std::max(backward, brute_distance(p, a));
  CHECK(hausdorff(a, b) == std::max(forward, backward));
}

TEST_CASE("interior band measure") {
  const Grid l = Grid::line(-1.0, 1.0, 0.01);
  const ScalarField x = ScalarField::sample(l, [](const Point& p) { return p.x(); });
  const double line_band = interior_band_measure(x, l.h());
  CHECK(line_band >= l.h());
  CHECK(line_band <= 3.0 * l.h());
  CHECK(interior_band_measure(x, 1.5 * l.h()) == doctest::Approx(3.0 * l.h()));

  const Grid g = Grid::square(-2.0, 2.0, 201);
  CHECK(interior_band_measure(ScalarField(g, 0.0), g.h()) == doctest::Approx(g.size() * g.cell_measure()));

  const ScalarField cone = ScalarField::sample(g, [](const Point& p) { return 1.0 - p.norm(); });
  const double annulus = 2.0 * std::numbers::pi * 2.0 * g.h();
  const double m = interior_band_measure(cone, g.h());
  CHECK(m >= annulus / 2.0);
  CHECK(m <= annulus * 2.0);

  double previous = 0.0;
  for (double tol : {0.001, 0.01, 0.05, 0.2, 1.0}) {
    const double next = interior_band_measure(cone, tol);
    CHECK(next >= previous);
    previous = next;
  }
}

TEST_CASE("front length of a circle") {
  const Grid g = Grid::square(-2.0, 2.0, 201);
  const ScalarField cone = ScalarField::sample(g, [](const Point& p) { return 1.0 - p.norm(); });
  CHECK(front_length(cone) == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("distance to points") {
  const Grid g = Grid::square(-1.0, 1.0, 21);
  const std::vector<Point> pts{Point(0.05, 0.0), Point(-0.5, 0.5)};
  const Eigen::ArrayXd d = distance_to_points(g, pts);
  double worst = 0.0;
  for (Index k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(d[k] - brute_distance(g.node(k), pts)));
  CHECK(worst <= g.h());
  CHECK(std::isinf(distance_to_points(g, std::vector<Point>{})[0]));
}

TEST_CASE("field text round trip is exact") {
  const Grid g = Grid::square(-1.0, 2.0, 7);
  const ScalarField f = ScalarField::sample(g, [](const Point& p) { return std::exp(p.x()) / 3.0 - p.y() * 1e-7; });
  std::stringstream ss;
  write_field(ss, f);
  const ScalarField back = read_field(ss);
  CHECK(back.grid().same_layout(g));
  CHECK((back.values() == f.values()).all());

  std::stringstream bad("frontlim-field v1 dim=1 extents=3 origin=0 h=0.5\n1 2\n");
  CHECK_THROWS(read_field(bad));
}
