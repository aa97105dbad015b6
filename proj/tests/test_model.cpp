#include "frontlim/model.hpp"
#include "setups.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace frontlim;

namespace {

BistableModel standard(double eps = 0.05) {
  BistableModel m;
  m.velocity.n1 = Expression(1.0);
  m.velocity.n2 = Expression(1.5);
  m.velocity.k = 0.25;
  m.epsilon = eps;
  return m;
}

Point at_distance(double d) { return Point(d, 0.3); }

std::vector<Point> line_samples(double lo, double hi, int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(lo + (hi - lo) * i / (n - 1), 0.0);
  return pts;
}

}  // namespace

TEST_CASE("c_eps on and near the interface") {
  const BistableModel m = standard();
  const double w = m.transition_width();
  CHECK(c_eps(at_distance(0.0), m) == doctest::Approx(1.25));
  CHECK(std::abs(c_eps(at_distance(10.0 * w), m) - 1.5) < 1e-8);
  CHECK(c_eps(at_distance(w), m) == doctest::Approx(1.440398538988941).epsilon(1e-14));
}

TEST_CASE("c_eps stays strictly between n1 and n2") {
  for (Scaling s : {Scaling::One, Scaling::Two}) {
    BistableModel m = standard(0.1);
    m.scaling = s;
    const double unit = s == Scaling::Two ? m.epsilon : 1.0;
    for (const Point& x : line_samples(-1.0, 1.0, 41)) {
      const double c = c_eps(x, m);
      CHECK(c > unit * 1.0);
      CHECK(c < unit * 1.5);
      CHECK(front_speed(x, m) == doctest::Approx(c / unit));
    }
  }
}

TEST_CASE("c_eps error halves with the transition width") {
  // k = 1/2: each epsilon is a quarter of the previous one, so eps^k halves.
  // Both points keep |dtilde| >= eps^k / 2 over the whole ladder.
  for (const Point& x : {at_distance(0.2), at_distance(-0.15)}) {
    const double target = x.x() > 0.0 ? 1.5 : 1.0;
    double previous = -1.0;
    for (double eps : {0.08, 0.02, 0.005, 0.00125}) {
      BistableModel m = standard(eps);
      m.velocity.k = 0.5;
      const double err = std::abs(c_eps(x, m) - target);
      if (previous >= 0.0) CHECK(err <= previous / 2.0);
      previous = err;
    }
  }
}

TEST_CASE("alpha envelopes") {
  const VelocityModel v = setups::refraction(1.0, 2.0, 0.25);
  const Envelope left = alpha_envelopes(at_distance(-1.0), v, 0.0);
  CHECK(left.lower == 1.0);
  CHECK(left.upper == 1.0);
  const Envelope on = alpha_envelopes(at_distance(0.0), v, 0.0);
  CHECK(on.lower == 1.0);
  CHECK(on.upper == 2.0);
  const Envelope right = alpha_envelopes(at_distance(0.3), v, 0.0);
  CHECK(right.lower == 2.0);
  CHECK(right.upper == 2.0);
  const Envelope snapped = alpha_envelopes(at_distance(0.01), v, 0.02);
  CHECK(snapped.lower == 1.0);
  CHECK(snapped.upper == 2.0);
}

TEST_CASE("one-sided velocities evaluate the cutoffs") {
  BistableModel m = standard(0.05);
  m.velocity = setups::refraction(1.0, 2.0, 0.25);
  const double eps = m.epsilon;

  const Point left = at_distance(-3.0 * eps);
  const OneSided a = one_sided_velocities(left, m);
  CHECK(a.c_lower == doctest::Approx(1.0));
  CHECK(a.c_upper == doctest::Approx(c_eps(left, m)));

  const OneSided b = one_sided_velocities(at_distance(0.0), m);
  CHECK(b.c_lower == doctest::Approx(1.0));
  CHECK(b.c_upper == doctest::Approx(2.0));

  const Point right = at_distance(3.0 * eps);
  const OneSided c = one_sided_velocities(right, m);
  CHECK(c.c_lower == doctest::Approx(c_eps(right, m)));
  CHECK(c.c_upper == doctest::Approx(2.0));
}

TEST_CASE("one-sided velocities bracket the envelopes") {
  BistableModel m = standard(0.05);
  m.velocity = setups::refraction(1.0, 2.0, 0.25);
  for (const Point& x : line_samples(-0.5, 0.5, 101)) {
    const OneSided os = one_sided_velocities(x, m);
    const Envelope env = alpha_envelopes(x, m.velocity, 0.0);
    CHECK(os.c_lower <= env.lower + 1e-12);
    CHECK(env.upper <= os.c_upper + 1e-12);
    CHECK(os.c_lower <= front_speed(x, m) + 1e-12);
    CHECK(front_speed(x, m) <= os.c_upper + 1e-12);
  }
}

TEST_CASE("bistable cubic values") {
  BistableModel m = standard();
  const Point x = at_distance(0.4);
  const double c = c_eps(x, m);
  CHECK(f_eps(1.0, x, m) == 0.0);
  CHECK(f_eps(-1.0, x, m) == 0.0);
  CHECK(f_eps(c / 2.0, x, m) == doctest::Approx(0.0));
  CHECK(bistable_cubic(0.0, 1.0) == 1.0);
  CHECK(bistable_cubic(2.0, 1.0) == 9.0);
  CHECK(f_eps_dq(0.3, x, m) == doctest::Approx(bistable_cubic_dq(0.3, c)));
}

TEST_CASE("stable roots are attracting") {
  for (const Point& x : line_samples(-1.0, 1.0, 21)) {
    const BistableModel m = standard(0.1);
    CHECK(f_eps_dq(1.0, x, m) > 0.0);
    CHECK(f_eps_dq(-1.0, x, m) > 0.0);
  }
}

TEST_CASE("traveling wave profile") {
  const BistableModel m = standard();
  const Point x = at_distance(0.1);
  CHECK(traveling_wave(40.0, x, m) == doctest::Approx(1.0));
  CHECK(traveling_wave(-40.0, x, m) == doctest::Approx(-1.0));
  CHECK(traveling_wave(0.0, x, m) == doctest::Approx(c_eps(x, m) / 2.0).epsilon(1e-14));
  BistableModel still = standard();
  still.velocity.n1 = Expression(0.0);
  still.velocity.n2 = Expression(0.0);
  CHECK(traveling_wave(1.0, x, still) == doctest::Approx(0.7615941559557649).epsilon(1e-15));
  const double q = traveling_wave(0.7, x, m);
  CHECK(wave_slope(0.7, x, m) == doctest::Approx(1.0 - q * q));
}

TEST_CASE("wave residual") {
  const BistableModel m = standard();
  std::vector<double> r;
  for (int i = -50; i <= 50; ++i) r.push_back(0.1 * i);
  for (const Point& x : line_samples(-0.5, 0.5, 11)) {
    CHECK(wave_residual(x, m, r) < 1e-12);
    const double fd = wave_residual_fd(x, m, r, 1e-3);
    CHECK(fd < 1e-5);
    CHECK(fd > 1e-9);
  }
  // The symmetric wave is odd, so every term vanishes at r = 0.
  BistableModel sym = standard();
  sym.velocity.n1 = Expression(0.0);
  sym.velocity.n2 = Expression(0.0);
  const std::vector<double> zero{0.0};
  CHECK(wave_residual(Point(0.2, 0.0), sym, zero) == 0.0);
}

TEST_CASE("assumption validator") {
  const Grid g = Grid::square(-1.0, 1.0, 21);
  BistableModel m = standard();
  m.velocity.rho = 0.25;
  for (double eps : {0.2, 0.05, 0.01}) {
    m.epsilon = eps;
    const AssumptionReport r = validate_assumptions(m, g);
    CHECK(r.all_passed());
  }

  BistableModel low = m;
  low.velocity.n1 = Expression(0.1);
  const AssumptionReport rl = validate_assumptions(low, g);
  REQUIRE(rl.find("2 rho <= n1") != nullptr);
  CHECK_FALSE(rl.find("2 rho <= n1")->passed);
  CHECK_FALSE(rl.all_passed());

  BistableModel equal = m;
  equal.velocity.n2 = Expression(1.0);
  const AssumptionReport re = validate_assumptions(equal, g);
  REQUIRE(re.find("n1 < n2") != nullptr);
  CHECK_FALSE(re.find("n1 < n2")->passed);

  BistableModel steep = m;
  steep.velocity.k = 0.75;
  CHECK_FALSE(validate_assumptions(steep, g).find("0 <= k <= 1/2")->passed);
  steep.scaling = Scaling::Two;
  CHECK(validate_assumptions(steep, g).find("0 <= k < 1")->passed);
}

TEST_CASE("model expressions and interfaces") {
  const Expression e = Expression::parse("1 + 0.1 * tanh(x2) - min(x, |x|)");
  const Point p(-0.5, 2.0);
  CHECK(e(p) == doctest::Approx(1.0 + 0.1 * std::tanh(2.0) + 0.5));
  CHECK(Expression::parse("2.5").is_constant());
  CHECK_THROWS(Expression::parse("1 +"));
  CHECK_THROWS(Expression::parse("sin(x)"));

  const Interface c = Interface::circle(Point(1.0, 0.0), 0.5);
  CHECK(c.signed_distance(Point(1.0, 0.0)) == doctest::Approx(-0.5));
  CHECK(c.signed_distance(Point(2.0, 0.0)) == doctest::Approx(0.5));
  const Interface h = Interface::hyperplane(Point(3.0, 4.0), 1.0);
  CHECK(h.signed_distance(Point(0.12, 0.16)) == doctest::Approx(0.0));
}
