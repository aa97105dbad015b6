#include "frontlim/model.hpp"

#include "frontlim/errors.hpp"
#include "frontlim/field_io.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace frontlim {

Interface Interface::hyperplane(Point normal, double offset) {
  const double n = normal.norm();
  if (!(n > 0.0)) throw ConfigError("hyperplane normal must be nonzero");
  Interface s;
  s.kind_ = Kind::Hyperplane;
  s.a_ = normal / n;
  s.b_ = offset / n;
  return s;
}

Interface Interface::circle(Point centre, double radius) {
  if (!(radius > 0.0)) throw ConfigError("circle radius must be positive");
  Interface s;
  s.kind_ = Kind::Circle;
  s.a_ = centre;
  s.b_ = radius;
  return s;
}

double Interface::signed_distance(const Point& x) const {
  if (kind_ == Kind::Hyperplane) return x.dot(a_) - b_;
  return (x - a_).norm() - b_;
}

std::string Interface::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::Hyperplane) {
    os << "hyperplane normal=" << format_double(a_.x()) << ',' << format_double(a_.y())
       << " offset=" << format_double(b_);
  } else {
    os << "circle centre=" << format_double(a_.x()) << ',' << format_double(a_.y())
       << " radius=" << format_double(b_);
  }
  return os.str();
}

std::string to_string(Scaling s) { return s == Scaling::One ? "one" : "two"; }

Scaling scaling_from_string(const std::string& s) {
  if (s == "one" || s == "1") return Scaling::One;
  if (s == "two" || s == "2") return Scaling::Two;
  throw ConfigError("unknown scaling '" + s + "' (expected one|two)");
}

double front_speed(const Point& x, const BistableModel& model) {
  const VelocityModel& v = model.velocity;
  return blended_speed(v.n1(x), v.n2(x), v.dtilde(x), model.transition_width());
}

double c_eps(const Point& x, const BistableModel& model) {
  const double c = front_speed(x, model);
  return model.scaling == Scaling::Two ? model.epsilon * c : c;
}

Envelope alpha_envelopes(const Point& x, const VelocityModel& model, double snap) {
  const double d = model.dtilde(x);
  const double n1 = model.n1(x);
  const double n2 = model.n2(x);
  if (std::abs(d) <= snap) return {n1, n2};
  return d < 0.0 ? Envelope{n1, n1} : Envelope{n2, n2};
}

OneSided one_sided_velocities(const Point& x, const BistableModel& model) {
  const double eps = model.epsilon;
  const double d = model.velocity.dtilde(x);
  const double c = front_speed(x, model);
  const double eta = smoothstep((d + 2.0 * eps) / eps);
  const double xi = smoothstep((2.0 * eps - d) / eps);
  const double n1 = model.velocity.n1(x);
  const double n2 = model.velocity.n2(x);
  return {xi * n1 + (1.0 - xi) * c, eta * n2 + (1.0 - eta) * c};
}

double f_eps(double q, const Point& x, const BistableModel& model) {
  return bistable_cubic(q, c_eps(x, model));
}

double f_eps_dq(double q, const Point& x, const BistableModel& model) {
  return bistable_cubic_dq(q, c_eps(x, model));
}

double traveling_wave(double r, const Point& x, const BistableModel& model) {
  return std::tanh(r + wave_shift(c_eps(x, model)));
}

double wave_slope(double r, const Point& x, const BistableModel& model) {
  const double q = traveling_wave(r, x, model);
  return 1.0 - q * q;
}

double wave_residual(const Point& x, const BistableModel& model, std::span<const double> r_samples) {
  const double c = c_eps(x, model);
  const double shift = wave_shift(c);
  double worst = 0.0;
  for (double r : r_samples) {
    const double q = std::tanh(r + shift);
    const double qr = 1.0 - q * q;
    const double qrr = -2.0 * q * qr;
    worst = std::max(worst, std::abs(qrr + c * qr - bistable_cubic(q, c)));
  }
  return worst;
}

double wave_residual_fd(const Point& x, const BistableModel& model, std::span<const double> r_samples,
                        double step) {
  const double c = c_eps(x, model);
  const double shift = wave_shift(c);
  auto q = [&](double r) { return std::tanh(r + shift); };
  double worst = 0.0;
  for (double r : r_samples) {
    const double qm = q(r - step);
    const double q0 = q(r);
    const double qp = q(r + step);
    const double qr = (qp - qm) / (2.0 * step);
    const double qrr = (qp - 2.0 * q0 + qm) / (step * step);
    worst = std::max(worst, std::abs(qrr + c * qr - bistable_cubic(q0, c)));
  }
  return worst;
}

double reaction_lipschitz(const BistableModel& model, std::span<const Point> samples) {
  double cmin = std::numeric_limits<double>::infinity();
  double cmax = -cmin;
  for (const Point& x : samples) {
    const double c = c_eps(x, model);
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  double lip = 0.0;
  for (double c : {cmin, cmax}) {
    for (int i = 0; i <= 200; ++i) {
      const double q = -1.0 + 0.01 * i;
      lip = std::max(lip, std::abs(bistable_cubic_dq(q, c)));
    }
  }
  return lip;
}

bool AssumptionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

const AssumptionCheck* AssumptionReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

/// Tracks the smallest slack of an inequality "slack >= 0" (or > 0).
struct SlackTracker {
  std::string name;
  bool strict;
  double worst = std::numeric_limits<double>::infinity();
  Point where = Point::Zero();

  void offer(double slack, const Point& x) {
    if (slack < worst) {
      worst = slack;
      where = x;
    }
  }
  AssumptionCheck finish() const {
    AssumptionCheck c;
    c.name = name;
    c.worst_value = worst;
    c.worst_point = where;
    c.passed = strict ? worst > 0.0 : worst >= 0.0;
    c.detail = "minimum slack " + format_double(worst);
    return c;
  }
};

}  // namespace

AssumptionReport validate_assumptions(const BistableModel& model, std::span<const Point> samples,
                                      double snap) {
  const VelocityModel& v = model.velocity;
  const double rho = v.rho;
  const bool two = model.scaling == Scaling::Two;
  AssumptionReport report;

  {
    AssumptionCheck c;
    c.name = "0 < rho < 1/2";
    c.passed = rho > 0.0 && rho < 0.5;
    c.worst_value = rho;
    c.detail = "rho = " + format_double(rho);
    report.checks.push_back(c);
  }
  {
    AssumptionCheck c;
    c.name = "epsilon > 0";
    c.passed = model.epsilon > 0.0;
    c.worst_value = model.epsilon;
    report.checks.push_back(c);
  }
  {
    AssumptionCheck c;
    c.name = two ? "0 <= k < 1" : "0 <= k <= 1/2";
    c.passed = v.k >= 0.0 && (two ? v.k < 1.0 : v.k <= 0.5);
    c.worst_value = v.k;
    report.checks.push_back(c);
  }

  SlackTracker lower{"2 rho <= n1", false};
  SlackTracker order{"n1 < n2", true};
  SlackTracker upper{"n2 <= 2 (1 - rho)", false};
  SlackTracker speed{two ? "n1 <= c_eps/eps <= n2" : "n1 <= c_eps <= n2", false};
  SlackTracker root_lo{two ? "0 < m_o" : "rho <= m_o", two};
  SlackTracker root_hi{"m_o <= 1 - rho", false};
  SlackTracker monotone{"wave monotone q_r > 0", true};
  SlackTracker envelope{"c_lower <= alpha_* <= alpha^* <= c_upper", false};
  SlackTracker chain{"n1 <= c_lower <= c <= c_upper <= n2", false};
  SlackTracker stable{"f_q(+-1) > 0", true};
  double grad_max = 0.0;
  Point grad_where = Point::Zero();
  const double width = model.transition_width();
  const double fd = 1e-4 * std::max(width, 1e-8);

  for (const Point& x : samples) {
    const double n1 = v.n1(x);
    const double n2 = v.n2(x);
    const double c = front_speed(x, model);
    const double ce = c_eps(x, model);
    const double m = ce / 2.0;
    lower.offer(n1 - 2.0 * rho, x);
    order.offer(n2 - n1, x);
    upper.offer(2.0 * (1.0 - rho) - n2, x);
    speed.offer(std::min(c - n1, n2 - c), x);
    root_lo.offer(two ? m : m - rho, x);
    root_hi.offer(1.0 - rho - m, x);
    for (int i = -30; i <= 30; ++i) {
      const double r = 0.1 * i;
      const double q = std::tanh(r + wave_shift(ce));
      monotone.offer(1.0 - q * q, x);
    }
    const Envelope env = alpha_envelopes(x, v, snap);
    const OneSided os = one_sided_velocities(x, model);
    envelope.offer(std::min({env.lower - os.c_lower, env.upper - env.lower, os.c_upper - env.upper}), x);
    chain.offer(std::min({os.c_lower - n1, c - os.c_lower, os.c_upper - c, n2 - os.c_upper}), x);
    stable.offer(std::min(bistable_cubic_dq(1.0, ce), bistable_cubic_dq(-1.0, ce)), x);
    for (int a = 0; a < 2; ++a) {
      Point e = Point::Zero();
      e[a] = fd;
      const double g = std::abs(front_speed(x + e, model) - front_speed(x - e, model)) / (2.0 * fd);
      if (g > grad_max) {
        grad_max = g;
        grad_where = x;
      }
    }
  }

  for (const SlackTracker* t : {&lower, &order, &upper, &speed, &root_lo, &root_hi, &monotone, &envelope,
                                &chain, &stable}) {
    report.checks.push_back(t->finish());
  }
  AssumptionCheck growth;
  growth.name = "speed gradient growth";
  growth.informational = true;
  growth.worst_value = grad_max;
  growth.worst_point = grad_where;
  growth.detail = "max|D(c/eps^s)| = " + format_double(grad_max) + ", times eps^k = " +
                  format_double(grad_max * width);
  report.checks.push_back(growth);
  return report;
}

AssumptionReport validate_assumptions(const BistableModel& model, const Grid& grid) {
  std::vector<Point> samples;
  samples.reserve(static_cast<std::size_t>(grid.size()));
  for (Index k = 0; k < grid.size(); ++k) samples.push_back(grid.node(k));
  return validate_assumptions(model, samples, grid.h() / 2.0);
}

}  // namespace frontlim
