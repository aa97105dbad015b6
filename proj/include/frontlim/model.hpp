#pragma once

#include "frontlim/expr.hpp"
#include "frontlim/grid.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace frontlim {

// ---------------------------------------------------------------------------
// Scalar kernels. Templated on the scalar type so they work equally on
// doubles and on Eigen array expressions evaluated coefficient-wise.
// ---------------------------------------------------------------------------

/// Bistable cubic 2 (q - c/2)(q^2 - 1) with zeros -1, c/2, 1.
template <typename Scalar>
Scalar bistable_cubic(Scalar q, Scalar c) {
  return Scalar(2) * (q - c / Scalar(2)) * (q * q - Scalar(1));
}

/// d/dq of bistable_cubic.
template <typename Scalar>
Scalar bistable_cubic_dq(Scalar q, Scalar c) {
  return Scalar(6) * q * q - Scalar(2) * c * q - Scalar(2);
}

/// Smooth transition n1 -> n2 across a signed distance d with width w.
template <typename Scalar>
Scalar blended_speed(Scalar n1, Scalar n2, Scalar d, Scalar width) {
  const Scalar s = std::tanh(d / width);
  return n1 / Scalar(2) * (Scalar(1) - s) + n2 / Scalar(2) * (Scalar(1) + s);
}

/// Phase shift of the tanh wave so that it passes through c/2 at r = 0:
/// (1/2) ln((2 + c)/(2 - c)), i.e. atanh(c/2).
template <typename Scalar>
Scalar wave_shift(Scalar c) {
  return std::atanh(c / Scalar(2));
}

/// Clamped cubic smoothstep 3t^2 - 2t^3.
template <typename Scalar>
Scalar smoothstep(Scalar t) {
  const Scalar u = t < Scalar(0) ? Scalar(0) : (t > Scalar(1) ? Scalar(1) : t);
  return u * u * (Scalar(3) - Scalar(2) * u);
}

// ---------------------------------------------------------------------------
// Model data
// ---------------------------------------------------------------------------

/// The discontinuity hypersurface, given through a signed distance that is
/// positive on the n2 side.
class Interface {
 public:
  enum class Kind { Hyperplane, Circle };

  /// {x : x . normal = offset}; positive where x . normal > offset.
  static Interface hyperplane(Point normal, double offset);
  /// {x : |x - centre| = radius}; positive outside.
  static Interface circle(Point centre, double radius);

  double signed_distance(const Point& x) const;
  Kind kind() const { return kind_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::Hyperplane;
  Point a_ = Point(1.0, 0.0);
  double b_ = 0.0;
};

struct VelocityModel {
  Expression n1 = Expression(1.0);
  Expression n2 = Expression(1.5);
  double rho = 0.05;
  Interface interface = Interface::hyperplane(Point(1.0, 0.0), 0.0);
  double k = 0.25;

  double dtilde(const Point& x) const { return interface.signed_distance(x); }
};

enum class Scaling { One, Two };

std::string to_string(Scaling s);
Scaling scaling_from_string(const std::string& s);

struct BistableModel {
  VelocityModel velocity;
  double epsilon = 0.05;
  Scaling scaling = Scaling::One;

  /// Width of the smooth speed transition, epsilon^k.
  double transition_width() const { return std::pow(epsilon, velocity.k); }
};

struct Envelope {
  double lower;
  double upper;
};

struct OneSided {
  double c_lower;
  double c_upper;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Traveling-wave velocity at x. Under scaling two this is epsilon times the
/// blended speed, so c_eps / epsilon stays within [n1, n2].
double c_eps(const Point& x, const BistableModel& model);

/// The blended speed in front-speed units: c_eps for scaling one and
/// c_eps / epsilon for scaling two.
double front_speed(const Point& x, const BistableModel& model);

/// Unstable zero m_o = c_eps / 2.
inline double unstable_root(const Point& x, const BistableModel& model) {
  return c_eps(x, model) / 2.0;
}

/// Lower and upper semicontinuous envelopes of the discontinuous limit speed.
/// Points within `snap` of the interface count as lying on it.
Envelope alpha_envelopes(const Point& x, const VelocityModel& model, double snap);

/// One-sided continuous speeds (c_lower, c_upper) in front-speed units:
/// c_upper = eta n2 + (1 - eta) c, c_lower = xi n1 + (1 - xi) c, with eta = 1
/// on {dtilde >= -eps}, 0 on {dtilde <= -2 eps}; xi = 1 on {dtilde <= eps},
/// 0 on {dtilde >= 2 eps}, smoothstep in between.
OneSided one_sided_velocities(const Point& x, const BistableModel& model);

double f_eps(double q, const Point& x, const BistableModel& model);
double f_eps_dq(double q, const Point& x, const BistableModel& model);

/// q(r, x) = tanh(r + atanh(c_eps(x)/2)).
double traveling_wave(double r, const Point& x, const BistableModel& model);
/// q_r = 1 - q^2.
double wave_slope(double r, const Point& x, const BistableModel& model);

/// max_r |q_rr + c q_r - f(q)| with exact tanh derivatives.
double wave_residual(const Point& x, const BistableModel& model, std::span<const double> r_samples);
/// Same residual with centred finite differences of step `step`.
double wave_residual_fd(const Point& x, const BistableModel& model, std::span<const double> r_samples,
                        double step);

/// Lipschitz bound of f_eps(., x) on [-1, 1]: max |f_q| over a q-lattice and
/// the given sample points.
double reaction_lipschitz(const BistableModel& model, std::span<const Point> samples);

struct AssumptionCheck {
  std::string name;
  bool passed = true;
  /// Informational entries report measurements and never fail.
  bool informational = false;
  double worst_value = 0.0;
  Point worst_point = Point::Zero();
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;

  bool all_passed() const;
  const AssumptionCheck* find(const std::string& name) const;
};

/// Evaluates the structure inequalities on the sample points. Failures are
/// report entries, never exceptions.
AssumptionReport validate_assumptions(const BistableModel& model, std::span<const Point> samples,
                                      double snap = 0.0);
AssumptionReport validate_assumptions(const BistableModel& model, const Grid& grid);

}  // namespace frontlim
