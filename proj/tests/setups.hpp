// Experiment setups shared by the acceptance driver and the unit tests. The
// bundled files in configs/ describe the same runs for the command line.
#pragma once

#include "frontlim/arrival.hpp"
#include "frontlim/hj.hpp"
#include "frontlim/limits.hpp"
#include "frontlim/model.hpp"
#include "frontlim/rd.hpp"

#include <cmath>

namespace frontlim::setups {

/// Speed c everywhere on the box: the interface sits far outside it, so the
/// blended speed equals n1 = c to round-off.
inline VelocityModel constant_speed(double c, double rho = 0.05) {
  VelocityModel m;
  m.n1 = Expression(c);
  m.n2 = Expression(2.0 * c);
  m.rho = rho;
  m.interface = Interface::hyperplane(Point(1.0, 0.0), 50.0);
  return m;
}

/// n1 left of {x = 0}, n2 right of it.
inline VelocityModel refraction(double n1, double n2, double k, double rho = 0.05) {
  VelocityModel m;
  m.n1 = Expression(n1);
  m.n2 = Expression(n2);
  m.rho = rho;
  m.k = k;
  m.interface = Interface::hyperplane(Point(1.0, 0.0), 0.0);
  return m;
}

/// Refraction model used by the singular-limit and bracket runs.
inline VelocityModel refraction_rd() { return refraction(0.95, 1.9, 0.5); }

/// Unit disc, positive inside.
inline ScalarField disc(const Grid& g, double radius = 1.0) {
  return ScalarField::sample(g, [&](const Point& x) { return radius - x.norm(); });
}

/// Radial deviation of a zero set from a circle of radius r about the origin.
inline double radius_error(const std::vector<Point>& gamma, double r) {
  double worst = 0.0;
  for (const Point& p : gamma) worst = std::max(worst, std::abs(p.norm() - r));
  return gamma.empty() ? std::numeric_limits<double>::infinity() : worst;
}

}  // namespace frontlim::setups
