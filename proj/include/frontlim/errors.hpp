#pragma once

#include <stdexcept>
#include <string>

namespace frontlim {

/// Invalid configuration or violated precondition (bad CFL, malformed experiment file,
/// model invariant failure). The CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver produced non-finite values or an integrator became unstable.
/// The CLI maps it to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frontlim
