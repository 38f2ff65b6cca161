#pragma once

#include <stdexcept>
#include <string>

namespace trajsmooth {

/// Bad user input: malformed files, invalid parameters. CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown: degenerate elements, solver failure, tracking
/// inconsistency. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trajsmooth
