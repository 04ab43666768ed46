#pragma once

#include <stdexcept>
#include <string>

namespace psam {

// Quadrature or an iterative solver failed to reach its tolerance.
// Raised instead of returning a silently wrong value.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user-supplied configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Combination of options with no analytic path (callers are pointed at the
// numerical oracle instead).
class UnsupportedError : public std::invalid_argument {
  public:
    explicit UnsupportedError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Output could not be written.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace psam
