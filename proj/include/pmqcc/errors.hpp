#pragma once

#include <stdexcept>
#include <string>

namespace pmqcc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Work requested exceeds a configured budget (e.g. yield enumeration cap).
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Decoy intensities too close or too few for the elimination ladder to be trusted.
class DegenerateGeometryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InsufficientDecoysError : public std::runtime_error {
  public:
    InsufficientDecoysError() : std::runtime_error("insufficient decoy intensities") {}
    using std::runtime_error::runtime_error;
};

/// Quantity cannot be estimated from the available counts or denominators vanish.
class InsufficientDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration (bad ranges, unknown keys, malformed files).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace pmqcc
