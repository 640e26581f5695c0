#pragma once

#include <stdexcept>
#include <string>

namespace geoinvex {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector handed to an operation is not tangent at its base point.
class TangencyViolation : public Error {
 public:
  using Error::Error;
};

/// A point (input or result) lies outside the chart of its manifold,
/// e.g. outside the spherical cap.
class OutOfChart : public Error {
 public:
  using Error::Error;
};

/// Two operands belong to different manifolds / charts.
class ChartMismatch : public Error {
 public:
  using Error::Error;
};

/// Numerical drift of a point or tangent vector exceeded the re-projection
/// threshold.
class InvariantDrift : public Error {
 public:
  using Error::Error;
};

class NonDifferentiable : public Error {
 public:
  using Error::Error;
};

/// A descriptor is malformed or used outside the chart it supports.
class DescriptorError : public Error {
 public:
  using Error::Error;
};

class EmptyNeighborhood : public Error {
 public:
  using Error::Error;
};

class InfeasibleStart : public Error {
 public:
  using Error::Error;
};

/// A theorem harness was invoked on an instance that does not meet the
/// theorem's structural premises (e.g. a non-Hadamard manifold).
class PremiseFailure : public Error {
 public:
  using Error::Error;
};

/// Scenario file problems; `where` names the offending field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(where) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace geoinvex
