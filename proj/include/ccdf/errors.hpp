#ifndef CCDF_ERRORS_HPP
#define CCDF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccdf {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad order, grid, alpha, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Bandwidth outside (0, 1).
class InvalidBandwidth : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The local design at x is (numerically) singular: empty window or a
/// denominator below the configured tolerance.
class InsufficientLocalData : public Error {
 public:
  using Error::Error;
};

/// No jump point of a cdf curve reaches the requested level.
class NoCrossing : public Error {
 public:
  using Error::Error;
};

/// A response lies outside the declared support interval.
class YRangeViolation : public Error {
 public:
  using Error::Error;
};

/// Joint density at the quantile is (numerically) zero; quantile band undefined.
class ZeroJointDensity : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV content; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ccdf

#endif  // CCDF_ERRORS_HPP
