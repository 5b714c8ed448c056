#pragma once

#include <stdexcept>
#include <string>

namespace superkilling {

/// Base class for all kernel errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two values that must live on the same chart do not.
struct ChartMismatchError : Error {
  using Error::Error;
};

/// A parity precondition was violated (odd where even is required, etc.).
struct ParityError : Error {
  using Error::Error;
};

/// Division by a structurally zero element, or inversion of a
/// non-invertible one (zero body).
struct DivisionByZeroError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  using Error::Error;
};

struct InvalidArgumentError : Error {
  using Error::Error;
};

/// Numeric evaluation could not produce a usable sample (poles, NaNs).
struct SamplingError : Error {
  using Error::Error;
};

/// A symbolic verdict and its numeric re-verification disagree. This is
/// never resolved silently; it aborts the enclosing check with a distinct
/// exit status.
struct DisagreementError : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : Error(msg), line(line_), column(column_) {}
};

}  // namespace superkilling
