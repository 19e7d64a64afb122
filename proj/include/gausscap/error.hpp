#pragma once

#include <stdexcept>
#include <string>

namespace gausscap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix fails positivity or the uncertainty relation.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// A measured covariance matrix is invalid beyond the projection tolerance.
class InvalidMeasurement : public Error {
 public:
  using Error::Error;
};

/// An operation requires a classification or structure the input lacks.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotImplemented : public Error {
 public:
  using Error::Error;
};

/// An iterative solve did not converge, or a decomposition broke down.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Fock-space truncation lost more weight than the configured bound.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace gausscap
