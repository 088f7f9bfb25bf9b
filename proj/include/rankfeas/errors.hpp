#pragma once

#include <stdexcept>
#include <string>

namespace rankfeas {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter outside its admissible range (rank bound, sample count, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operands with incompatible shapes.
class DimensionError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// An operation was called on an input that violates its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-finite values or a factorization missing its contract.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  explicit NumericalError(const std::string& what) : NumericalError(what, 0.0) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A ray along which no point of the constraint set was found.
class NoIntersectionError : public Error {
 public:
  using Error::Error;
};

/// Rate-bound hypotheses violated (e.g. inexactness budget too large for the angle).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Too few usable points to fit a rate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration / input files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rankfeas
