#pragma once

#include <stdexcept>
#include <string>

namespace gplap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested size does not fit the index types used by GasketLevel.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Length or level mismatch between a function and the graph it lives on.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on the inputs does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant of a domain type does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Input that is excluded by definition (e.g. the zero function on the
/// Nehari set).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// No admissible root of the fibering derivative for the requested branch.
class ProjectionUnavailable : public Error {
 public:
  using Error::Error;
};

/// Minimization on a Nehari branch found no admissible direction.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gplap
