// Error taxonomy shared by all components.
#pragma once

#include <stdexcept>
#include <string>

namespace stefanlab {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched grids, incompatible trajectory shapes, malformed objects.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// Out-of-range or inconsistent caller-supplied values.
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// A numerical routine failed to reach its tolerance (linear solves, quadrature).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Newton/Picard iteration exhausted its budget.
class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& what, int step, double residual)
      : NumericalError(what), step(step), residual(residual) {}
  int step;
  double residual;
};

/// Grid too coarse for a construction that needs resolved microstructure.
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// File reading/writing problems.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace stefanlab
