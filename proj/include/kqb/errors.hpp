#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kqb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonHermitianInput : public Error {
 public:
  using Error::Error;
};

class NonUnitaryOperator : public Error {
 public:
  using Error::Error;
};

class InvalidDensityMatrix : public Error {
 public:
  using Error::Error;
};

class SiteOutOfRange : public Error {
 public:
  using Error::Error;
};

class NonPositiveTemperature : public Error {
 public:
  using Error::Error;
};

class UnknownParameter : public Error {
 public:
  using Error::Error;
};

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Integration diverged or lost trace / Hermiticity beyond tolerance.
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class NonPositivePeak : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace kqb
