#pragma once

#include <stdexcept>
#include <string>

namespace hybridlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A classical-function precondition saw p_x or p_y.
class ShiftOperatorPresent : public Error {
 public:
  using Error::Error;
};

/// A monomial couples the quantum momentum p with classical generators.
class UnsupportedMixing : public Error {
 public:
  using Error::Error;
};

/// A Heisenberg right-hand side left the affine span of the generators.
class NonlinearDynamics : public Error {
 public:
  using Error::Error;
};

class DegreeTooHigh : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class OutOfBox : public Error {
 public:
  using Error::Error;
};

/// A monomial needs both the position and the momentum representation of one axis.
class NonSplittableTerm : public Error {
 public:
  using Error::Error;
};

class UnknownAxis : public Error {
 public:
  using Error::Error;
};

/// Probability mass reached the periodic boundary during a grid run.
class BoxOverflow : public Error {
 public:
  BoxOverflow(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonHermitianObservable : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to a numerical routine (bad grid, bad tolerance, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace hybridlab
