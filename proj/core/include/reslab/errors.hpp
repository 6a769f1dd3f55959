#pragma once

#include <stdexcept>
#include <string>

namespace reslab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied parameters was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical failures the CLI maps to exit code 3.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class IntegerOverflow : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// m == n with alpha*beta == -1: d/deta phi vanishes identically at xi = 0.
class DegenerateSelfInteraction : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Phase floor requested for a space-time resonant parameter set.
class ResonantCase : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidFloor : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DegenerateStationaryPoint : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class BracketFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class ResolutionError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class BlowupDetected : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class InterpolationRangeError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace reslab
