#pragma once

#include <stdexcept>
#include <string>

namespace latw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A circulant (shift-polynomial) system has no solution.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Two operands carry different periods.
class PeriodMismatch : public Error {
 public:
  using Error::Error;
};

/// A truncated series was asked for a coefficient it cannot certify.
class InsufficientDepth : public Error {
 public:
  using Error::Error;
};

/// Leading coefficient has a zero entry.
class NonInvertible : public Error {
 public:
  using Error::Error;
};

/// No root of c^m = -1 exists in the chosen scalar field.
class BranchUnavailable : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ZeroLambda : public Error {
 public:
  using Error::Error;
};

class DegenerateSeed : public Error {
 public:
  using Error::Error;
};

class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

}  // namespace latw
