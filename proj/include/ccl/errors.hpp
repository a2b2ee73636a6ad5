#pragma once

#include <stdexcept>
#include <string>

namespace ccl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (negative profile argument, non-positive scale, margin out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Points, cones or fields of different dimensions were combined.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A stated precondition of a construction does not hold
/// (A' <= A in a gap check, intersecting cones, support touching the box).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy result
/// (no decay at the truncation boundary, singular linear system).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A grid request exceeds the configured point budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccl
