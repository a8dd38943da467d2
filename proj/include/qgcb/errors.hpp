#pragma once

#include <stdexcept>
#include <string>

namespace qgcb {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain (bad weights, negative arguments, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation needed data beyond the explicit height/depth bound.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant failed at runtime (integrality, unitriangularity,
/// uniqueness of a linear solve, ...). Always a bug or a counterexample.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qgcb
