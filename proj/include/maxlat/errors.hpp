#pragma once

#include <stdexcept>
#include <string>

namespace maxlat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMedia : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain where an operation is defined (complex z for
/// tau, lambda = 0, lambda outside a required window, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (non-convex set, box too small, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// Should be unreachable; signals a bug or a broken mathematical invariant.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace maxlat
