#pragma once

#include <stdexcept>
#include <string>

namespace nextremal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Not enough stored coefficients/moments for the requested index.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// The numerics could not decide: precision ceiling, unsettled tails, ...
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// Root finding was handed endpoints without a sign change.
class InvalidBracketError : public Error {
 public:
  using Error::Error;
};

/// A series expected to converge (e.g. sum of p_n(x)^2) does not.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Missing tail information for a requested moment degree.
class TailError : public Error {
 public:
  using Error::Error;
};

/// Structural conflict, e.g. adding an atom where one already exists.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// Bad command line / unknown theorem id / unsupported family.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace nextremal
