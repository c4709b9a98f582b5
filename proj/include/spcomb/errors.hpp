#pragma once

#include <stdexcept>
#include <string>

namespace spcomb {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two configurations share a point, or a configuration would hold a duplicate.
class OverlapError : public Error {
 public:
  using Error::Error;
};

/// Point dimensions disagree inside one computation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A kernel was applied to the wrong number of arguments.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside the domain of a function (log(1+phi), k > n, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A point is (or is not) a member of a configuration, contrary to a precondition.
class MembershipError : public Error {
 public:
  using Error::Error;
};

/// A test function's support leaves the observation window.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// An infinite sequence has no closed-form representation for the requested result.
class UnsupportedTailError : public Error {
 public:
  using Error::Error;
};

/// A series tail could not be certified below the remainder target.
class TailTruncationError : public Error {
 public:
  using Error::Error;
};

/// No closed form exists for the analytic side of a duality check.
class AnalyticUnavailableError : public Error {
 public:
  using Error::Error;
};

/// Integer arithmetic would overflow its accumulator.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to an operation (sample counts, quadrature sizes, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace spcomb
