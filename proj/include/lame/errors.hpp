#pragma once

#include <stdexcept>
#include <string>

namespace lame {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a = b, a = c, or a non-finite field.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// z^(1/2) requested with x < a.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at one of the regular singular points a, b, c.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// A summation index or depth exceeded kMaxIndex.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

/// B does not vanish where a terminating (polynomial) sum needs it to.
class TerminationViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed PolynomialSpec.
class SpecViolation : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function (beta with p <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Series requested outside its convergence region.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace lame
