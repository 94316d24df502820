#pragma once

#include <stdexcept>
#include <string>

namespace pleijel {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A Bessel value is not representable in double precision.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver did not converge; the message carries the bracket state.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A configured order/zero cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace pleijel
