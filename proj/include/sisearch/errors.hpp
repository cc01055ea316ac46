#pragma once

#include <stdexcept>
#include <string>

namespace sisearch {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Market primitives violate n >= 1, c > 0, u > 0, p >= 0 or c < (1 + p u) / p.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an event of (numerically) zero prior mass.
class DegenerateTruncation : public Error {
 public:
  using Error::Error;
};

/// The separating schedule is undefined at p = 0.
class PriceZeroError : public Error {
 public:
  using Error::Error;
};

class BracketFailure : public Error {
 public:
  using Error::Error;
};

class CutoffOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Problem size beyond what an exhaustive routine accepts.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace sisearch
