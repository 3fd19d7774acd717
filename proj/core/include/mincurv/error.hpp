#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mincurv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Jets or matrices combined with incompatible dimension/order.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An elementary function was evaluated outside its domain (sqrt(-1), log(0), 1/0, ...).
class SingularInputError : public Error {
 public:
  using Error::Error;
};

/// Expression text could not be parsed. `offset()` is the 1-based byte column of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// dF has rank < n at the evaluated point.
class ImmersionRankError : public Error {
 public:
  using Error::Error;
};

/// A documented hypothesis (G-rank <= 2, n = 2, graph kind, w > 0, ...) does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration failed validation. The message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mincurv
