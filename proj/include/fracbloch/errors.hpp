#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracbloch {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A weight violates a standing assumption (e.g. a non-positive tail).
class InvalidWeightError : public Error {
 public:
  using Error::Error;
};

/// Family parameters or experiment settings out of their admissible range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Quadrature produced a non-finite value or exhausted its evaluation budget.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t panels)
      : Error(what + " (panels=" + std::to_string(panels) + ")"), panels_(panels) {}
  std::size_t panels() const noexcept { return panels_; }

 private:
  std::size_t panels_;
};

/// A truncated series is not accurate enough at the requested radius.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::size_t suggested)
      : Error(what + " (suggested truncation " + std::to_string(suggested) + ")"),
        suggested_(suggested) {}
  std::size_t suggested() const noexcept { return suggested_; }

 private:
  std::size_t suggested_;
};

/// The lacunary depth cannot be reached, or the truncated tail is too heavy.
class DepthError : public Error {
 public:
  DepthError(const std::string& what, int bound)
      : Error(what + " (depth bound " + std::to_string(bound) + ")"), bound_(bound) {}
  int bound() const noexcept { return bound_; }

 private:
  int bound_;
};

/// Malformed text input; `position` is the 0-based offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Input data violates a structural requirement (ordering, positivity).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracbloch
