#pragma once

#include <stdexcept>
#include <string>

namespace xnim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested table does not fit the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A position lies outside the bound of the table it was looked up in.
class BoundError : public Error {
 public:
  BoundError(const std::string& what, unsigned long required_bound)
      : Error(what), required_bound_(required_bound) {}

  unsigned long required_bound() const noexcept { return required_bound_; }

 private:
  unsigned long required_bound_;
};

// A check needs positions beyond the available bound.
class InsufficientBoundError : public Error {
 public:
  using Error::Error;
};

// Table file failed validation (magic, length, field values).
class CorruptionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersionError : public Error {
 public:
  using Error::Error;
};

// Move rejected by the game rule; the message names the violated rule.
class IllegalMoveError : public Error {
 public:
  using Error::Error;
};

}  // namespace xnim
