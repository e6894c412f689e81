#pragma once

#include "varleb/geometry.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace varleb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the class an operation is defined on (e.g. p- <= 1 for a dual).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A constructed exponent or derived quantity leaves its admissible range.
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what, std::optional<Point> where = std::nullopt)
      : Error(what), where_(std::move(where)) {}
  const std::optional<Point>& where() const { return where_; }

 private:
  std::optional<Point> where_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A region captured no grid node.
class EmptyRegion : public Error {
 public:
  using Error::Error;
};

/// A per-cube norm passed the overflow threshold; the constant is treated as +inf.
class OverflowToInfinity : public Error {
 public:
  using Error::Error;
};

/// A required hypothesis (e.g. a weight class membership) failed at grid scale.
class HypothesisFailure : public Error {
 public:
  using Error::Error;
};

class SpecMismatch : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

/// Configuration or descriptor does not match its schema; `pointer` is a JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace varleb
