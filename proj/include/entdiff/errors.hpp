#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace entdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entropy requested for a window with no sampled records.
class EmptyWindowError : public Error {
 public:
  EmptyWindowError() : Error("entropy of an empty window is undefined") {}
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// Fixed-width integer arithmetic would have wrapped.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit with all x coordinates equal.
class DegenerateFitError : public Error {
 public:
  DegenerateFitError() : Error("degenerate fit: all x coordinates are equal") {}
};

class InsufficientHistoryError : public Error {
 public:
  InsufficientHistoryError() : Error("slope statistics hold no samples") {}
};

/// A baseline strategy referenced a threshold that has not been set yet.
class NotReadyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input line. `line()` is 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::uint64_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::uint64_t line() const noexcept { return line_; }

 private:
  std::uint64_t line_;
};

/// Input that must be time ordered was not.
class OrderError : public Error {
 public:
  using Error::Error;
};

}  // namespace entdiff
