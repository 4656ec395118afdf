#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corostab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class NonInvertible : public Error {
 public:
  using Error::Error;
};

/// A time or stencil point fell outside the domain of a motion path.
class DomainExceeded : public Error {
 public:
  using Error::Error;
};

/// Errors that carry a character offset into an expression source.
class PositionedError : public Error {
 public:
  PositionedError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class LexError : public PositionedError {
 public:
  using PositionedError::PositionedError;
};

class ParseError : public PositionedError {
 public:
  ParseError(const std::string& what, std::size_t position, std::string expected)
      : PositionedError(what + (expected.empty() ? "" : " (expected " + expected + ")"), position),
        expected_(std::move(expected)) {}
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::string expected_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class EquivarianceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed material, scan or report document. Line is 1-based, 0 if unknown.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace corostab
