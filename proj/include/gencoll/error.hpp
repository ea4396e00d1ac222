#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gencoll {

// Base of everything the library throws for bad inputs or unsatisfiable requests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a model invariant.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested construction or enumeration exceeds the configured size bound.
class BoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace gencoll
