#pragma once

#include <stdexcept>
#include <string>

namespace percolor {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse: bad arguments, unknown ids, mismatched models.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A mathematically undefined input (degenerate denominator, zero variance).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// File-system or codec failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace percolor
