#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsmt {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed model / path-set / defect text. Carries a 1-based position.
class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

// A structurally parsed model (or other input) violates a semantic invariant.
class ModelError : public Error {
public:
  using Error::Error;
};

// Exploration or enumeration cap hit; the result would be unbounded.
class ResourceLimitError : public Error {
public:
  using Error::Error;
};

class TimeoutError : public ResourceLimitError {
public:
  using ResourceLimitError::ResourceLimitError;
};

// Requested instance / defect properties cannot be realised.
class UnsatisfiableError : public Error {
public:
  using Error::Error;
};

// A generator produced a Complete set that its checker rejects.
class InternalConsistencyError : public Error {
public:
  using Error::Error;
};

}  // namespace fsmt
