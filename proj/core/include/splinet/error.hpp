#pragma once

#include <stdexcept>
#include <string>

namespace splinet {

/// Base for all library failures that stem from invalid input or numerical
/// breakdown. Programming errors (index out of range) stay std::logic_error.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Orthogonalization met a (numerically) linearly dependent input.
class DependenceError : public Error {
public:
  using Error::Error;
};

/// Extended-mesh k-tuples failed to coincide after the period shift.
class IdentificationError : public Error {
public:
  using Error::Error;
};

/// Malformed file content; carries the 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what)
    , line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_ = 0;
};

} // namespace splinet
