#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyplap {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural invariant violated (bad hypergraph, bad labeling, bad certificate).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numeric parameter out of its admissible range (p <= 1, eps <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Desk-scale routine called on an instance beyond its guard.
class SizeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hyplap
