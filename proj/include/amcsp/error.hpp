#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amcsp {

// Malformed input or a violated precondition. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request that exceeds a configured exhaustive-search or enumeration bound.
// Maps to CLI exit code 3.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse failure carrying a 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace amcsp
