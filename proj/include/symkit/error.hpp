#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symkit {

/// Violated precondition on an argument (out-of-range parameter, empty set, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Two operands live on incompatible grids.
class GridMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Zero-padding requested for a linear convolution is too small for the operand supports.
class InsufficientPadding : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed field/set file. `line()` is 1-based; 0 when the failure is not tied to a line.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace symkit
