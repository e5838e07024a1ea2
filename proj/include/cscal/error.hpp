#pragma once

#include <stdexcept>
#include <string>

namespace cscal {

// Base of every error raised by the library. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: bad expression text, undeclared symbol, bad metric file.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, int line, int column)
      : InputError(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownCoordinateError : public InputError {
 public:
  explicit UnknownCoordinateError(const std::string& name)
      : InputError("unknown coordinate '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Numeric evaluation requested with symbols left unbound.
class UnboundSymbolError : public InputError {
 public:
  using InputError::InputError;
};

// A mathematical precondition does not hold (degenerate metric, dimension mismatch, ...).
class MathError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetricError : public MathError {
 public:
  using MathError::MathError;
};

class DimensionError : public MathError {
 public:
  using MathError::MathError;
};

class ConstraintViolation : public MathError {
 public:
  using MathError::MathError;
};

class DivisionByZero : public MathError {
 public:
  DivisionByZero() : MathError("division by zero") {}
};

// Tensor slot misuse: wrong variance or out-of-range slot.
class SlotError : public Error {
 public:
  using Error::Error;
};

// A zero test left the decidable expression class.
class UndecidedError : public Error {
 public:
  using Error::Error;
};

}  // namespace cscal
