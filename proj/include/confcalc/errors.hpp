#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace confcalc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of a vector-space operation have different shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Multiplication or inversion requested on a shape that is not an algebra.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside a function's domain, or an operation with no finite result.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A conformable operator was asked for a point at or below its lower terminal.
class LowerTerminalError : public Error {
 public:
  using Error::Error;
};

/// Order or tolerance parameters out of range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  enum class Kind { syntax, unknown_identifier, arity };

  ParseError(Kind kind, std::size_t offset, const std::string& message)
      : Error(message + " at offset " + std::to_string(offset)),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

}  // namespace confcalc
