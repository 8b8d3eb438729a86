#pragma once

// Finite-dimensional normed spaces used as codomains of every function in
// the library: scalars, R^n with the Euclidean norm and n x n matrices with
// the Frobenius norm. Scalars and square matrices also form Banach algebras.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace confcalc {

enum class ShapeKind { scalar, vector, matrix };

struct Shape {
  ShapeKind kind = ShapeKind::scalar;
  std::size_t n = 1;  // vector length or matrix order

  static Shape scalar() { return {ShapeKind::scalar, 1}; }
  static Shape vector(std::size_t n) { return {ShapeKind::vector, n}; }
  static Shape matrix(std::size_t n) { return {ShapeKind::matrix, n}; }

  std::size_t size() const { return kind == ShapeKind::matrix ? n * n : n; }
  bool is_algebra() const { return kind != ShapeKind::vector; }
  std::string str() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Immutable element of one of the supported normed spaces.
class Value {
 public:
  Value() : Value(0.0) {}
  Value(double x) : shape_(Shape::scalar()), data_{x} {}  // NOLINT: implicit by intent

  static Value vector(std::vector<double> components);
  static Value vector(std::initializer_list<double> components) {
    return vector(std::vector<double>(components));
  }
  /// Row-major n x n matrix.
  static Value matrix(std::size_t n, std::vector<double> row_major);
  static Value diag(std::span<const double> entries);
  static Value zeros(const Shape& shape);
  /// Multiplicative identity; AlgebraError for vector shapes.
  static Value identity(const Shape& shape);
  static Value from_components(const Shape& shape, std::vector<double> components);

  const Shape& shape() const { return shape_; }
  std::span<const double> components() const { return data_; }
  double operator[](std::size_t i) const { return data_[i]; }
  std::size_t size() const { return data_.size(); }

  bool is_scalar() const { return shape_.kind == ShapeKind::scalar; }
  bool is_algebra() const { return shape_.is_algebra(); }
  /// True when multiplication is commutative on the whole space of this shape.
  bool is_commutative() const {
    return shape_.kind == ShapeKind::scalar ||
           (shape_.kind == ShapeKind::matrix && shape_.n == 1);
  }
  bool is_finite() const;

  /// Scalar payload; ShapeError for other shapes.
  double as_scalar() const;

  /// Component (i, j) of a matrix.
  double at(std::size_t i, std::size_t j) const { return data_[i * shape_.n + j]; }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  Value(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {}

  Shape shape_;
  std::vector<double> data_;
};

/// c*u + d*v.
Value axpy(double c, const Value& u, double d, const Value& v);
double norm(const Value& v);
/// Algebra product: scalar product or matrix product.
Value mul(const Value& u, const Value& v);
/// Multiplicative inverse; DomainError when the element is singular.
Value inverse(const Value& v);

Value operator+(const Value& u, const Value& v);
Value operator-(const Value& u, const Value& v);
Value operator-(const Value& v);
Value operator*(double c, const Value& v);
inline Value operator*(const Value& v, double c) { return c * v; }
inline Value operator/(const Value& v, double c) { return (1.0 / c) * v; }

/// norm(u - v) without the intermediate allocation.
double distance(const Value& u, const Value& v);

/// Scalar -> number, vector -> flat array, matrix -> row-major nested array.
nlohmann::json to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);

std::string to_string(const Value& v);

}  // namespace confcalc
