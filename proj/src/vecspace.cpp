#include "confcalc/vecspace.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "confcalc/errors.hpp"

namespace confcalc {

namespace {

void require_same_shape(const Value& u, const Value& v, const char* op) {
  if (u.shape() != v.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch (" + u.shape().str() + " vs " +
                     v.shape().str() + ")");
  }
}

void require_algebra(const Value& v, const char* op) {
  if (!v.is_algebra()) {
    throw AlgebraError(std::string(op) + ": " + v.shape().str() + " is not an algebra");
  }
}

}  // namespace

std::string Shape::str() const {
  switch (kind) {
    case ShapeKind::scalar:
      return "scalar";
    case ShapeKind::vector:
      return "vector(" + std::to_string(n) + ")";
    case ShapeKind::matrix:
      return "matrix(" + std::to_string(n) + "x" + std::to_string(n) + ")";
  }
  return "?";
}

Value Value::vector(std::vector<double> components) {
  if (components.empty()) throw ShapeError("vector: empty component list");
  const auto n = components.size();
  return Value(Shape::vector(n), std::move(components));
}

Value Value::matrix(std::size_t n, std::vector<double> row_major) {
  if (n == 0 || row_major.size() != n * n) {
    throw ShapeError("matrix: expected " + std::to_string(n * n) + " components, got " +
                     std::to_string(row_major.size()));
  }
  return Value(Shape::matrix(n), std::move(row_major));
}

Value Value::diag(std::span<const double> entries) {
  const auto n = entries.size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = entries[i];
  return matrix(n, std::move(m));
}

Value Value::zeros(const Shape& shape) {
  return Value(shape, std::vector<double>(shape.size(), 0.0));
}

Value Value::identity(const Shape& shape) {
  if (!shape.is_algebra()) throw AlgebraError("identity: " + shape.str() + " is not an algebra");
  if (shape.kind == ShapeKind::scalar) return Value(1.0);
  std::vector<double> ones(shape.n, 1.0);
  return diag(ones);
}

Value Value::from_components(const Shape& shape, std::vector<double> components) {
  if (components.size() != shape.size()) {
    throw ShapeError("from_components: " + shape.str() + " needs " +
                     std::to_string(shape.size()) + " components");
  }
  return Value(shape, std::move(components));
}

bool Value::is_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double Value::as_scalar() const {
  if (!is_scalar()) throw ShapeError("as_scalar: value has shape " + shape_.str());
  return data_[0];
}

Value axpy(double c, const Value& u, double d, const Value& v) {
  require_same_shape(u, v, "axpy");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * u[i] + d * v[i];
  return Value::from_components(u.shape(), std::move(out));
}

double norm(const Value& v) {
  if (v.is_scalar()) return std::abs(v[0]);
  // Scaled sum of squares so that huge or tiny components do not overflow.
  double scale = 0.0;
  for (double x : v.components()) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double x : v.components()) {
    const double y = x / scale;
    sum += y * y;
  }
  return scale * std::sqrt(sum);
}

double distance(const Value& u, const Value& v) {
  require_same_shape(u, v, "distance");
  if (u.is_scalar()) return std::abs(u[0] - v[0]);
  return norm(u - v);
}

Value mul(const Value& u, const Value& v) {
  require_same_shape(u, v, "mul");
  require_algebra(u, "mul");
  if (u.is_scalar()) return Value(u[0] * v[0]);
  const std::size_t n = u.shape().n;
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double uik = u.at(i, k);
      if (uik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += uik * v.at(k, j);
    }
  }
  return Value::matrix(n, std::move(out));
}

Value inverse(const Value& v) {
  require_algebra(v, "inverse");
  if (v.is_scalar()) {
    if (v[0] == 0.0) throw DomainError("inverse: zero scalar");
    return Value(1.0 / v[0]);
  }
  // Gauss-Jordan with partial pivoting.
  const std::size_t n = v.shape().n;
  std::vector<double> a(v.components().begin(), v.components().end());
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  const double scale = norm(v);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (std::abs(a[piv * n + col]) <= 1e-14 * scale) throw DomainError("inverse: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a[piv * n + j], a[col * n + j]);
        std::swap(inv[piv * n + j], inv[col * n + j]);
      }
    }
    const double p = a[col * n + col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col * n + j] /= p;
      inv[col * n + j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r * n + j] -= f * a[col * n + j];
        inv[r * n + j] -= f * inv[col * n + j];
      }
    }
  }
  return Value::matrix(n, std::move(inv));
}

Value operator+(const Value& u, const Value& v) {
  require_same_shape(u, v, "add");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] + v[i];
  return Value::from_components(u.shape(), std::move(out));
}

Value operator-(const Value& u, const Value& v) {
  require_same_shape(u, v, "sub");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] - v[i];
  return Value::from_components(u.shape(), std::move(out));
}

Value operator-(const Value& v) { return -1.0 * v; }

Value operator*(double c, const Value& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * v[i];
  return Value::from_components(v.shape(), std::move(out));
}

nlohmann::json to_json(const Value& v) {
  switch (v.shape().kind) {
    case ShapeKind::scalar:
      return v[0];
    case ShapeKind::vector:
      return nlohmann::json(std::vector<double>(v.components().begin(), v.components().end()));
    case ShapeKind::matrix: {
      auto rows = nlohmann::json::array();
      const std::size_t n = v.shape().n;
      for (std::size_t i = 0; i < n; ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(v.at(i, j));
        rows.push_back(std::move(row));
      }
      return rows;
    }
  }
  return nullptr;
}

Value value_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Value(j.get<double>());
  if (!j.is_array() || j.empty()) throw ShapeError("value_from_json: expected number or array");
  if (j.front().is_number()) return Value::vector(j.get<std::vector<double>>());
  const std::size_t n = j.size();
  std::vector<double> data;
  data.reserve(n * n);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) throw ShapeError("value_from_json: matrix must be square");
    for (const auto& x : row) data.push_back(x.get<double>());
  }
  return Value::matrix(n, std::move(data));
}

std::string to_string(const Value& v) { return to_json(v).dump(); }

}  // namespace confcalc
