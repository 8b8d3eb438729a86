#include "confcalc/funcs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "confcalc/errors.hpp"

namespace confcalc {

namespace {

std::string fmt_interval(const Interval& d) {
  std::ostringstream os;
  os << "[" << d.lo << ", " << d.hi << "]";
  return os.str();
}

Interval intersect(const Interval& x, const Interval& y) {
  return {std::max(x.lo, y.lo), std::min(x.hi, y.hi)};
}

// ---- representations -------------------------------------------------------

class ExprImpl final : public FunctionImpl {
 public:
  ExprImpl(ExprFn expr, Interval domain)
      : expr_(std::move(expr)), deriv_(expr_.derivative(0)), domain_(domain) {}

  Value eval(double t) const override { return expr_.eval(t); }
  std::optional<Value> exact_derivative(double t) const override { return Value(deriv_.eval(t)); }
  Shape shape() const override { return Shape::scalar(); }
  Interval domain() const override { return domain_; }
  std::string describe() const override { return expr_.to_string(); }

 private:
  ExprFn expr_;
  ExprFn deriv_;
  Interval domain_;
};

class GridImpl final : public FunctionImpl {
 public:
  explicit GridImpl(GridFn grid) : grid_(std::move(grid)) {}

  Value eval(double t) const override { return grid_.eval(t); }
  double derivative_uncertainty(double t) const override { return grid_.derivative_uncertainty(t); }
  Shape shape() const override { return grid_.shape(); }
  Interval domain() const override { return {grid_.nodes().front(), grid_.nodes().back()}; }
  std::string describe() const override {
    return std::string("grid(") + std::to_string(grid_.nodes().size()) + " nodes, " +
           (grid_.kind() == InterpKind::linear ? "linear" : "cubic-hermite") + ")";
  }

 private:
  GridFn grid_;
};

using OffsetFn = std::function<Value(double, double)>;

class CallableImpl final : public FunctionImpl {
 public:
  CallableImpl(ValueFn fn, ValueFn deriv, Shape shape, Interval domain, std::string name,
               OffsetFn at_offset = nullptr)
      : fn_(std::move(fn)),
        deriv_(std::move(deriv)),
        at_offset_(std::move(at_offset)),
        shape_(shape),
        domain_(domain),
        name_(std::move(name)) {}

  Value eval(double t) const override { return fn_(t); }
  Value eval_offset(double base, double offset) const override {
    return at_offset_ ? at_offset_(base, offset) : fn_(base + offset);
  }
  std::optional<Value> exact_derivative(double t) const override {
    if (!deriv_) return std::nullopt;
    return deriv_(t);
  }
  Shape shape() const override { return shape_; }
  Interval domain() const override { return domain_; }
  std::string describe() const override { return name_; }

 private:
  ValueFn fn_;
  ValueFn deriv_;
  OffsetFn at_offset_;
  Shape shape_;
  Interval domain_;
  std::string name_;
};

class StackImpl final : public FunctionImpl {
 public:
  StackImpl(std::vector<Function> parts, bool diagonal)
      : parts_(std::move(parts)), diagonal_(diagonal) {
    if (parts_.empty()) throw ShapeError("component list is empty");
    for (const auto& p : parts_) {
      if (p.shape() != Shape::scalar()) throw ShapeError("components must be scalar functions");
      domain_ = intersect(domain_, p.domain());
    }
  }

  Value eval(double t) const override {
    std::vector<double> xs;
    xs.reserve(parts_.size());
    for (const auto& p : parts_) xs.push_back(p.impl().eval(t).as_scalar());
    return assemble(std::move(xs));
  }

  Value eval_offset(double base, double offset) const override {
    std::vector<double> xs;
    xs.reserve(parts_.size());
    for (const auto& p : parts_) xs.push_back(p.impl().eval_offset(base, offset).as_scalar());
    return assemble(std::move(xs));
  }

  std::optional<Value> exact_derivative(double t) const override {
    std::vector<double> xs;
    xs.reserve(parts_.size());
    for (const auto& p : parts_) {
      auto d = p.impl().exact_derivative(t);
      if (!d) return std::nullopt;
      xs.push_back(d->as_scalar());
    }
    return assemble(std::move(xs));
  }

  double derivative_uncertainty(double t) const override {
    double sum = 0.0;
    for (const auto& p : parts_) sum += p.derivative_uncertainty(t);
    return sum;
  }

  Shape shape() const override {
    return diagonal_ ? Shape::matrix(parts_.size()) : Shape::vector(parts_.size());
  }
  Interval domain() const override { return domain_; }
  std::string describe() const override {
    std::string s = diagonal_ ? "diag(" : "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ", ";
      s += parts_[i].describe();
    }
    return s + (diagonal_ ? ")" : "]");
  }

 private:
  Value assemble(std::vector<double> xs) const {
    if (diagonal_) return Value::diag(xs);
    return Value::vector(std::move(xs));
  }

  std::vector<Function> parts_;
  bool diagonal_;
  Interval domain_;
};

class CombinationImpl final : public FunctionImpl {
 public:
  CombinationImpl(double c, Function f, double d, Function g)
      : c_(c), d_(d), f_(std::move(f)), g_(std::move(g)) {
    if (f_.shape() != g_.shape()) throw ShapeError("linear_combination: shape mismatch");
  }

  Value eval(double t) const override { return axpy(c_, f_.impl().eval(t), d_, g_.impl().eval(t)); }
  Value eval_offset(double base, double offset) const override {
    return axpy(c_, f_.impl().eval_offset(base, offset), d_, g_.impl().eval_offset(base, offset));
  }
  std::optional<Value> exact_derivative(double t) const override {
    auto df = f_.impl().exact_derivative(t);
    auto dg = g_.impl().exact_derivative(t);
    if (!df || !dg) return std::nullopt;
    return axpy(c_, *df, d_, *dg);
  }
  double derivative_uncertainty(double t) const override {
    return std::abs(c_) * f_.derivative_uncertainty(t) + std::abs(d_) * g_.derivative_uncertainty(t);
  }
  Shape shape() const override { return f_.shape(); }
  Interval domain() const override { return intersect(f_.domain(), g_.domain()); }
  std::string describe() const override {
    std::ostringstream os;
    os << "(" << c_ << ")*(" << f_.describe() << ") + (" << d_ << ")*(" << g_.describe() << ")";
    return os.str();
  }

 private:
  double c_, d_;
  Function f_, g_;
};

class ProductImpl final : public FunctionImpl {
 public:
  ProductImpl(Function f, Function g, bool invert_g)
      : f_(std::move(f)), g_(std::move(g)), invert_g_(invert_g) {
    if (f_.shape() != g_.shape()) throw ShapeError("product: shape mismatch");
    if (!f_.shape().is_algebra()) throw AlgebraError("product: " + f_.shape().str() + " is not an algebra");
  }

  Value eval(double t) const override {
    const Value gv = g_.impl().eval(t);
    return mul(f_.impl().eval(t), invert_g_ ? inverse(gv) : gv);
  }
  Value eval_offset(double base, double offset) const override {
    const Value gv = g_.impl().eval_offset(base, offset);
    return mul(f_.impl().eval_offset(base, offset), invert_g_ ? inverse(gv) : gv);
  }

  std::optional<Value> exact_derivative(double t) const override {
    auto df = f_.impl().exact_derivative(t);
    auto dg = g_.impl().exact_derivative(t);
    if (!df || !dg) return std::nullopt;
    const Value fv = f_.impl().eval(t);
    const Value gv = g_.impl().eval(t);
    if (!invert_g_) return mul(*df, gv) + mul(fv, *dg);
    // (f g^{-1})' = f' g^{-1} - f g^{-1} g' g^{-1}
    const Value ginv = inverse(gv);
    return mul(*df, ginv) - mul(mul(fv, ginv), mul(*dg, ginv));
  }

  double derivative_uncertainty(double t) const override {
    if (f_.derivative_uncertainty(t) == 0.0 && g_.derivative_uncertainty(t) == 0.0) return 0.0;
    const double fn = norm(f_.impl().eval(t));
    double gn = norm(g_.impl().eval(t));
    if (invert_g_) gn = norm(inverse(g_.impl().eval(t)));
    return f_.derivative_uncertainty(t) * gn + fn * g_.derivative_uncertainty(t) * (invert_g_ ? gn * gn : 1.0);
  }

  Shape shape() const override { return f_.shape(); }
  Interval domain() const override { return intersect(f_.domain(), g_.domain()); }
  std::string describe() const override {
    return "(" + f_.describe() + (invert_g_ ? ")/(" : ")*(") + g_.describe() + ")";
  }

 private:
  Function f_, g_;
  bool invert_g_;
};

class PointValueImpl final : public FunctionImpl {
 public:
  PointValueImpl(Function f, double t0, Value v) : f_(std::move(f)), t0_(t0), v_(std::move(v)) {
    if (v_.shape() != f_.shape()) throw ShapeError("with_point_value: shape mismatch");
  }

  Value eval(double t) const override { return t == t0_ ? v_ : f_.impl().eval(t); }
  Value eval_offset(double base, double offset) const override {
    // base + offset may round onto t0 without being t0.
    const bool at_t0 = base == t0_ ? offset == 0.0 : base + offset == t0_;
    return at_t0 ? v_ : f_.impl().eval_offset(base, offset);
  }
  std::optional<Value> exact_derivative(double t) const override {
    if (t == t0_) return std::nullopt;
    return f_.impl().exact_derivative(t);
  }
  double derivative_uncertainty(double t) const override { return f_.derivative_uncertainty(t); }
  Shape shape() const override { return f_.shape(); }
  Interval domain() const override {
    Interval d = f_.domain();
    d.lo = std::min(d.lo, t0_);
    d.hi = std::max(d.hi, t0_);
    return d;
  }
  std::string describe() const override {
    std::ostringstream os;
    os << f_.describe() << " with f(" << t0_ << ")=" << to_string(v_);
    return os.str();
  }

 private:
  Function f_;
  double t0_;
  Value v_;
};

// ---- builtins --------------------------------------------------------------

struct BuiltinSpec {
  std::string name;
  std::vector<double> params;
};

BuiltinSpec split_builtin(std::string_view spec) {
  BuiltinSpec out;
  std::size_t pos = spec.find(':');
  out.name = std::string(spec.substr(0, pos));
  while (pos != std::string_view::npos) {
    const std::size_t next = spec.find(':', pos + 1);
    const auto field = spec.substr(pos + 1, next == std::string_view::npos ? next : next - pos - 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw ParameterError("builtin '" + std::string(spec) + "': bad parameter '" +
                           std::string(field) + "'");
    }
    out.params.push_back(v);
    pos = next;
  }
  return out;
}

double param(const BuiltinSpec& s, std::size_t i, double fallback) {
  return i < s.params.size() ? s.params[i] : fallback;
}

Function scalar_builtin(std::string name, std::function<double(double)> f,
                        std::function<double(double)> df, Interval domain = {}) {
  ValueFn vf = [f = std::move(f)](double t) { return Value(f(t)); };
  ValueFn dvf = [df = std::move(df)](double t) { return Value(df(t)); };
  return make_callable(std::move(vf), Shape::scalar(), domain, std::move(name), std::move(dvf));
}

// Builtin of the form g(t - c), evaluated from the offset directly when the
// base is the anchor c.
Function anchored_builtin(std::string name, double c, std::function<double(double)> g,
                          std::function<double(double)> dg, Interval domain) {
  ValueFn vf = [g, c](double t) { return Value(g(t - c)); };
  ValueFn dvf = [dg, c](double t) { return Value(dg(t - c)); };
  OffsetFn off = [g, c](double base, double offset) {
    return Value(base == c ? g(offset) : g(base + offset - c));
  };
  return Function(std::make_shared<CallableImpl>(std::move(vf), std::move(dvf), Shape::scalar(), domain,
                                                 std::move(name), std::move(off)));
}

}  // namespace

// ---- Function --------------------------------------------------------------

Function::Function(std::shared_ptr<const FunctionImpl> impl) : impl_(std::move(impl)) {
  if (!impl_) throw ParameterError("Function: null implementation");
}

Value Function::eval(double t) const {
  const Interval d = impl_->domain();
  if (!d.contains(t)) {
    std::ostringstream os;
    os << describe() << ": t = " << t << " outside domain " << fmt_interval(d);
    throw DomainError(os.str());
  }
  Value v = impl_->eval(t);
  if (!v.is_finite()) {
    std::ostringstream os;
    os << describe() << ": non-finite value at t = " << t;
    throw DomainError(os.str());
  }
  return v;
}

Value Function::eval_offset(double base, double offset) const {
  const Interval d = impl_->domain();
  const double x = base + offset;
  // A domain open at base admits every positive offset, however small.
  const bool inside = d.contains(x) || (offset > 0.0 && x <= d.hi && base <= d.lo &&
                                        d.lo <= std::nextafter(base, d.hi));
  if (!inside) {
    std::ostringstream os;
    os << describe() << ": t = " << base << " + " << offset << " outside domain " << fmt_interval(d);
    throw DomainError(os.str());
  }
  Value v = impl_->eval_offset(base, offset);
  if (!v.is_finite()) {
    std::ostringstream os;
    os << describe() << ": non-finite value at t = " << base << " + " << offset;
    throw DomainError(os.str());
  }
  return v;
}

std::optional<Value> Function::exact_first_deriv(double t) const {
  const Interval d = impl_->domain();
  if (!d.interior(t)) {
    std::ostringstream os;
    os << describe() << ": derivative needs t = " << t << " interior to " << fmt_interval(d);
    throw DomainError(os.str());
  }
  auto v = impl_->exact_derivative(t);
  if (v && !v->is_finite()) throw DomainError(describe() + ": non-finite derivative");
  return v;
}

// ---- GridFn ----------------------------------------------------------------

GridFn::GridFn(std::vector<double> nodes, std::vector<Value> values, InterpKind kind)
    : nodes_(std::move(nodes)), values_(std::move(values)), kind_(kind) {
  if (nodes_.size() < 2) throw ParameterError("grid needs at least 2 nodes");
  if (nodes_.size() != values_.size()) throw ParameterError("grid: node/value count mismatch");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw ParameterError("grid abscissae must be strictly increasing");
    if (values_[i].shape() != values_[0].shape()) throw ShapeError("grid values must share one shape");
  }

  const std::size_t n = nodes_.size();
  slopes_.reserve(n);
  if (n == 2) {
    const Value s = (values_[1] - values_[0]) / (nodes_[1] - nodes_[0]);
    slopes_ = {s, s};
    return;
  }
  // Three-point derivative formulas on a non-uniform grid.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = std::clamp<std::size_t>(i, 1, n - 2);
    const double x0 = nodes_[j - 1], x1 = nodes_[j], x2 = nodes_[j + 1];
    const double x = nodes_[i];
    const double c0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
    const double c1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
    const double c2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    slopes_.push_back(axpy(c0, values_[j - 1], 1.0, axpy(c1, values_[j], c2, values_[j + 1])));
  }
}

std::size_t GridFn::segment(double t) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(i, nodes_.size() - 2);
}

Value GridFn::eval(double t) const {
  if (t < nodes_.front() || t > nodes_.back()) throw DomainError("grid: t outside node range");
  const std::size_t i = segment(t);
  if (t == nodes_[i]) return values_[i];
  if (t == nodes_[i + 1]) return values_[i + 1];
  const double h = nodes_[i + 1] - nodes_[i];
  const double s = (t - nodes_[i]) / h;
  if (kind_ == InterpKind::linear) return axpy(1.0 - s, values_[i], s, values_[i + 1]);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return axpy(h00, values_[i], 1.0,
              axpy(h10 * h, slopes_[i], 1.0, axpy(h01, values_[i + 1], h11 * h, slopes_[i + 1])));
}

Value GridFn::slope(double t) const {
  if (t < nodes_.front() || t > nodes_.back()) throw DomainError("grid: t outside node range");
  const std::size_t i = segment(t);
  const double h = nodes_[i + 1] - nodes_[i];
  const Value secant = (values_[i + 1] - values_[i]) / h;
  if (kind_ == InterpKind::linear) return secant;
  const double s = (t - nodes_[i]) / h;
  const double d00 = (6 * s * s - 6 * s) / h, d10 = 3 * s * s - 4 * s + 1;
  const double d01 = (-6 * s * s + 6 * s) / h, d11 = 3 * s * s - 2 * s;
  return axpy(d00, values_[i], 1.0,
              axpy(d10, slopes_[i], 1.0, axpy(d01, values_[i + 1], d11, slopes_[i + 1])));
}

double GridFn::derivative_uncertainty(double t) const {
  if (t < nodes_.front() || t > nodes_.back()) return 0.0;
  const std::size_t i = segment(t);
  const double h = nodes_[i + 1] - nodes_[i];
  const Value secant = (values_[i + 1] - values_[i]) / h;
  if (kind_ == InterpKind::linear) {
    // Slope error of a linear interpolant is O(h |f''|); the node slopes
    // estimate it.
    return 0.5 * (distance(slopes_[i], secant) + distance(slopes_[i + 1], secant));
  }
  // Zero for quadratic data, which the Hermite interpolant reproduces.
  return 0.25 * norm(axpy(1.0, slopes_[i] + slopes_[i + 1], -2.0, secant));
}

GridFn read_grid_csv(std::istream& in, InterpKind kind) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("grid CSV: missing header");
  std::size_t columns = 1;
  for (char c : line) columns += (c == ',');
  if (columns < 2 || line.rfind("t", 0) != 0) {
    throw ParameterError("grid CSV: header must be 't,v0[,v1,...]'");
  }
  std::vector<double> nodes;
  std::vector<Value> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::vector<double> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      std::string field = line.substr(start, end - start);
      while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
      while (!field.empty() && field.front() == ' ') field.erase(field.begin());
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParameterError("grid CSV row " + std::to_string(row) + ": bad number '" + field + "'");
      }
      fields.push_back(v);
      start = end + 1;
    }
    if (fields.size() != columns) {
      throw ParameterError("grid CSV row " + std::to_string(row) + ": expected " +
                           std::to_string(columns) + " fields");
    }
    nodes.push_back(fields[0]);
    if (columns == 2) {
      values.emplace_back(fields[1]);
    } else {
      values.push_back(Value::vector(std::vector<double>(fields.begin() + 1, fields.end())));
    }
  }
  return GridFn(std::move(nodes), std::move(values), kind);
}

GridFn read_grid_csv_file(const std::string& path, InterpKind kind) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open grid file '" + path + "'");
  return read_grid_csv(in, kind);
}

// ---- constructors ----------------------------------------------------------

Function make_expr(ExprFn expr, Interval domain) {
  if (expr.variables().size() != 1) throw ParameterError("make_expr: expected a univariate expression");
  return Function(std::make_shared<ExprImpl>(std::move(expr), domain));
}

Function make_expr(std::string_view text, Interval domain) { return make_expr(parse_expr(text), domain); }

Function make_grid(GridFn grid) { return Function(std::make_shared<GridImpl>(std::move(grid))); }

Function make_constant(const Value& c) {
  return make_callable([c](double) { return c; }, c.shape(), {}, "const(" + to_string(c) + ")",
                       [z = Value::zeros(c.shape())](double) { return z; });
}

Function make_callable(ValueFn fn, Shape shape, Interval domain, std::string description,
                       ValueFn derivative) {
  return Function(std::make_shared<CallableImpl>(std::move(fn), std::move(derivative), shape, domain,
                                                 std::move(description)));
}

Function make_vector(std::vector<Function> components) {
  return Function(std::make_shared<StackImpl>(std::move(components), false));
}

Function make_diag(std::vector<Function> diagonal) {
  return Function(std::make_shared<StackImpl>(std::move(diagonal), true));
}

Function linear_combination(double c, const Function& f, double d, const Function& g) {
  return Function(std::make_shared<CombinationImpl>(c, f, d, g));
}

Function product(const Function& f, const Function& g) {
  return Function(std::make_shared<ProductImpl>(f, g, false));
}

Function quotient(const Function& f, const Function& g) {
  return Function(std::make_shared<ProductImpl>(f, g, true));
}

Function with_point_value(const Function& f, double t0, const Value& v) {
  return Function(std::make_shared<PointValueImpl>(f, t0, v));
}

std::vector<std::string> builtin_names() {
  return {"one", "zero", "t", "t2", "exp", "sin", "cos", "tsin", "const:c", "pow:p[:shift]",
          "abs[:c]", "step[:c]", "sinlog[:shift]", "recip[:shift]"};
}

Function make_builtin(std::string_view spec_text) {
  const BuiltinSpec spec = split_builtin(spec_text);
  const std::string& n = spec.name;
  const std::string label(spec_text);

  if (n == "one") return make_constant(Value(1.0));
  if (n == "zero") return make_constant(Value(0.0));
  if (n == "const") return make_constant(Value(param(spec, 0, 0.0)));
  if (n == "t") return scalar_builtin(label, [](double t) { return t; }, [](double) { return 1.0; });
  if (n == "t2") {
    return scalar_builtin(label, [](double t) { return t * t; }, [](double t) { return 2.0 * t; });
  }
  if (n == "exp") {
    return scalar_builtin(label, [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); });
  }
  if (n == "sin") {
    return scalar_builtin(label, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); });
  }
  if (n == "cos") {
    return scalar_builtin(label, [](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); });
  }
  if (n == "tsin") {
    return scalar_builtin(
        label, [](double t) { return t * std::sin(t); },
        [](double t) { return std::sin(t) + t * std::cos(t); });
  }
  if (n == "pow") {
    if (spec.params.empty()) throw ParameterError("builtin pow needs an exponent: pow:p[:shift]");
    const double p = spec.params[0];
    const double c = param(spec, 1, 0.0);
    Interval dom{c, Interval{}.hi};
    if (p <= 0.0) dom.lo = std::nextafter(c, Interval{}.hi);
    return anchored_builtin(
        label, c, [p](double x) { return real_pow(x, p); },
        [p](double x) {
          if (x == 0.0 && p < 1.0) throw DomainError("pow: derivative unbounded at the shift point");
          return p * real_pow(x, p - 1.0);
        },
        dom);
  }
  if (n == "abs") {
    const double c = param(spec, 0, 0.0);
    return scalar_builtin(
        label, [c](double t) { return std::abs(t - c); },
        [c](double t) {
          if (t == c) throw DomainError("abs: not differentiable at the kink");
          return t > c ? 1.0 : -1.0;
        });
  }
  if (n == "step") {
    const double c = param(spec, 0, 0.0);
    return scalar_builtin(
        label, [c](double t) { return t < c ? 0.0 : 1.0; },
        [c](double t) {
          if (t == c) throw DomainError("step: not differentiable at the jump");
          return 0.0;
        });
  }
  if (n == "sinlog") {
    const double c = param(spec, 0, 0.0);
    return anchored_builtin(
        label, c, [](double x) { return std::sin(std::log(x)); },
        [](double x) { return std::cos(std::log(x)) / x; }, {std::nextafter(c, Interval{}.hi), Interval{}.hi});
  }
  if (n == "recip") {
    const double c = param(spec, 0, 0.0);
    return anchored_builtin(
        label, c, [](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); },
        {std::nextafter(c, Interval{}.hi), Interval{}.hi});
  }
  throw ParameterError("unknown builtin '" + label + "'");
}

}  // namespace confcalc
