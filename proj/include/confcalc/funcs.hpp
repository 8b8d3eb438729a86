#pragma once

// Functions of one real variable valued in a normed space. Every kernel in
// the library consumes the Function handle below; concrete representations
// are expressions, sampled grids, closed-form builtins, and compositions of
// those.

#include <functional>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confcalc/expr.hpp"
#include "confcalc/vecspace.hpp"

namespace confcalc {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const { return t >= lo && t <= hi; }
  bool interior(double t) const { return t > lo && t < hi; }
  static Interval real_line() { return {}; }
};

class FunctionImpl {
 public:
  virtual ~FunctionImpl() = default;

  /// Value at t; callers guarantee t lies in domain().
  virtual Value eval(double t) const = 0;
  /// Value at base + offset, where offset may lie below the floating-point
  /// resolution of base. Representations defined in terms of t - base (a
  /// power anchored at the lower terminal, say) override this to stay exact.
  virtual Value eval_offset(double base, double offset) const { return eval(base + offset); }
  /// Closed-form first derivative, when the representation carries one.
  virtual std::optional<Value> exact_derivative(double /*t*/) const { return std::nullopt; }
  /// Extra absolute uncertainty attached to derivatives of data-defined
  /// functions (interpolation error). Zero for analytic representations.
  virtual double derivative_uncertainty(double /*t*/) const { return 0.0; }
  virtual Shape shape() const = 0;
  virtual Interval domain() const { return Interval::real_line(); }
  virtual std::string describe() const = 0;
};

/// Shared, immutable handle to a function representation.
class Function {
 public:
  explicit Function(std::shared_ptr<const FunctionImpl> impl);

  /// Value at t; DomainError outside the domain or on a non-finite result.
  Value eval(double t) const;
  Value operator()(double t) const { return eval(t); }
  /// f(base + offset) without rounding base + offset first, where the
  /// representation allows it. Same checks as eval.
  Value eval_offset(double base, double offset) const;

  /// Symbolic derivative (expressions, builtins and their compositions);
  /// std::nullopt for sampled data.
  std::optional<Value> exact_first_deriv(double t) const;
  double derivative_uncertainty(double t) const { return impl_->derivative_uncertainty(t); }

  Shape shape() const { return impl_->shape(); }
  Interval domain() const { return impl_->domain(); }
  std::string describe() const { return impl_->describe(); }
  const FunctionImpl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const FunctionImpl> impl_;
};

// ---- sampled data ----------------------------------------------------------

enum class InterpKind { linear, cubic_hermite };

/// Piecewise interpolant through strictly increasing nodes. Hermite slopes
/// come from the three-point formula on the (possibly non-uniform) grid, so
/// the interpolant reproduces quadratic data exactly.
class GridFn {
 public:
  GridFn(std::vector<double> nodes, std::vector<Value> values, InterpKind kind);

  Value eval(double t) const;
  /// Derivative of the interpolant (one-sided from the right at nodes).
  Value slope(double t) const;
  double derivative_uncertainty(double t) const;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<Value>& values() const { return values_; }
  InterpKind kind() const { return kind_; }
  Shape shape() const { return values_.front().shape(); }

 private:
  std::size_t segment(double t) const;

  std::vector<double> nodes_;
  std::vector<Value> values_;
  std::vector<Value> slopes_;
  InterpKind kind_;
};

/// Reads `t,v0[,v1,...]` CSV (header required). One value column gives a
/// scalar function, several give a vector-valued one.
GridFn read_grid_csv(std::istream& in, InterpKind kind);
GridFn read_grid_csv_file(const std::string& path, InterpKind kind);

// ---- constructors ----------------------------------------------------------

Function make_expr(ExprFn expr, Interval domain = Interval::real_line());
Function make_expr(std::string_view text, Interval domain = Interval::real_line());
Function make_grid(GridFn grid);
Function make_constant(const Value& c);

/// Closed-form families with exact derivatives:
///   one, zero, t, t2, exp, sin, cos, tsin (t sin t),
///   const:c, pow:p[:shift] ((t-shift)^p on [shift, inf)),
///   abs[:c] (|t-c|), step[:c] (0 below c, 1 from c on),
///   sinlog[:shift] (sin(log(t-shift)) on (shift, inf)),
///   recip[:shift] (1/(t-shift) on (shift, inf)).
Function make_builtin(std::string_view spec);
std::vector<std::string> builtin_names();

using ValueFn = std::function<Value(double)>;
Function make_callable(ValueFn fn, Shape shape, Interval domain, std::string description,
                       ValueFn derivative = nullptr);

/// R^n-valued function from n scalar components.
Function make_vector(std::vector<Function> components);
/// Diagonal-matrix-valued function from n scalar diagonal entries.
Function make_diag(std::vector<Function> diagonal);

/// c*f + d*g.
Function linear_combination(double c, const Function& f, double d, const Function& g);
/// Pointwise algebra product f(t) g(t).
Function product(const Function& f, const Function& g);
/// Pointwise f(t) g(t)^{-1}.
Function quotient(const Function& f, const Function& g);
/// f with its value at the single point t0 replaced by v.
Function with_point_value(const Function& f, double t0, const Value& v);

}  // namespace confcalc
