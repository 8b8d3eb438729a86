#pragma once

// Conformable derivative and integral with lower terminal a and order
// alpha in (0, 1]:
//
//   T f(t) = lim_{theta -> 0} [f(t + theta (t - a)^(1 - alpha)) - f(t)] / theta,   t > a
//   I f(t) = int_a^t (s - a)^(alpha - 1) f(s) ds
//
// plus the classical derivative, the running-average limit and the
// limit of T f(t) as t -> a+ that defines the derivative at the terminal.

#include <optional>
#include <string>

#include "confcalc/extrapolation.hpp"
#include "confcalc/funcs.hpp"
#include "confcalc/vecspace.hpp"

namespace confcalc {

/// Order and lower terminal of a conformable operator.
class ConfParams {
 public:
  /// ParameterError unless alpha lies in (0, 1] and a is finite.
  ConfParams(double alpha, double a);

  double alpha() const { return alpha_; }
  double a() const { return a_; }

 private:
  double alpha_;
  double a_;
};

enum class Side { left, right, two_sided };

std::string to_string(Side side);
Side side_from_string(const std::string& s);

struct DerivResult {
  Value value;
  double err_estimate = 0.0;
  Side side = Side::two_sided;
  bool converged = false;
  int steps_used = 0;
  /// One-sided limits computed for a two-sided request.
  std::optional<Value> left;
  std::optional<Value> right;
  std::string diagnostics;
};

struct DerivOptions {
  /// Multiplies the initial theta; callers that need an evaluation with
  /// probe points disjoint from another one pass a different value.
  double step_scale = 1.0;
  /// When false a two-sided request returns the symmetric estimate only and
  /// skips the left/right existence test.
  bool check_sides = true;
  int max_rows = 12;
};

/// theta-limit of the defining difference quotient, extrapolated over a
/// halving step sequence. Two-sided requests also compute both one-sided
/// limits and report converged = false when they disagree.
DerivResult conf_deriv(const Function& f, const ConfParams& p, double t, Side side = Side::two_sided,
                       const Tolerance& tol = {}, const DerivOptions& opt = {});

/// (t - a)^(1 - alpha) f'(t) with f' symbolic when available and a
/// Richardson central difference otherwise.
DerivResult conf_deriv_scaled(const Function& f, const ConfParams& p, double t,
                              const Tolerance& tol = {});

/// Given T^alpha f(t0), return T^beta f(t0) = (t0 - a)^(alpha - beta) T^alpha f(t0).
Value convert_order(const Value& t_alpha, double alpha, double beta, double a, double t0);

struct TerminalOptions {
  /// First probe at a + approach_start * min(1, domain width above a).
  double approach_start = 0.1;
  double approach_ratio = 0.5;
  int max_terms = 40;
  /// Stop once this many consecutive prefixes give converged, agreeing limits.
  int stable_prefixes = 2;
};

/// lim_{t -> a+} T^alpha f(t), sampled on t_k = a + d r^k and extrapolated.
DerivResult lower_terminal_deriv(const Function& f, const ConfParams& p, const Tolerance& tol = {},
                                 const TerminalOptions& opt = {});

/// One-sided limit f(a+0) estimated along the same geometric approach.
LimitEstimate right_limit(const Function& f, double a, const Tolerance& tol = {},
                          const TerminalOptions& opt = {});

struct IntegralResult {
  Value value;
  double err = 0.0;
  int intervals = 0;
};

/// I^alpha_a f(t) through u = (s - a)^alpha, which turns the weakly singular
/// integral into (1/alpha) int_0^{(t-a)^alpha} f(a + u^(1/alpha)) du with a
/// bounded integrand. QuadratureError when adaptivity does not converge.
Value conf_integral(const Function& f, const ConfParams& p, double t, const Tolerance& tol = {});
IntegralResult conf_integral_ex(const Function& f, const ConfParams& p, double t,
                                const Tolerance& tol = {});
/// int_{t1}^{t2} (s - a)^(alpha - 1) f(s) ds for a <= t1 <= t2.
IntegralResult conf_integral_between(const Function& f, const ConfParams& p, double t1, double t2,
                                     const Tolerance& tol = {});

/// The upper-limit map t -> I^alpha_a f(t) as a Function on [a, hi]. With an
/// anchor t0 the map is evaluated as I(t0) plus the integral from t0, so
/// differences between nearby points carry no quadrature noise from [a, t0].
Function conf_integral_function(const Function& f, const ConfParams& p, const Tolerance& quad_tol,
                                std::optional<double> anchor = std::nullopt);

/// lim_{h -> 0+} (1/h) int_t^{t+h} f(s) ds.
Value avg_recover(const Function& f, double t, const Tolerance& tol = {});
LimitEstimate avg_recover_ex(const Function& f, double t, const Tolerance& tol = {});

/// Pointwise first derivative by Richardson-extrapolated differences;
/// one-sided near the edges of the domain.
DerivResult classical_deriv(const Function& f, double t, const Tolerance& tol = {},
                            const DerivOptions& opt = {});

}  // namespace confcalc
