#pragma once

// Initial value problems T^alpha_a x(t) = F(t, x(t)), x(a) = x0.
//
// With tau = (t - a)^alpha / alpha the conformable derivative becomes
// dx/dtau, so the problem is the ordinary system dx/dtau = F(t(tau), x) with
// t(tau) = a + (alpha tau)^(1/alpha), which is regular at tau = 0 even when
// the t-form x' = (t - a)^(alpha - 1) F is not. solve_tau() integrates it with
// classical Runge-Kutta; solve_volterra() solves the equivalent integral
// equation x = x0 + I^alpha_a F(., x) by Picard iteration and serves as an
// independent check.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "confcalc/calculus.hpp"
#include "json.hpp"

namespace confcalc {

using RhsFn = std::function<Value(double t, const Value& x)>;

struct IvpProblem {
  RhsFn rhs;
  ConfParams p{1.0, 0.0};
  Value x0;
  double t_end = 1.0;
  std::string description;
};

struct SolveStats {
  int steps = 0;
  long rhs_evals = 0;
  /// Picard maps applied, the last of which confirmed convergence.
  int iterations = 0;
  /// Sup-norm change in the last Picard map.
  double last_update = 0.0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<double> tau;
  std::vector<Value> x;
  /// dx/dtau = F(t, x) at each node; equals T^alpha_a x there.
  std::vector<Value> slope;
  std::string method;
  SolveStats stats;
  double alpha = 1.0;
  double a = 0.0;
};

double tau_of(const ConfParams& p, double t);
double t_of(const ConfParams& p, double tau);

/// RK4 with n_steps uniform steps in tau:
///   x_{i+1} = x_i + (dtau / 6) (k1 + 2 k2 + 2 k3 + k4).
/// For alpha = 1 the stage times are t_i + dtau/2 and t_i + dtau with
/// t_i = a + i dtau, which makes the result bit-identical to classical RK4
/// on x' = F(t, x).
Trajectory solve_tau(const IvpProblem& prob, int n_steps);

/// Picard iteration on the nodes of the same uniform tau grid. Between
/// nodes iterates are cubic Hermite in tau with slopes F(t_j, x_j); each
/// increment of the conformable integral is a Gauss-Legendre rule in tau,
/// i.e. in u = (s - a)^alpha. Stops when successive iterates differ by at most
/// tol.threshold(sup |x|); ConvergenceError after max_iter maps or on growth.
Trajectory solve_volterra(const IvpProblem& prob, int n_steps, const Tolerance& tol = {},
                          int max_iter = 200);

/// sup over the shared nodes of |x_tau - x_volterra|.
double cross_validate(const IvpProblem& prob, int n_steps, const Tolerance& tol = {});

/// Cubic Hermite interpolant of the trajectory in tau, as a Function on
/// [a, t_end] with its exact t-derivative.
Function trajectory_function(const Trajectory& traj);

/// Right-hand side from expressions in t and x (scalar state, one
/// expression) or t and x0..x{n-1} (vector state, n expressions).
RhsFn rhs_from_exprs(const std::vector<std::string>& exprs);

void write_csv(std::ostream& os, const Trajectory& traj);
nlohmann::json to_json(const Trajectory& traj);

}  // namespace confcalc
