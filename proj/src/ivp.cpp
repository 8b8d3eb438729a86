#include "confcalc/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confcalc/errors.hpp"
#include "confcalc/quadrature.hpp"

namespace confcalc {

namespace {

void check_problem(const IvpProblem& prob, int n_steps) {
  if (!prob.rhs) throw ParameterError("ivp: missing right-hand side");
  if (n_steps < 1) throw ParameterError("ivp: n_steps must be at least 1");
  if (!(prob.t_end > prob.p.a()) || !std::isfinite(prob.t_end)) {
    throw ParameterError("ivp: t_end must be finite and exceed the lower terminal");
  }
  if (!prob.x0.is_finite()) throw ParameterError("ivp: non-finite initial value");
}

struct Grid {
  std::vector<double> tau;
  std::vector<double> t;
  double dtau;
};

Grid uniform_grid(const IvpProblem& prob, int n) {
  Grid g;
  const double a = prob.p.a();
  const double tau_end = tau_of(prob.p, prob.t_end);
  g.dtau = tau_end / n;
  const bool classical = prob.p.alpha() == 1.0;
  if (classical) g.dtau = (prob.t_end - a) / n;
  for (int i = 0; i <= n; ++i) {
    g.tau.push_back(i * g.dtau);
    g.t.push_back(classical ? a + i * g.dtau : t_of(prob.p, i * g.dtau));
  }
  g.tau.back() = classical ? prob.t_end - a : tau_end;
  return g;
}

Value call_rhs(const IvpProblem& prob, double t, const Value& x, long& evals) {
  ++evals;
  Value v;
  try {
    v = prob.rhs(t, x);
  } catch (const Error& e) {
    std::ostringstream os;
    os.precision(17);
    os << "rhs failed at t = " << t << ", x = " << to_string(x) << ": " << e.what();
    throw DomainError(os.str());
  }
  if (v.shape() != prob.x0.shape()) throw ShapeError("rhs returned " + v.shape().str() + ", state is " +
                                                     prob.x0.shape().str());
  if (!v.is_finite()) {
    std::ostringstream os;
    os.precision(17);
    os << "rhs not finite at t = " << t << ", x = " << to_string(x);
    throw DomainError(os.str());
  }
  return v;
}

// Cubic Hermite on [0, h] in local coordinate s.
Value hermite(const Value& x0, const Value& d0, const Value& x1, const Value& d1, double h, double s) {
  const double u = s / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  return axpy(h00, x0, 1.0, axpy(h10 * h, d0, 1.0, axpy(h01, x1, h11 * h, d1)));
}

Value hermite_slope(const Value& x0, const Value& d0, const Value& x1, const Value& d1, double h, double s) {
  const double u = s / h;
  const double d00 = 6 * u * (u - 1) / h;
  const double d10 = (1 - u) * (1 - 3 * u);
  const double d01 = -d00;
  const double d11 = u * (3 * u - 2);
  return axpy(d00, x0, 1.0, axpy(d10, d0, 1.0, axpy(d01, x1, d11, d1)));
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

double tau_of(const ConfParams& p, double t) {
  if (t < p.a()) throw LowerTerminalError("tau_of: t below the lower terminal");
  return std::pow(t - p.a(), p.alpha()) / p.alpha();
}

double t_of(const ConfParams& p, double tau) {
  if (tau < 0.0) throw ParameterError("t_of: negative tau");
  if (p.alpha() == 1.0) return p.a() + tau;
  return p.a() + std::pow(p.alpha() * tau, 1.0 / p.alpha());
}

Trajectory solve_tau(const IvpProblem& prob, int n_steps) {
  check_problem(prob, n_steps);
  const Grid g = uniform_grid(prob, n_steps);
  const bool classical = prob.p.alpha() == 1.0;
  const double h = g.dtau;

  Trajectory out;
  out.method = "rk4-tau";
  out.alpha = prob.p.alpha();
  out.a = prob.p.a();
  out.t = g.t;
  out.t.back() = prob.t_end;
  out.tau = g.tau;
  out.x.reserve(g.t.size());
  out.slope.reserve(g.t.size());

  long evals = 0;
  Value x = prob.x0;
  out.x.push_back(x);
  for (int i = 0; i < n_steps; ++i) {
    const double ti = g.t[i];
    const double t_half = classical ? ti + h / 2 : t_of(prob.p, g.tau[i] + h / 2);
    const double t_next = classical ? ti + h : t_of(prob.p, g.tau[i] + h);
    const Value k1 = call_rhs(prob, ti, x, evals);
    const Value k2 = call_rhs(prob, t_half, x + (h / 2) * k1, evals);
    const Value k3 = call_rhs(prob, t_half, x + (h / 2) * k2, evals);
    const Value k4 = call_rhs(prob, t_next, x + h * k3, evals);
    out.slope.push_back(k1);
    x = x + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.x.push_back(x);
  }
  out.slope.push_back(call_rhs(prob, out.t.back(), x, evals));
  out.stats.steps = n_steps;
  out.stats.rhs_evals = evals;
  return out;
}

Trajectory solve_volterra(const IvpProblem& prob, int n_steps, const Tolerance& tol, int max_iter) {
  check_problem(prob, n_steps);
  validate(tol);
  if (max_iter < 1) throw ParameterError("solve_volterra: max_iter must be at least 1");
  const Grid g = uniform_grid(prob, n_steps);
  const std::size_t n = g.t.size();
  const GaussLegendreRule rule = gauss_legendre(5);

  Trajectory out;
  out.method = "picard-volterra";
  out.alpha = prob.p.alpha();
  out.a = prob.p.a();
  out.t = g.t;
  out.t.back() = prob.t_end;
  out.tau = g.tau;

  long evals = 0;
  std::vector<Value> x(n, prob.x0);
  std::vector<Value> slope(n);
  for (std::size_t j = 0; j < n; ++j) slope[j] = call_rhs(prob, out.t[j], x[j], evals);

  double prev_update = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::vector<Value> next(n);
    next[0] = prob.x0;
    Value acc = Value::zeros(prob.x0.shape());
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double h = g.tau[j + 1] - g.tau[j];
      Value cell = Value::zeros(prob.x0.shape());
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = 0.5 * h * (rule.nodes[q] + 1.0);
        const Value xi = hermite(x[j], slope[j], x[j + 1], slope[j + 1], h, s);
        const double ts = t_of(prob.p, g.tau[j] + s);
        cell = axpy(1.0, cell, rule.weights[q], call_rhs(prob, ts, xi, evals));
      }
      acc = axpy(1.0, acc, 0.5 * h, cell);
      next[j + 1] = prob.x0 + acc;
    }

    double update = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      update = std::max(update, distance(next[j], x[j]));
      scale = std::max(scale, norm(next[j]));
    }
    x = std::move(next);
    for (std::size_t j = 0; j < n; ++j) slope[j] = call_rhs(prob, out.t[j], x[j], evals);
    out.stats.iterations = iter;
    out.stats.last_update = update;
    if (!std::isfinite(update)) throw ConvergenceError("Picard iteration produced non-finite values");
    if (update <= tol.threshold(scale)) {
      out.x = std::move(x);
      out.slope = std::move(slope);
      out.stats.steps = n_steps;
      out.stats.rhs_evals = evals;
      return out;
    }
    // Superlinear Picard convergence only sets in after ~L tau iterations,
    // so growth is judged over several maps.
    growth = update > prev_update ? growth + 1 : 0;
    if (growth >= 10) {
      throw ConvergenceError("Picard iteration is not contracting (update " + num(update) + " after " +
                             std::to_string(iter) + " iterations)");
    }
    prev_update = update;
  }
  throw ConvergenceError("Picard iteration did not converge in " + std::to_string(max_iter) +
                         " iterations (last update " + num(out.stats.last_update) + ")");
}

double cross_validate(const IvpProblem& prob, int n_steps, const Tolerance& tol) {
  const Trajectory a = solve_tau(prob, n_steps);
  const Trajectory b = solve_volterra(prob, n_steps, tol);
  double dev = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) dev = std::max(dev, distance(a.x[i], b.x[i]));
  return dev;
}

Function trajectory_function(const Trajectory& traj) {
  if (traj.t.size() < 2) throw ParameterError("trajectory_function: need at least two nodes");
  const ConfParams p(traj.alpha, traj.a);
  const auto locate = [traj](double t) {
    const auto it = std::upper_bound(traj.t.begin(), traj.t.end(), t);
    std::size_t j = it == traj.t.begin() ? 0 : static_cast<std::size_t>(it - traj.t.begin()) - 1;
    return std::min(j, traj.t.size() - 2);
  };
  const auto value = [traj, p, locate](double t) {
    const std::size_t j = locate(t);
    const double h = traj.tau[j + 1] - traj.tau[j];
    const double s = std::clamp(tau_of(p, t) - traj.tau[j], 0.0, h);
    return hermite(traj.x[j], traj.slope[j], traj.x[j + 1], traj.slope[j + 1], h, s);
  };
  const auto derivative = [traj, p, locate](double t) {
    const std::size_t j = locate(t);
    const double h = traj.tau[j + 1] - traj.tau[j];
    const double s = std::clamp(tau_of(p, t) - traj.tau[j], 0.0, h);
    const Value dxdtau = hermite_slope(traj.x[j], traj.slope[j], traj.x[j + 1], traj.slope[j + 1], h, s);
    return std::pow(t - p.a(), p.alpha() - 1.0) * dxdtau;
  };
  return make_callable(value, traj.x.front().shape(), Interval{traj.t.front(), traj.t.back()},
                       "trajectory(" + traj.method + ")", derivative);
}

RhsFn rhs_from_exprs(const std::vector<std::string>& exprs) {
  if (exprs.empty()) throw ParameterError("rhs: no expressions");
  std::vector<std::string> vars{"t"};
  if (exprs.size() == 1) {
    vars.push_back("x");
  } else {
    for (std::size_t i = 0; i < exprs.size(); ++i) vars.push_back("x" + std::to_string(i));
  }
  std::vector<ExprFn> parsed;
  for (const auto& e : exprs) parsed.push_back(parse_expr(e, vars));
  const bool scalar = exprs.size() == 1;
  return [parsed, scalar](double t, const Value& x) {
    if (x.size() != parsed.size()) throw ShapeError("rhs: state has the wrong number of components");
    std::vector<double> args{t};
    args.insert(args.end(), x.components().begin(), x.components().end());
    if (scalar) return Value(parsed[0].eval(args));
    std::vector<double> out;
    out.reserve(parsed.size());
    for (const auto& e : parsed) out.push_back(e.eval(args));
    return Value::vector(std::move(out));
  };
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os.precision(17);
  os << "t";
  const std::size_t m = traj.x.empty() ? 0 : traj.x.front().size();
  for (std::size_t k = 0; k < m; ++k) os << ",x" << k;
  os << '\n';
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    os << traj.t[i];
    for (double v : traj.x[i].components()) os << ',' << v;
    os << '\n';
  }
}

nlohmann::json to_json(const Trajectory& traj) {
  nlohmann::json xs = nlohmann::json::array();
  for (const auto& v : traj.x) xs.push_back(to_json(v));
  return {{"method", traj.method},
          {"alpha", traj.alpha},
          {"a", traj.a},
          {"stats",
           {{"steps", traj.stats.steps},
            {"rhs_evals", traj.stats.rhs_evals},
            {"iterations", traj.stats.iterations},
            {"last_update", traj.stats.last_update}}},
          {"t", traj.t},
          {"tau", traj.tau},
          {"x", xs}};
}

}  // namespace confcalc
