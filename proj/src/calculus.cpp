#include "confcalc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "confcalc/errors.hpp"
#include "confcalc/quadrature.hpp"

namespace confcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nominal first probe distance |t_probe - t|, before clamping to the
// admissible neighbourhood.
double nominal_step(double t) { return 0.1 * std::max(1.0, std::abs(t)); }

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

struct Neighbourhood {
  double left = 0.0;   // largest admissible probe distance below t
  double right = 0.0;  // and above t
};

// Limit of the difference quotients of f at t along probes t + theta*scale.
DerivResult theta_limit_from(const Function& f, double t, double scale, const Neighbourhood& room,
                             Side side, const Tolerance& tol, const DerivOptions& opt, double h_nom) {
  const Value ft = f.eval(t);
  const auto first_theta = [&](double r) { return std::min(h_nom, r) / scale * opt.step_scale; };
  // Never halve the probe distance below a few dozen ulps of t.
  const double ulp = std::nextafter(std::abs(t), kInf) - std::abs(t);
  const auto rows_for = [&](double theta0) {
    int rows = opt.max_rows;
    while (rows > 2 && std::ldexp(theta0 * scale, -(rows - 1)) < 64.0 * ulp) --rows;
    return rows;
  };
  const auto one_sided = [&](double theta0) { return RichardsonOptions{1, rows_for(theta0), 2.0, 6}; };
  const auto symmetric = [&](double theta0) { return RichardsonOptions{2, rows_for(theta0), 2.0, 6}; };

  // Quotients divide by the step actually taken, x - t, which is exact in
  // floating point, rather than by the nominal theta.
  const auto forward = [&](double th) {
    const double x = t + th * scale;
    return (f.eval(x) - ft) / ((x - t) / scale);
  };
  const auto backward = [&](double th) {
    const double x = t - th * scale;
    return (f.eval(x) - ft) / ((x - t) / scale);
  };
  const auto central = [&](double th) {
    const double xp = t + th * scale;
    const double xm = t - th * scale;
    return (f.eval(xp) - f.eval(xm)) / ((xp - xm) / scale);
  };

  DerivResult out;
  out.side = side;
  if (side == Side::right || side == Side::left) {
    const double th0 = first_theta(side == Side::right ? room.right : room.left);
    const LimitEstimate e = side == Side::right ? richardson_limit(forward, th0, tol, one_sided(th0))
                                                : richardson_limit(backward, th0, tol, one_sided(th0));
    out.value = e.value;
    out.err_estimate = e.err;
    out.converged = e.converged;
    out.steps_used = e.steps;
    out.diagnostics = e.diagnostics;
  } else {
    const double th0 = first_theta(std::min(room.left, room.right));
    const LimitEstimate sym = richardson_limit(central, th0, tol, symmetric(th0));
    out.value = sym.value;
    out.err_estimate = sym.err;
    out.converged = sym.converged;
    out.steps_used = sym.steps;
    out.diagnostics = sym.diagnostics;
    if (opt.check_sides) {
      const double thl = first_theta(room.left);
      const double thr = first_theta(room.right);
      const LimitEstimate l = richardson_limit(backward, thl, tol, one_sided(thl));
      const LimitEstimate r = richardson_limit(forward, thr, tol, one_sided(thr));
      out.left = l.value;
      out.right = r.value;
      const double gap = distance(l.value, r.value);
      if (!(gap <= 2.0 * tol.threshold(norm(sym.value)))) {
        out.converged = false;
        out.diagnostics = "left and right limits differ by " + num(gap);
      } else if (!sym.converged && l.converged && r.converged) {
        // A jump in a higher derivative at t spoils the symmetric expansion
        // but not the one-sided ones; agreeing sides settle the limit.
        out.value = axpy(0.5, l.value, 0.5, r.value);
        out.err_estimate = std::max({l.err, r.err, 0.5 * gap});
        out.converged = out.err_estimate <= tol.threshold(norm(out.value));
        out.steps_used = std::max(l.steps, r.steps);
        out.diagnostics = out.converged ? std::string() : sym.diagnostics;
      }
    }
  }
  return out;
}

// A singularity or a fast oscillation within the first probe distance
// spoils the tableau, so a failed attempt is repeated from much smaller
// steps before the limit is declared not to exist.
DerivResult theta_limit(const Function& f, double t, double scale, const Neighbourhood& room,
                        Side side, const Tolerance& tol, const DerivOptions& opt) {
  double h_nom = nominal_step(t);
  DerivResult out = theta_limit_from(f, t, scale, room, side, tol, opt, h_nom);
  for (int attempt = 1; attempt < 3 && !out.converged; ++attempt) {
    h_nom /= 16.0;
    DerivResult retry = theta_limit_from(f, t, scale, room, side, tol, opt, h_nom);
    if (retry.converged) out = std::move(retry);
  }

  const double extra = scale * f.derivative_uncertainty(t);
  if (extra > 0.0) {
    out.err_estimate += extra;
    if (out.err_estimate > tol.threshold(norm(out.value))) {
      out.converged = false;
      if (out.diagnostics.empty()) out.diagnostics = "interpolation uncertainty exceeds tolerance";
    }
  }
  return out;
}

void require_above_terminal(double t, double a, const char* op) {
  if (!(t > a)) {
    throw LowerTerminalError(std::string(op) + ": t = " + num(t) +
                             " must exceed the lower terminal a = " + num(a));
  }
}

void require_in_domain(const Function& f, double t, const char* op) {
  if (!f.domain().contains(t)) {
    throw DomainError(std::string(op) + ": t = " + num(t) + " outside the domain of " + f.describe());
  }
}

// Geometric approach t_k = a + d r^k towards the lower terminal.
double approach_start(const Function& f, double a, const TerminalOptions& opt) {
  const Interval dom = f.domain();
  const double width = dom.hi - a;
  if (!(width > 0.0)) throw DomainError("function undefined to the right of a = " + num(a));
  const double d = opt.approach_start * std::min(1.0, width);
  const double deepest = d * std::pow(opt.approach_ratio, opt.max_terms - 1);
  if (dom.lo > a + deepest) {
    throw DomainError("function undefined on (a, a + eps) for a = " + num(a));
  }
  return d;
}

}  // namespace

ConfParams::ConfParams(double alpha, double a) : alpha_(alpha), a_(a) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("order alpha = " + num(alpha) + " must lie in (0, 1]");
  }
  if (!std::isfinite(a)) throw ParameterError("lower terminal must be finite");
}

std::string to_string(Side side) {
  switch (side) {
    case Side::left:
      return "left";
    case Side::right:
      return "right";
    case Side::two_sided:
      return "two-sided";
  }
  return "?";
}

Side side_from_string(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  if (s == "two-sided" || s == "two_sided" || s == "both") return Side::two_sided;
  throw ParameterError("unknown side '" + s + "'");
}

DerivResult conf_deriv(const Function& f, const ConfParams& p, double t, Side side,
                       const Tolerance& tol, const DerivOptions& opt) {
  validate(tol);
  require_above_terminal(t, p.a(), "conf_deriv");
  require_in_domain(f, t, "conf_deriv");
  const Interval dom = f.domain();
  Neighbourhood room;
  room.left = std::min(0.5 * (t - p.a()), 0.9 * (t - dom.lo));
  // Functions built around the terminal are typically singular there, so
  // t - a is also the natural length scale on the right.
  room.right = std::min(0.5 * (t - p.a()), std::isfinite(dom.hi) ? 0.9 * (dom.hi - t) : kInf);
  if ((side != Side::right && !(room.left > 0.0)) || (side != Side::left && !(room.right > 0.0))) {
    throw DomainError("conf_deriv: no " + to_string(side) + " neighbourhood of t = " + num(t) +
                      " inside the domain");
  }
  const double scale = std::pow(t - p.a(), 1.0 - p.alpha());
  return theta_limit(f, t, scale, room, side, tol, opt);
}

DerivResult conf_deriv_scaled(const Function& f, const ConfParams& p, double t, const Tolerance& tol) {
  validate(tol);
  require_above_terminal(t, p.a(), "conf_deriv_scaled");
  const double scale = std::pow(t - p.a(), 1.0 - p.alpha());
  DerivResult out;
  out.side = Side::two_sided;
  if (auto d = f.exact_first_deriv(t)) {
    out.value = scale * *d;
    out.err_estimate = 4.0 * std::numeric_limits<double>::epsilon() * norm(out.value);
    out.converged = true;
    out.steps_used = 0;
    return out;
  }
  DerivResult c = classical_deriv(f, t, tol);
  out.value = scale * c.value;
  out.err_estimate = scale * c.err_estimate;
  out.converged = c.converged && out.err_estimate <= tol.threshold(norm(out.value));
  out.steps_used = c.steps_used;
  out.side = c.side;
  out.diagnostics = c.diagnostics;
  if (c.left) out.left = scale * *c.left;
  if (c.right) out.right = scale * *c.right;
  return out;
}

Value convert_order(const Value& t_alpha, double alpha, double beta, double a, double t0) {
  const ConfParams from(alpha, a);
  const ConfParams to(beta, a);
  require_above_terminal(t0, a, "convert_order");
  if (alpha == beta) return t_alpha;
  return std::pow(t0 - a, from.alpha() - to.alpha()) * t_alpha;
}

DerivResult lower_terminal_deriv(const Function& f, const ConfParams& p, const Tolerance& tol,
                                 const TerminalOptions& opt) {
  validate(tol);
  const double a = p.a();
  const double d = approach_start(f, a, opt);

  std::vector<Value> seq;
  DerivResult out;
  out.side = Side::right;
  LimitEstimate best;
  bool have_best = false;
  int stable = 0;
  std::string stop_reason;

  double tk = a + d;
  for (int k = 0; k < opt.max_terms; ++k, tk = a + d * std::pow(opt.approach_ratio, k)) {
    DerivResult dk;
    try {
      dk = conf_deriv(f, p, tk, Side::two_sided, tol);
    } catch (const DomainError& e) {
      stop_reason = e.what();
      break;
    }
    if (!dk.converged) {
      if (seq.size() < 3) {
        out.value = dk.value;
        out.err_estimate = kInf;
        out.converged = false;
        out.steps_used = k + 1;
        out.diagnostics = "not differentiable of order alpha at t = " + num(tk) + ": " + dk.diagnostics;
        return out;
      }
      stop_reason = "precision exhausted at t = " + num(tk);
      break;
    }
    seq.push_back(dk.value);
    if (seq.size() < 3) continue;

    const LimitEstimate est = sequence_limit(seq, tol);
    if (est.converged) {
      if (have_best && close_componentwise(est.value, best.value, tol)) {
        ++stable;
      } else {
        stable = 1;
      }
      best = est;
      have_best = true;
      if (stable >= opt.stable_prefixes) break;
    } else {
      stable = 0;
      if (!have_best || !best.converged) {
        best = est;
        have_best = true;
      }
    }
  }

  if (!have_best) {
    out.value = seq.empty() ? Value::zeros(f.shape()) : seq.back();
    out.err_estimate = kInf;
    out.converged = false;
    out.steps_used = static_cast<int>(seq.size());
    out.diagnostics = "too few terms of the approach sequence" +
                      (stop_reason.empty() ? std::string() : ": " + stop_reason);
    return out;
  }
  out.value = best.value;
  out.err_estimate = best.err;
  out.converged = best.converged && stable >= 1;
  out.steps_used = static_cast<int>(seq.size());
  out.diagnostics = best.converged ? std::string() : "limit as t -> a+ does not exist numerically: " +
                                                         best.diagnostics;
  return out;
}

LimitEstimate right_limit(const Function& f, double a, const Tolerance& tol, const TerminalOptions& opt) {
  validate(tol);
  const double d = approach_start(f, a, opt);
  std::vector<Value> seq;
  LimitEstimate best;
  best.err = kInf;
  bool have_best = false;
  int stable = 0;
  for (int k = 0; k < opt.max_terms; ++k) {
    const double tk = a + d * std::pow(opt.approach_ratio, k);
    if (!(tk > a)) break;
    seq.push_back(f.eval(tk));
    if (seq.size() < 3) continue;
    const LimitEstimate est = sequence_limit(seq, tol);
    if (est.converged) {
      stable = (have_best && best.converged &&
                close_componentwise(est.value, best.value, tol))
                   ? stable + 1
                   : 1;
      best = est;
      have_best = true;
      if (stable >= opt.stable_prefixes) break;
    } else {
      stable = 0;
      if (!have_best || !best.converged) {
        best = est;
        have_best = true;
      }
    }
  }
  if (!have_best) {
    best.value = seq.empty() ? Value::zeros(f.shape()) : seq.back();
    best.diagnostics = "too few terms";
  }
  best.steps = static_cast<int>(seq.size());
  return best;
}

IntegralResult conf_integral_between(const Function& f, const ConfParams& p, double t1, double t2,
                                     const Tolerance& tol) {
  validate(tol);
  const double a = p.a();
  if (t1 < a) throw LowerTerminalError("conf_integral: t = " + num(t1) + " below the lower terminal");
  if (t2 < t1) throw ParameterError("conf_integral_between: t2 < t1");
  IntegralResult out;
  if (t2 == t1) {
    out.value = Value::zeros(f.shape());
    return out;
  }
  const Interval dom = f.domain();
  if (dom.hi < t2) throw DomainError("conf_integral: upper limit outside the domain of " + f.describe());

  const double alpha = p.alpha();
  const double inv_alpha = 1.0 / alpha;
  const double u1 = std::pow(t1 - a, alpha);
  const double u2 = std::pow(t2 - a, alpha);
  // f is sampled at a + offset without forming a + offset first: near the
  // terminal the offset can be far below the resolution of a.
  const double lo = t1 - a;
  const double hi = t2 - a;
  const auto integrand = [&](double u) {
    const double off = alpha == 1.0 ? u : std::pow(u, inv_alpha);
    return f.eval_offset(a, std::clamp(off, lo, hi));
  };
  // Rescale the tolerance so that it applies to the final result.
  const Tolerance inner{tol.rel, tol.abs * alpha};
  const QuadResult q = integrate(integrand, u1, u2, inner);
  if (!q.converged) {
    throw QuadratureError("conf_integral: adaptive quadrature did not converge (error estimate " +
                              num(q.err * inv_alpha) + ")",
                          q.err * inv_alpha);
  }
  out.value = inv_alpha * q.value;
  out.err = q.err * inv_alpha;
  out.intervals = q.intervals;
  return out;
}

IntegralResult conf_integral_ex(const Function& f, const ConfParams& p, double t, const Tolerance& tol) {
  if (t < p.a()) {
    throw LowerTerminalError("conf_integral: t = " + num(t) + " below the lower terminal a = " + num(p.a()));
  }
  return conf_integral_between(f, p, p.a(), t, tol);
}

Value conf_integral(const Function& f, const ConfParams& p, double t, const Tolerance& tol) {
  return conf_integral_ex(f, p, t, tol).value;
}

Function conf_integral_function(const Function& f, const ConfParams& p, const Tolerance& quad_tol,
                                std::optional<double> anchor) {
  validate(quad_tol);
  Interval dom{p.a(), f.domain().hi};
  const std::string desc = "I[" + num(p.alpha()) + ", " + num(p.a()) + "](" + f.describe() + ")";
  if (!anchor) {
    return make_callable([f, p, quad_tol](double t) { return conf_integral(f, p, t, quad_tol); },
                         f.shape(), dom, desc);
  }
  const double t0 = *anchor;
  if (!dom.contains(t0)) throw DomainError("conf_integral_function: anchor outside [a, hi]");
  const Value base = conf_integral(f, p, t0, quad_tol);
  return make_callable(
      [f, p, quad_tol, t0, base](double t) {
        if (t >= t0) return base + conf_integral_between(f, p, t0, t, quad_tol).value;
        return base - conf_integral_between(f, p, t, t0, quad_tol).value;
      },
      f.shape(), dom, desc);
}

LimitEstimate avg_recover_ex(const Function& f, double t, const Tolerance& tol) {
  validate(tol);
  const Interval dom = f.domain();
  if (!dom.interior(t)) throw DomainError("avg_recover: t = " + num(t) + " not interior to the domain");
  const double room = std::isfinite(dom.hi) ? 0.9 * (dom.hi - t) : kInf;
  const double h0 = std::min(nominal_step(t), room);
  const Tolerance quad_tol{1e-13, 1e-300};
  const auto average = [&](double h) {
    const QuadResult q = integrate([&](double s) { return f.eval(s); }, t, t + h, quad_tol);
    return q.value / h;
  };
  return richardson_limit(average, h0, tol, RichardsonOptions{1, 12, 2.0, 4});
}

Value avg_recover(const Function& f, double t, const Tolerance& tol) {
  return avg_recover_ex(f, t, tol).value;
}

DerivResult classical_deriv(const Function& f, double t, const Tolerance& tol, const DerivOptions& opt) {
  validate(tol);
  require_in_domain(f, t, "classical_deriv");
  const Interval dom = f.domain();
  Neighbourhood room;
  room.left = std::isfinite(dom.lo) ? 0.9 * (t - dom.lo) : kInf;
  room.right = std::isfinite(dom.hi) ? 0.9 * (dom.hi - t) : kInf;
  Side side = Side::two_sided;
  if (!(room.left > 0.0) && !(room.right > 0.0)) {
    throw DomainError("classical_deriv: no neighbourhood of t = " + num(t) + " inside the domain");
  }
  if (!(room.left > 0.0)) side = Side::right;
  if (!(room.right > 0.0)) side = Side::left;
  return theta_limit(f, t, 1.0, room, side, tol, opt);
}

}  // namespace confcalc
