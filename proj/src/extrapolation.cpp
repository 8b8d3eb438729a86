#include "confcalc/extrapolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "confcalc/errors.hpp"

namespace confcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ComponentLimit {
  double value;
  double err;
};

// Wynn's epsilon table for one scalar sequence. Even columns hold the
// extrapolated estimates; the error of a candidate is its spread against the
// two preceding entries of the same column.
ComponentLimit wynn(const std::vector<double>& s) {
  const std::size_t n = s.size();
  ComponentLimit best{s.back(), n >= 2 ? std::abs(s[n - 1] - s[n - 2]) : kInf};

  double scale = 0.0;
  for (double x : s) scale = std::max(scale, std::abs(x));
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

  std::vector<double> prev(n + 1, 0.0);  // column -1
  std::vector<double> cur = s;            // column 0
  for (std::size_t col = 1; col < n; ++col) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
      const double d = cur[k + 1] - cur[k];
      // Odd columns are reciprocal differences of values; even columns are
      // estimates. A vanishing difference in an even column means the
      // estimates already agree to rounding.
      if (col % 2 == 1 && std::abs(d) <= noise) return best;
      if (d == 0.0 || !std::isfinite(d)) return best;
      next[k] = prev[k + 1] + 1.0 / d;
    }
    if (col % 2 == 0) {
      if (next.size() < 2) return best;
      const double est = next.back();
      double err = std::abs(est - next[next.size() - 2]);
      if (next.size() >= 3) err = std::max(err, std::abs(est - next[next.size() - 3]));
      if (std::isfinite(est) && err < best.err) best = {est, err};
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (cur.size() < 2) break;
  }
  return best;
}

}  // namespace

void validate(const Tolerance& tol) {
  if (!(tol.rel > 0.0) || !(tol.abs > 0.0) || !std::isfinite(tol.rel) || !std::isfinite(tol.abs)) {
    throw ParameterError("tolerances must be positive and finite");
  }
}

LimitEstimate richardson_limit(const std::function<Value(double)>& F, double h0,
                               const Tolerance& tol, const RichardsonOptions& opt) {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw ParameterError("richardson_limit: bad initial step");
  const double ratio = std::ldexp(1.0, opt.power_step);  // 2^p for halving

  double h = h0;
  std::vector<Value> above{F(h)};
  LimitEstimate out;
  out.value = above[0];
  out.err = kInf;
  out.steps = 1;
  int drifting = 0;

  for (int i = 1; i < opt.max_rows; ++i) {
    h *= 0.5;
    std::vector<Value> row;
    row.reserve(static_cast<std::size_t>(i) + 1);
    row.push_back(F(h));
    double fac = ratio;
    for (int j = 1; j <= i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      row.push_back(axpy(fac / (fac - 1.0), row[uj - 1], -1.0 / (fac - 1.0), above[uj - 1]));
      fac *= ratio;
      const double e = std::max(distance(row[uj], row[uj - 1]), distance(row[uj], above[uj - 1]));
      if (e <= out.err) {
        out.err = e;
        out.value = row[uj];
      }
    }
    out.steps = i + 1;
    const auto ui = static_cast<std::size_t>(i);
    // Two drifting rows in a row mean rounding has taken over; a single one
    // is often just the pre-asymptotic regime of a large first step.
    if (distance(row[ui], above[ui - 1]) >= opt.safe * out.err) {
      if (++drifting >= 2 && i + 1 >= opt.min_rows) break;
    } else {
      drifting = 0;
    }
    above = std::move(row);
  }
  out.converged = out.err <= tol.threshold(norm(out.value));
  if (!out.converged) {
    out.diagnostics = "extrapolation stalled at error " + std::to_string(out.err);
  }
  return out;
}

LimitEstimate sequence_limit(std::span<const Value> seq, const Tolerance& tol) {
  LimitEstimate out;
  if (seq.empty()) {
    out.err = kInf;
    out.diagnostics = "empty sequence";
    return out;
  }
  const std::size_t n = seq.size();
  out.value = seq.back();
  out.steps = static_cast<int>(n);
  out.err = kInf;
  if (n < 3) {
    out.diagnostics = "too few terms";
    return out;
  }

  // Every test below runs per component, so a function with replicated
  // components takes exactly the decisions its scalar counterpart takes.
  const Shape shape = seq.front().shape();
  const std::size_t window = std::min<std::size_t>(6, n - 1);
  std::vector<double> comp(n);
  std::vector<double> diffs(n - 1);
  std::vector<double> values(shape.size());
  double err2 = 0.0;
  bool converged = true;
  for (std::size_t c = 0; c < shape.size(); ++c) {
    for (std::size_t k = 0; k < n; ++k) comp[k] = seq[k][c];
    for (std::size_t k = 0; k + 1 < n; ++k) diffs[k] = std::abs(comp[k + 1] - comp[k]);

    // The tail of the step sizes must shrink; growth or oscillation means
    // the limit does not exist and any extrapolation would be an antilimit.
    // Steps already below tolerance are rounding noise and carry no
    // information.
    const double floor = 0.5 * tol.threshold(std::abs(comp.back()));
    for (std::size_t k = n - 1 - window; k + 2 < n; ++k) {
      if (diffs[k] <= floor && diffs[k + 1] <= floor) continue;
      if (diffs[k + 1] >= diffs[k]) {
        out.diagnostics = "sequence steps do not decay (ratio " +
                          std::to_string(diffs[k] > 0 ? diffs[k + 1] / diffs[k] : kInf) + ")";
        out.err = kInf;
        return out;
      }
    }

    const ComponentLimit lim = wynn(comp);
    values[c] = lim.value;
    err2 += lim.err * lim.err;
    converged = converged && lim.err <= tol.threshold(std::abs(lim.value));
  }
  out.value = Value::from_components(shape, std::move(values));
  out.err = std::sqrt(err2);
  out.converged = converged;
  if (!out.converged) out.diagnostics = "extrapolated limit not stable to tolerance";
  return out;
}

bool close_componentwise(const Value& u, const Value& v, const Tolerance& tol) {
  if (!(u.shape() == v.shape())) throw ShapeError("close_componentwise: shape mismatch");
  for (std::size_t c = 0; c < u.size(); ++c) {
    if (!(std::abs(u[c] - v[c]) <= tol.threshold(std::abs(u[c])))) return false;
  }
  return true;
}

}  // namespace confcalc
