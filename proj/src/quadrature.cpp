#include "confcalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "confcalc/errors.hpp"

namespace confcalc {

namespace {

struct Panel {
  double lo, hi;
  Value left;   // rule on [lo, mid]
  Value right;  // rule on [mid, hi]
  Value sum;    // left + right, the accepted estimate
  double err;   // |sum - rule on [lo, hi]|
};

const GaussLegendreRule& cached_rule(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussLegendreRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

}  // namespace

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n == 0) throw ParameterError("gauss_legendre: order must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * static_cast<double>(j) - 1.0) * z * p2 - (static_cast<double>(j) - 1.0) * p3) /
             static_cast<double>(j);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadResult integrate(const std::function<Value(double)>& g, double lo, double hi,
                     const Tolerance& tol, const QuadOptions& opt) {
  validate(tol);
  if (!(hi >= lo)) throw ParameterError("integrate: interval end points out of order");
  const GaussLegendreRule& rule = cached_rule(opt.order);

  QuadResult out;
  const auto apply = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Value acc = rule.weights[0] * g(mid + half * rule.nodes[0]);
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
      acc = axpy(1.0, acc, rule.weights[i], g(mid + half * rule.nodes[i]));
    }
    out.evaluations += static_cast<int>(rule.nodes.size());
    return half * acc;
  };
  const auto make_panel = [&](double a, double b, const Value& whole) {
    const double m = 0.5 * (a + b);
    Value l = apply(a, m);
    Value r = apply(m, b);
    Value s = l + r;
    const double err = distance(s, whole);
    return Panel{a, b, std::move(l), std::move(r), std::move(s), err};
  };

  if (hi == lo) {
    out.value = 0.0 * g(lo);
    out.converged = true;
    return out;
  }

  std::vector<Panel> panels;
  panels.push_back(make_panel(lo, hi, apply(lo, hi)));
  const auto by_err = [&](std::size_t x, std::size_t y) { return panels[x].err < panels[y].err; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_err)> worst(by_err);
  worst.push(0);
  Value total = panels[0].sum;
  double err = panels[0].err;

  while (err > tol.threshold(norm(total)) &&
         static_cast<int>(panels.size()) < opt.max_intervals) {
    const std::size_t idx = worst.top();
    const Panel p = panels[idx];
    const double m = 0.5 * (p.lo + p.hi);
    if (!(m > p.lo && m < p.hi)) break;  // cannot bisect further
    worst.pop();
    panels[idx] = make_panel(p.lo, m, p.left);
    panels.push_back(make_panel(m, p.hi, p.right));
    worst.push(idx);
    worst.push(panels.size() - 1);
    total = total - p.sum + panels[idx].sum + panels.back().sum;
    err += panels[idx].err + panels.back().err - p.err;
  }

  // Final sum in abscissa order so the result does not depend on split history.
  std::vector<const Panel*> ordered;
  ordered.reserve(panels.size());
  for (const auto& p : panels) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(), [](const Panel* x, const Panel* y) { return x->lo < y->lo; });
  total = ordered.front()->sum;
  err = ordered.front()->err;
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    total = total + ordered[i]->sum;
    err += ordered[i]->err;
  }
  out.value = total;
  out.err = err;
  out.intervals = static_cast<int>(panels.size());
  out.converged = err <= tol.threshold(norm(total));
  return out;
}

}  // namespace confcalc
