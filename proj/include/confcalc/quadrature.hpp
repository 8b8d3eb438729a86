#pragma once

#include <functional>
#include <span>

#include "confcalc/extrapolation.hpp"
#include "confcalc/vecspace.hpp"

namespace confcalc {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Roots of P_n by Newton iteration from Chebyshev-like initial guesses.
GaussLegendreRule gauss_legendre(std::size_t n);

struct QuadResult {
  Value value;
  double err = 0.0;
  int intervals = 0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadOptions {
  std::size_t order = 10;
  int max_intervals = 4000;
};

/// Globally adaptive composite Gauss-Legendre quadrature of a Value-valued
/// integrand over [lo, hi]. Each panel is scored by comparing the rule on the
/// whole panel with the rule on its two halves; the panel with the largest
/// discrepancy is bisected until the summed discrepancy meets tol. The
/// integrand is never sampled at the end points.
QuadResult integrate(const std::function<Value(double)>& g, double lo, double hi,
                     const Tolerance& tol, const QuadOptions& opt = {});

}  // namespace confcalc
