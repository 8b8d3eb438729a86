#pragma once

// Limit estimation from sampled sequences.
//
// richardson_limit() handles quantities F(h) with an asymptotic expansion in
// integer powers of h (difference quotients, running averages): h is halved
// row by row and a Neville tableau cancels the leading error terms.
//
// sequence_limit() handles sequences indexed by k with geometrically decaying
// error terms of unknown ratio, which is what one gets when sampling a
// function at t_k = a + d r^k and the function behaves like a sum of powers of
// (t - a). It runs Wynn's epsilon algorithm componentwise.

#include <functional>
#include <span>
#include <string>

#include "confcalc/vecspace.hpp"

namespace confcalc {

struct Tolerance {
  double rel = 1e-8;
  double abs = 1e-10;

  /// Absolute error allowed for a result of the given norm.
  double threshold(double magnitude) const { return abs + rel * magnitude; }
};

/// Throws ParameterError unless both components are positive and finite.
void validate(const Tolerance& tol);

struct LimitEstimate {
  Value value;
  double err = 0.0;
  int steps = 0;
  bool converged = false;
  std::string diagnostics;
};

struct RichardsonOptions {
  /// Error expansion advances by h^power_step per column: 1 for one-sided
  /// quotients, 2 for symmetric ones.
  int power_step = 1;
  int max_rows = 12;
  /// Stop when the diagonal drifts by more than safe * best error, once at
  /// least min_rows rows exist.
  double safe = 2.0;
  int min_rows = 4;
};

/// Estimate lim_{h->0} F(h) from F(h0), F(h0/2), F(h0/4), ...
LimitEstimate richardson_limit(const std::function<Value(double)>& F, double h0,
                               const Tolerance& tol, const RichardsonOptions& opt = {});

/// Estimate the limit of a sequence whose error terms decay geometrically.
/// Reports converged = false when the tail of the differences does not decay
/// (oscillation or growth), regardless of what the extrapolation suggests.
/// Decay and convergence are judged per component against
/// tol.threshold(|component|); err is the Euclidean sum of component errors.
LimitEstimate sequence_limit(std::span<const Value> seq, const Tolerance& tol);

/// |u_c - v_c| <= tol.threshold(|u_c|) for every component c.
bool close_componentwise(const Value& u, const Value& v, const Tolerance& tol);

}  // namespace confcalc
