#include <cmath>
#include <numbers>
#include <vector>

#include "confcalc/errors.hpp"
#include "confcalc/extrapolation.hpp"
#include "confcalc/quadrature.hpp"
#include "doctest.h"

using namespace confcalc;

TEST_CASE("Gauss-Legendre rules") {
  for (std::size_t n : {1u, 2u, 5u, 10u, 20u}) {
    const auto rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for polynomials up to degree 2n - 1: int_{-1}^{1} x^k dx.
    for (std::size_t k = 0; k < 2 * n; ++k) {
      double q = 0.0;
      for (std::size_t i = 0; i < n; ++i) q += rule.weights[i] * std::pow(rule.nodes[i], static_cast<double>(k));
      const double exact = k % 2 == 1 ? 0.0 : 2.0 / static_cast<double>(k + 1);
      CHECK(q == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  const auto r5 = gauss_legendre(5);
  CHECK(r5.nodes[2] == doctest::Approx(0.0));
  CHECK(std::abs(r5.nodes[4]) == doctest::Approx(std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0));
}

TEST_CASE("adaptive quadrature") {
  const Tolerance tol{1e-12, 1e-14};
  const auto sin_q = integrate([](double x) { return Value(std::sin(x)); }, 0.0, std::numbers::pi, tol);
  CHECK(sin_q.converged);
  CHECK(sin_q.value.as_scalar() == doctest::Approx(2.0).epsilon(1e-13));

  // A near-singular peak forces refinement.
  const auto peak = integrate([](double x) { return Value(1.0 / (1e-4 + x * x)); }, -1.0, 1.0, tol);
  CHECK(peak.converged);
  CHECK(peak.intervals > 1);
  CHECK(peak.value.as_scalar() == doctest::Approx(2.0 * std::atan(1.0 / 1e-2) / 1e-2).epsilon(1e-11));

  // Vector-valued integrands integrate componentwise.
  const auto vec = integrate([](double x) { return Value::vector({x, x * x, std::exp(x)}); }, 0.0, 1.0, tol);
  CHECK(distance(vec.value, Value::vector({0.5, 1.0 / 3.0, std::exp(1.0) - 1.0})) < 1e-13);

  // Integrable endpoint singularity: never sampled at the end points.
  const auto sing = integrate([](double x) { return Value(1.0 / std::sqrt(x)); }, 0.0, 1.0, Tolerance{1e-8, 1e-10});
  CHECK(sing.value.as_scalar() == doctest::Approx(2.0).epsilon(1e-7));

  const auto empty = integrate([](double) { return Value(1.0); }, 1.0, 1.0, tol);
  CHECK(empty.value.as_scalar() == 0.0);
}

TEST_CASE("Richardson extrapolation of one-sided and symmetric quotients") {
  const double t = 0.7;
  const auto fwd = richardson_limit(
      [t](double h) { return Value((std::exp(t + h) - std::exp(t)) / h); }, 0.1, Tolerance{1e-10, 1e-12});
  CHECK(fwd.converged);
  CHECK(fwd.value.as_scalar() == doctest::Approx(std::exp(t)).epsilon(1e-11));

  RichardsonOptions sym;
  sym.power_step = 2;
  const auto cen = richardson_limit(
      [t](double h) { return Value((std::sin(t + h) - std::sin(t - h)) / (2 * h)); }, 0.2, Tolerance{1e-10, 1e-12},
      sym);
  CHECK(cen.converged);
  CHECK(cen.value.as_scalar() == doctest::Approx(std::cos(t)).epsilon(1e-12));

  // A quotient without a limit: sin(1/h) oscillates.
  const auto bad = richardson_limit([](double h) { return Value(std::sin(1.0 / h)); }, 0.1, Tolerance{});
  CHECK_FALSE(bad.converged);
  CHECK_FALSE(bad.diagnostics.empty());

  CHECK_THROWS_AS(richardson_limit([](double h) { return Value(h); }, 0.0, Tolerance{}), ParameterError);
}

TEST_CASE("sequence limits") {
  // 1 + 0.6^k + 0.3^k: two geometric error terms of unknown ratio.
  std::vector<Value> seq;
  for (int k = 0; k < 20; ++k) seq.emplace_back(1.0 + std::pow(0.6, k) + std::pow(0.3, k));
  const auto lim = sequence_limit(seq, Tolerance{1e-10, 1e-12});
  CHECK(lim.converged);
  CHECK(lim.value.as_scalar() == doctest::Approx(1.0).epsilon(1e-11));

  // Slowly vanishing powers of a shrinking step: 0.5^(k alpha).
  std::vector<Value> van;
  for (int k = 0; k < 25; ++k) van.emplace_back(std::pow(0.5, 0.25 * k));
  const auto v = sequence_limit(van, Tolerance{5e-5, 5e-5});
  CHECK(v.converged);
  CHECK(std::abs(v.value.as_scalar()) < 1e-6);

  std::vector<Value> osc;
  for (int k = 0; k < 20; ++k) osc.emplace_back(std::sin(static_cast<double>(k)));
  CHECK_FALSE(sequence_limit(osc, Tolerance{}).converged);

  std::vector<Value> grow;
  for (int k = 0; k < 20; ++k) grow.emplace_back(std::pow(1.5, k));
  CHECK_FALSE(sequence_limit(grow, Tolerance{}).converged);

  CHECK_FALSE(sequence_limit(std::vector<Value>{}, Tolerance{}).converged);
  CHECK_FALSE(sequence_limit(std::vector<Value>{Value(1.0), Value(1.0)}, Tolerance{}).converged);
}

TEST_CASE("sequence limits are componentwise") {
  std::vector<Value> scalar;
  std::vector<Value> replicated;
  for (int k = 0; k < 20; ++k) {
    const double x = 2.0 + std::pow(0.5, 0.5 * k);
    scalar.emplace_back(x);
    replicated.push_back(Value::vector({x, x, x}));
  }
  const Tolerance tol{1e-8, 1e-10};
  const auto s = sequence_limit(scalar, tol);
  const auto r = sequence_limit(replicated, tol);
  CHECK(s.converged == r.converged);
  for (std::size_t c = 0; c < 3; ++c) CHECK(r.value[c] == s.value.as_scalar());
  CHECK(r.err == doctest::Approx(std::sqrt(3.0) * s.err));

  CHECK(close_componentwise(Value::vector({1.0, 2.0}), Value::vector({1.0, 2.0 + 1e-12}), tol));
  CHECK_FALSE(close_componentwise(Value::vector({1.0, 2.0}), Value::vector({1.0 + 1e-6, 2.0}), tol));
}

TEST_CASE("tolerance validation") {
  CHECK_NOTHROW(validate(Tolerance{}));
  CHECK_THROWS_AS(validate(Tolerance{0.0, 1e-10}), ParameterError);
  CHECK_THROWS_AS(validate(Tolerance{1e-8, -1.0}), ParameterError);
  CHECK_THROWS_AS(validate(Tolerance{NAN, 1e-10}), ParameterError);
  CHECK(Tolerance{1e-3, 1e-6}.threshold(10.0) == doctest::Approx(1e-2 + 1e-6));
}
