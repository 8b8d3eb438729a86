#include <cmath>
#include <random>

#include "confcalc/errors.hpp"
#include "confcalc/vecspace.hpp"
#include "doctest.h"

using namespace confcalc;

namespace {

Value random_value(std::mt19937_64& rng, const Shape& shape) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> c(shape.size());
  for (auto& x : c) x = u(rng);
  return Value::from_components(shape, c);
}

}  // namespace

TEST_CASE("norms are Euclidean and Frobenius") {
  CHECK(norm(Value(-2.5)) == 2.5);
  CHECK(norm(Value::vector({3.0, 4.0})) == doctest::Approx(5.0));
  CHECK(norm(Value::matrix(2, {1.0, 2.0, 3.0, 4.0})) == doctest::Approx(std::sqrt(30.0)));
  const double d[] = {1.0, 2.0, 2.0};
  CHECK(norm(Value::diag(d)) == doctest::Approx(3.0));
}

TEST_CASE("linear operations and shape checks") {
  const Value u = Value::vector({1.0, 2.0, 3.0});
  const Value v = Value::vector({-1.0, 0.5, 4.0});
  const Value w = axpy(2.0, u, -3.0, v);
  CHECK(w == Value::vector({5.0, 2.5, -6.0}));
  CHECK(u + v == Value::vector({0.0, 2.5, 7.0}));
  CHECK(-u == Value::vector({-1.0, -2.0, -3.0}));
  CHECK(distance(u, v) == doctest::Approx(norm(u - v)));
  CHECK_THROWS_AS(u + Value(1.0), ShapeError);
  CHECK_THROWS_AS(u + Value::vector({1.0, 2.0}), ShapeError);
  CHECK_THROWS_AS(Value::matrix(2, {1.0, 2.0, 3.0}), ShapeError);
  CHECK_THROWS_AS(u.as_scalar(), ShapeError);
}

TEST_CASE("algebra products and inverses") {
  CHECK(mul(Value(3.0), Value(-2.0)).as_scalar() == -6.0);
  const Value m = Value::matrix(2, {1.0, 2.0, 3.0, 4.0});
  const Value n = Value::matrix(2, {0.0, 1.0, 1.0, 0.0});
  CHECK(mul(m, n) == Value::matrix(2, {2.0, 1.0, 4.0, 3.0}));
  CHECK(mul(n, m) == Value::matrix(2, {3.0, 4.0, 1.0, 2.0}));

  // 2x2 inverse against the adjugate formula.
  const Value inv = inverse(m);
  const double det = 1.0 * 4.0 - 2.0 * 3.0;
  const Value adj = Value::matrix(2, {4.0 / det, -2.0 / det, -3.0 / det, 1.0 / det});
  CHECK(distance(inv, adj) < 1e-14);
  CHECK(distance(mul(m, inv), Value::identity(m.shape())) < 1e-14);

  CHECK_THROWS_AS(mul(Value::vector({1.0}), Value::vector({1.0})), AlgebraError);
  CHECK_THROWS_AS(Value::identity(Shape::vector(2)), AlgebraError);
  CHECK_THROWS_AS(inverse(Value(0.0)), DomainError);
  CHECK_THROWS_AS(inverse(Value::matrix(2, {1.0, 2.0, 2.0, 4.0})), DomainError);
}

TEST_CASE("commutativity is a property of the shape") {
  CHECK(Value(2.0).is_commutative());
  CHECK(Value::matrix(1, {2.0}).is_commutative());
  CHECK_FALSE(Value::matrix(2, {1.0, 0.0, 0.0, 1.0}).is_commutative());
  CHECK_FALSE(Value::vector({1.0}).is_commutative());
}

TEST_CASE("json round trip") {
  for (const Value& v : {Value(1.5), Value::vector({1.0, -2.0}), Value::matrix(2, {1.0, 2.0, 3.0, 4.0})}) {
    CHECK(value_from_json(to_json(v)) == v);
  }
  CHECK(to_json(Value::matrix(2, {1.0, 2.0, 3.0, 4.0})).dump() == "[[1.0,2.0],[3.0,4.0]]");
  CHECK_THROWS_AS(value_from_json(nlohmann::json::parse("[[1,2],[3]]")), ShapeError);
  CHECK_THROWS_AS(value_from_json(nlohmann::json::parse("[]")), ShapeError);
}

TEST_CASE("vector space axioms and norm properties on random elements") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (const Shape& shape : {Shape::scalar(), Shape::vector(4), Shape::matrix(3)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Value u = random_value(rng, shape);
      const Value v = random_value(rng, shape);
      const Value w = random_value(rng, shape);
      const double c = coef(rng);
      const double d = coef(rng);
      CHECK(distance(u + v, v + u) == 0.0);
      CHECK(distance((u + v) + w, u + (v + w)) < 1e-13);
      CHECK(distance(c * (u + v), c * u + c * v) < 1e-13);
      CHECK(distance(axpy(c, u, d, u), (c + d) * u) < 1e-13);
      CHECK(norm(u + v) <= norm(u) + norm(v) + 1e-13);
      CHECK(norm(c * u) == doctest::Approx(std::abs(c) * norm(u)));
      if (shape.is_algebra()) {
        // Submultiplicativity of the Frobenius norm.
        CHECK(norm(mul(u, v)) <= norm(u) * norm(v) + 1e-12);
        CHECK(distance(mul(mul(u, v), w), mul(u, mul(v, w))) < 1e-11);
      }
    }
  }
}
