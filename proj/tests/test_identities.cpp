#include <cmath>
#include <set>
#include <sstream>

#include "confcalc/errors.hpp"
#include "confcalc/identities.hpp"
#include "doctest.h"

using namespace confcalc;

TEST_CASE("identity names round trip") {
  std::set<std::string> names;
  for (IdentityId id : all_identities()) {
    const std::string n = to_string(id);
    CHECK(identity_from_string(n) == id);
    CHECK_FALSE(statement(id).empty());
    names.insert(n);
  }
  CHECK(names.size() == all_identities().size());
  CHECK(all_identities().size() == 13);
  CHECK_THROWS(identity_from_string("no_such_identity"));
}

TEST_CASE("pointwise checks pass on smooth functions") {
  const Function f = make_builtin("tsin");
  const ConfParams p(0.5, 1.0);
  const double t = 2.5;
  for (const CaseResult& c : {check_continuity(f, p, t), check_order_relation(f, 0.5, 0.8, 1.0, t),
                              check_equivalence(f, p, t), check_left_inverse(f, p, t), check_right_inverse(f, p, t),
                              check_right_inverse(f, p, 1.0), check_lower_vanishing(f, 1.0, 0.5, 1.0),
                              check_average_recovery(f, t), check_class_equality(f, 0.5, 0.8, 1.0, t)}) {
    CAPTURE(to_string(c.id));
    CHECK(c.applicable);
    CHECK(c.passed);
    CHECK(c.residual <= c.threshold);
  }
}

TEST_CASE("residual is the distance between the two sides") {
  const CaseResult c = check_equivalence(make_builtin("exp"), ConfParams(0.25, 0.0), 1.5);
  CHECK(c.residual == doctest::Approx(distance(c.lhs, c.rhs)).epsilon(1e-12));
  // Independent oracle for the right-hand side.
  CHECK(c.rhs.as_scalar() == doctest::Approx(std::pow(1.5, 0.75) * std::exp(1.5)).epsilon(1e-14));
}

TEST_CASE("algebra rules") {
  const Function f = make_builtin("exp");
  const Function g = make_builtin("sin");
  const auto rules = check_algebra_rules(f, g, 2.0, -0.5, ConfParams(0.7, 0.0), 1.0);
  REQUIRE(rules.size() == 4);
  CHECK(rules[0].id == IdentityId::linearity);
  CHECK(rules[1].id == IdentityId::constant_rule);
  CHECK(rules[2].id == IdentityId::product_rule);
  CHECK(rules[3].id == IdentityId::quotient_rule);
  for (const auto& r : rules) {
    CHECK(r.applicable);
    CHECK(r.passed);
  }
  // Quotient: T(f/g) = (g T f - f T g) / g^2, against the closed form.
  const double t = 1.0;
  const double s = std::pow(t, 0.3);
  const double q = s * (std::exp(t) * std::sin(t) - std::exp(t) * std::cos(t)) / (std::sin(t) * std::sin(t));
  CHECK(rules[3].lhs.as_scalar() == doctest::Approx(q).epsilon(1e-7));

  // Vector values have no product; non-commutative shapes are out of scope.
  const Function v = make_vector({f, g});
  const auto vr = check_algebra_rules(v, v, 1.0, 1.0, ConfParams(0.7, 0.0), 1.0);
  CHECK(vr[0].passed);
  CHECK_FALSE(vr[2].applicable);
  CHECK_FALSE(vr[3].applicable);
}

TEST_CASE("left inverse with a jump at the terminal") {
  const Function jump = with_point_value(make_builtin("pow:0.5"), 0.0, Value(2.0));
  const CaseResult c = check_left_inverse(jump, ConfParams(0.5, 0.0), 1.0);
  CHECK(c.applicable);
  CHECK(c.passed);
  CHECK(c.rhs.as_scalar() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c.diagnostics.find("jump") != std::string::npos);

  const CaseResult smooth = check_left_inverse(make_builtin("pow:0.5"), ConfParams(0.5, 0.0), 1.0);
  CHECK(smooth.diagnostics.find("jump") == std::string::npos);
}

TEST_CASE("right inverse at the terminal needs a finite limit") {
  const ConfParams p(0.5, 0.0);
  const CaseResult ok = check_right_inverse(make_builtin("exp"), p, 0.0);
  CHECK(ok.id == IdentityId::right_inverse_at_terminal);
  CHECK(ok.passed);
  CHECK(ok.rhs.as_scalar() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_FALSE(check_right_inverse(make_builtin("sinlog"), p, 0.0).passed);
  CHECK_FALSE(check_right_inverse(make_builtin("recip"), p, 0.0).passed);
}

TEST_CASE("continuity is checked on the sides where a derivative exists") {
  const ConfParams p(0.5, -1.0);
  const CaseResult c = check_continuity(make_builtin("abs"), p, 0.0);
  CHECK(c.applicable);
  CHECK(c.passed);
  // A jump up at 0 with the value taken from the right: only the right
  // derivative exists, and continuity holds from that side.
  const CaseResult s = check_continuity(make_builtin("step"), p, 0.0);
  CHECK(s.passed);
  CHECK(s.diagnostics == "checked sides: right");
}

TEST_CASE("class equality reports existence of both orders") {
  // |t - 1| has no derivative of any order at 1.
  const CaseResult k = check_class_equality(make_builtin("abs:1"), 0.5, 0.9, 0.0, 1.0);
  CHECK(k.passed);
  const CaseResult s = check_class_equality(make_builtin("sin"), 0.5, 0.9, 0.0, 1.0);
  CHECK(s.passed);
}

TEST_CASE("suite on a reduced grid is deterministic") {
  SuiteConfig cfg;
  cfg.alphas = {0.5, 1.0};
  cfg.offsets = {0.5, 2.0};
  cfg.inverse_offsets = {1.0};
  const IdentityReport r1 = run_suite(cfg);
  const IdentityReport r2 = run_suite(cfg);
  CHECK(r1.all_passed());
  CHECK(r1.summary.total == static_cast<int>(r1.cases.size()));
  CHECK((r1.summary.passed + r1.summary.failed) == r1.summary.applicable);
  CHECK((r1.summary.applicable + r1.summary.not_applicable) == r1.summary.total);
  CHECK(to_json(r1).dump() == to_json(r2).dump());

  std::set<IdentityId> seen;
  for (const auto& c : r1.cases) seen.insert(c.id);
  CHECK(seen.size() == all_identities().size());

  cfg.seed += 1;
  CHECK(to_json(run_suite(cfg)).dump() != to_json(r1).dump());
}

TEST_CASE("suite filters and user corpora") {
  SuiteConfig cfg;
  cfg.identities = {IdentityId::first_derivative_equivalence};
  cfg.alphas = {0.5};
  cfg.corpus = {{"t^3", [](double, double) { return make_expr("t^3"); }, {}, false}};
  const IdentityReport r = run_suite(cfg);
  CHECK(r.summary.total == static_cast<int>(cfg.terminals.size() * cfg.offsets.size()));
  for (const auto& c : r.cases) {
    CHECK(c.id == IdentityId::first_derivative_equivalence);
    CHECK(c.f == "(t^3)");
    CHECK(c.passed);
  }
}

TEST_CASE("a wrong identity is caught") {
  // A callable whose declared derivative is off by 1e-3 must fail equivalence.
  const Function bad = make_callable([](double t) { return Value(std::sin(t)); }, Shape::scalar(),
                                     Interval::real_line(), "sin with a wrong derivative",
                                     [](double t) { return Value(std::cos(t) + 1e-3); });
  const CaseResult c = check_equivalence(bad, ConfParams(0.5, 0.0), 1.0);
  CHECK(c.applicable);
  CHECK_FALSE(c.passed);
  CHECK(c.residual == doctest::Approx(1e-3).epsilon(1e-4));
}

TEST_CASE("report serialization") {
  const CaseResult c = check_order_relation(make_builtin("t2"), 0.5, 0.25, 0.0, 1.0);
  const auto j = to_json(c);
  CHECK(j["id"] == "order_relation");
  CHECK(j["inputs"]["beta"] == 0.25);
  CHECK(j["passed"] == true);
  CHECK(j.contains("statement"));

  CaseResult na = c;
  na.applicable = false;
  CHECK(to_json(na)["residual"].is_null());

  const IdentityReport r = make_report({c, na});
  CHECK(r.summary.passed == 1);
  CHECK(r.summary.not_applicable == 1);
  std::ostringstream table;
  write_table(table, r);
  CHECK(table.str().find("order_relation") != std::string::npos);
  CHECK(table.str().find("n/a") != std::string::npos);
}
