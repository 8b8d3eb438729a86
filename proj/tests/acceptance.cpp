// Acceptance criteria, one PASS/FAIL line each. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "confcalc/calculus.hpp"
#include "confcalc/identities.hpp"
#include "confcalc/ivp.hpp"

using namespace confcalc;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

IdentityReport suite_for(std::vector<IdentityId> ids) {
  SuiteConfig cfg;
  cfg.identities = std::move(ids);
  return run_suite(cfg);
}

struct Tally {
  int cases = 0;
  int applicable = 0;
  int bad = 0;
  double worst = 0.0;  // residual / allowed
};

/// Applicable cases must meet residual <= allowed(case); not-applicable
/// cases are counted but judged by the caller.
Tally tally(const IdentityReport& r, const std::function<double(const CaseResult&)>& allowed) {
  Tally t;
  for (const auto& c : r.cases) {
    ++t.cases;
    if (!c.applicable) continue;
    ++t.applicable;
    const double lim = allowed(c);
    const bool ok = c.passed && c.residual <= lim;
    if (!ok) ++t.bad;
    t.worst = std::max(t.worst, c.residual / lim);
  }
  return t;
}

std::string tally_text(const Tally& t) {
  return std::to_string(t.applicable) + "/" + std::to_string(t.cases) + " applicable, " +
         std::to_string(t.bad) + " over tolerance, worst residual/tol " + fmt("%.2e", t.worst);
}

double rel_tol(const CaseResult& c, double rel) { return rel * (1.0 + norm(c.rhs)); }

void criterion_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = suite_for({IdentityId::first_derivative_equivalence});
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Tally t = tally(r, [](const CaseResult& c) { return rel_tol(c, 1e-6); });
  report(1, "derivative equivalence", t.applicable >= 300 && t.bad == 0 && sec <= 10.0,
         tally_text(t) + ", " + fmt("%.2f s", sec));
}

void criterion_order() {
  const auto r = suite_for({IdentityId::order_relation});
  const Tally t = tally(r, [](const CaseResult& c) { return rel_tol(c, 1e-6); });
  int pairs_ok = 1;
  for (const auto& c : r.cases) {
    if (!c.beta) pairs_ok = 0;
  }
  report(2, "order conversion", t.applicable > 0 && t.bad == 0 && pairs_ok, tally_text(t));
}

void criterion_left_inverse() {
  const auto r = suite_for({IdentityId::left_inverse});
  const Tally t = tally(r, [](const CaseResult&) { return 1e-7; });
  bool offsets_ok = true;
  for (const auto& c : r.cases) {
    const double d = c.t - c.a;
    if (std::abs(d - 0.5) > 1e-12 && std::abs(d - 1.0) > 1e-12 && std::abs(d - 2.0) > 1e-12) offsets_ok = false;
  }

  // t^0.5 on [0, inf) with the value at 0 moved to 2.
  const Function jump = with_point_value(make_builtin("pow:0.5"), 0.0, Value(2.0));
  bool jump_ok = true;
  double jump_res = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    const CaseResult c = check_left_inverse(jump, ConfParams(0.5, 0.0), t);
    jump_ok = jump_ok && c.applicable && c.passed && c.residual <= 1e-7 &&
              c.diagnostics.find("jump") != std::string::npos &&
              std::abs(c.rhs.as_scalar() - std::sqrt(t)) <= 1e-7;
    jump_res = std::max(jump_res, c.residual);
  }
  report(3, "left inverse", t.applicable > 0 && t.bad == 0 && offsets_ok && jump_ok,
         tally_text(t) + "; jump example " + (jump_ok ? "passes and is flagged" : "wrong") + ", residual " +
             fmt("%.2e", jump_res));
}

void criterion_right_inverse() {
  const auto inner = suite_for({IdentityId::right_inverse});
  const Tally ti = tally(inner, [](const CaseResult&) { return 1e-6; });
  const auto term = suite_for({IdentityId::right_inverse_at_terminal});
  int term_pass = 0;
  for (const auto& c : term.cases) term_pass += c.applicable && c.passed;
  const bool corpus_ok = term_pass == static_cast<int>(term.cases.size());

  // Without a finite limit at a+ the terminal check must not pass.
  bool negatives_ok = true;
  for (const char* spec : {"sinlog", "recip"}) {
    const CaseResult c = check_right_inverse(make_builtin(spec), ConfParams(0.5, 0.0), 0.0);
    negatives_ok = negatives_ok && !c.passed;
  }
  report(4, "right inverse", ti.applicable > 0 && ti.bad == 0 && corpus_ok && negatives_ok,
         "interior " + tally_text(ti) + "; terminal " + std::to_string(term_pass) + "/" +
             std::to_string(term.cases.size()) + " pass, no-limit cases " +
             (negatives_ok ? "rejected" : "ACCEPTED"));
}

void criterion_vanishing() {
  double worst = 0.0;
  bool ok = true;
  for (const char* spec : {"t", "exp", "sin"}) {
    for (double beta : {0.25, 0.5, 0.9}) {
      const DerivResult d = lower_terminal_deriv(make_builtin(spec), ConfParams(beta, 0.0), CheckTolerances{}.terminal);
      const double v = std::abs(d.value.as_scalar());
      worst = std::max(worst, v);
      ok = ok && d.converged && v <= 1e-4;
    }
  }
  report(5, "lower-terminal vanishing", ok, "max |limit| " + fmt("%.2e", worst));
}

void criterion_example() {
  const Function f = make_expr("t^0.5");
  const ConfParams p(0.5, 0.0);
  double worst = 0.0;
  bool ok = true;
  for (int k = 1; k <= 20; ++k) {
    const double t = k / 20.0;
    const DerivResult d = conf_deriv(f, p, t);
    const double e = std::abs(d.value.as_scalar() - 0.5);
    worst = std::max(worst, e);
    ok = ok && d.converged && e <= 1e-6;
  }
  const DerivResult d0 = lower_terminal_deriv(f, p);
  const double e0 = std::abs(d0.value.as_scalar() - 0.5);
  ok = ok && d0.converged && e0 <= 1e-4;
  report(6, "example t^0.5", ok, "interior max error " + fmt("%.2e", worst) + ", terminal " + fmt("%.2e", e0));
}

void criterion_quadrature() {
  const Function one = make_builtin("one");
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double alpha = k / 10.0;
    for (double a : {0.0, 1.0}) {
      for (double d : {0.01, 1.0, 100.0}) {
        const double exact = std::pow(d, alpha) / alpha;
        const double got = conf_integral(one, ConfParams(alpha, a), a + d).as_scalar();
        worst = std::max(worst, std::abs(got - exact));
      }
    }
  }
  report(7, "quadrature exactness", worst <= 1e-12, "max error " + fmt("%.2e", worst));
}

void criterion_ivp() {
  IvpProblem prob;
  prob.rhs = [](double, const Value& x) { return x; };
  prob.p = ConfParams(0.5, 0.0);
  prob.x0 = Value(1.0);
  prob.t_end = 1.0;
  const double exact = std::exp(2.0);

  const double x1000 = solve_tau(prob, 1000).x.back().as_scalar();
  const double e1000 = std::abs(x1000 - exact);

  std::vector<double> errs;
  for (int n : {10, 20, 40, 80}) errs.push_back(std::abs(solve_tau(prob, n).x.back().as_scalar() - exact));
  bool ratios_ok = true;
  std::string ratios;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double r = errs[i - 1] / errs[i];
    ratios_ok = ratios_ok && r >= 12.0 && r <= 20.0;
    ratios += (i > 1 ? " " : "") + fmt("%.2f", r);
  }
  const double dev = cross_validate(prob, 1000, Tolerance{1e-12, 1e-14});
  report(8, "ivp equivalence", e1000 <= 1e-6 && ratios_ok && dev <= 1e-5,
         "x(1) error " + fmt("%.2e", e1000) + ", order ratios " + ratios + ", tau vs Volterra " + fmt("%.2e", dev));
}

// Replicated members: [f, f, f] and diag(f, f, f) against f.
void criterion_genericity() {
  const double s3 = std::sqrt(3.0);
  struct Pair {
    std::string name;
    std::function<Function(double, double)> make;
  };
  const std::vector<Pair> scalars{
      {"t", [](double, double) { return make_builtin("t"); }},
      {"t^2", [](double, double) { return make_builtin("t2"); }},
      {"exp", [](double, double) { return make_builtin("exp"); }},
      {"sin", [](double, double) { return make_builtin("sin"); }},
      {"(t-a)^alpha",
       [](double alpha, double a) {
         return make_builtin("pow:" + std::to_string(alpha) + ":" + std::to_string(a));
       }},
  };
  const auto vec3 = [](const Function& f) { return make_vector({f, f, f}); };
  const auto diag3 = [](const Function& f) { return make_diag({f, f, f}); };

  using Check = std::function<CaseResult(const Function&, double alpha, double a, double t)>;
  const std::vector<std::pair<std::string, Check>> checks{
      {"equivalence",
       [](const Function& f, double al, double a, double t) { return check_equivalence(f, ConfParams(al, a), t); }},
      {"order",
       [](const Function& f, double al, double a, double t) {
         return check_order_relation(f, al, al == 1.0 ? 0.5 : 1.0, a, t);
       }},
      {"left inverse",
       [](const Function& f, double al, double a, double t) { return check_left_inverse(f, ConfParams(al, a), t); }},
      {"right inverse",
       [](const Function& f, double al, double a, double t) { return check_right_inverse(f, ConfParams(al, a), t); }},
      {"right inverse at a",
       [](const Function& f, double al, double a, double) { return check_right_inverse(f, ConfParams(al, a), a); }},
      {"vanishing",
       [](const Function& f, double al, double a, double) {
         return check_lower_vanishing(f, 1.0, al == 1.0 ? 0.5 : al, a);
       }},
  };

  int compared = 0;
  int mismatched = 0;
  double worst = 0.0;
  std::string first_bad;
  for (const auto& s : scalars) {
    for (double alpha : {0.25, 0.5, 0.9}) {
      for (double a : {0.0, 1.0}) {
        const Function f = s.make(alpha, a);
        for (const auto& [cname, check] : checks) {
          for (double dt : {0.5, 2.0}) {
            const double t = a + dt;
            const CaseResult base = check(f, alpha, a, t);
            for (const Function& g : {vec3(f), diag3(f)}) {
              const CaseResult rep = check(g, alpha, a, t);
              ++compared;
              const bool same_flags = base.applicable == rep.applicable && base.passed == rep.passed;
              double diff = 0.0;
              if (base.applicable && rep.applicable) diff = std::abs(rep.residual / s3 - base.residual);
              if (!std::isfinite(diff)) diff = base.residual == rep.residual ? 0.0 : INFINITY;
              worst = std::max(worst, diff);
              if (!same_flags || diff > 1e-10) {
                ++mismatched;
                if (first_bad.empty()) {
                  first_bad = cname + " " + s.name + " alpha=" + fmt("%g", alpha) + " a=" + fmt("%g", a) +
                              " t=" + fmt("%g", t) + " " + g.shape().str();
                }
              }
            }
          }
        }
      }
    }
  }
  report(9, "genericity", mismatched == 0,
         std::to_string(compared) + " replicated cases, " + std::to_string(mismatched) +
             " mismatched, worst residual gap " + fmt("%.2e", worst) + (first_bad.empty() ? "" : "; first: " + first_bad));
}

void criterion_determinism() {
  std::ostringstream o1;
  std::ostringstream o2;
  std::ostringstream err;
  const int rc1 = cli::run(std::vector<std::string>{"check"}, o1, err);
  const int rc2 = cli::run(std::vector<std::string>{"check"}, o2, err);
  const bool same = o1.str() == o2.str() && !o1.str().empty();
  report(10, "determinism", same && rc1 == 0 && rc2 == 0,
         std::string(same ? "identical" : "different") + " JSON (" + std::to_string(o1.str().size()) +
             " bytes), exit codes " + std::to_string(rc1) + " " + std::to_string(rc2));
}

}  // namespace

int main() {
  criterion_equivalence();
  criterion_order();
  criterion_left_inverse();
  criterion_right_inverse();
  criterion_vanishing();
  criterion_example();
  criterion_quadrature();
  criterion_ivp();
  criterion_genericity();
  criterion_determinism();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
