#pragma once

// Executable checks of the identities relating the conformable derivative,
// the conformable integral and the classical derivative. Each check returns
// a CaseResult with both sides of the identity, the residual and the
// threshold it is judged against; run_suite() sweeps a corpus of functions
// over a grid of orders, terminals and points.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "confcalc/calculus.hpp"
#include "json.hpp"

namespace confcalc {

enum class IdentityId {
  continuity,
  order_relation,
  first_derivative_equivalence,
  left_inverse,
  right_inverse,
  right_inverse_at_terminal,
  lower_terminal_vanishing,
  linearity,
  constant_rule,
  product_rule,
  quotient_rule,
  average_recovery,
  order_class_equality,
};

std::string to_string(IdentityId id);
IdentityId identity_from_string(const std::string& s);
/// The identity in formula form, quoted in every report record.
std::string statement(IdentityId id);
const std::vector<IdentityId>& all_identities();

struct CaseResult {
  IdentityId id = IdentityId::continuity;
  std::string f;
  std::string g;  // second function, when the identity has one
  double alpha = 1.0;
  std::optional<double> beta;
  double a = 0.0;
  double t = 0.0;
  std::optional<double> c;
  std::optional<double> d;
  Value lhs;
  Value rhs;
  double residual = 0.0;
  double threshold = 0.0;
  /// False when a hypothesis of the identity fails at this point; such
  /// cases are neither passes nor failures.
  bool applicable = true;
  bool passed = false;
  std::string diagnostics;
};

struct CheckTolerances {
  /// Residual thresholds: rel * (1 + |reference|) + abs.
  Tolerance check{1e-6, 1e-8};
  /// Lower-terminal checks: the limit must vanish to within rel + abs.
  Tolerance terminal{5e-5, 5e-5};
  /// Requested accuracy of derivative kernels.
  Tolerance kernel{1e-9, 1e-12};
  /// Requested accuracy of quadratures.
  Tolerance quad{1e-12, 1e-14};
};

CaseResult check_continuity(const Function& f, const ConfParams& p, double t,
                            const CheckTolerances& tol = {});
CaseResult check_order_relation(const Function& f, double alpha, double beta, double a, double t,
                                const CheckTolerances& tol = {});
CaseResult check_equivalence(const Function& f, const ConfParams& p, double t,
                             const CheckTolerances& tol = {});
CaseResult check_left_inverse(const Function& f, const ConfParams& p, double t,
                              const CheckTolerances& tol = {});
/// t > a: interior check; t == a: limit of the derivative of the integral
/// against f(a+0).
CaseResult check_right_inverse(const Function& f, const ConfParams& p, double t,
                               const CheckTolerances& tol = {});
CaseResult check_lower_vanishing(const Function& f, double alpha, double beta, double a,
                                 const CheckTolerances& tol = {});
/// Linearity, constant, product and quotient rules at one point. The last
/// two are not applicable unless the values commute.
std::vector<CaseResult> check_algebra_rules(const Function& f, const Function& g, double c, double d,
                                            const ConfParams& p, double t,
                                            const CheckTolerances& tol = {});
CaseResult check_average_recovery(const Function& f, double t, const CheckTolerances& tol = {});
CaseResult check_class_equality(const Function& f, double alpha, double beta, double a, double t,
                                const CheckTolerances& tol = {});

struct CorpusEntry {
  std::string name;
  /// Builds the function for a given order and terminal; most entries
  /// ignore both, fractional powers anchored at a use them.
  std::function<Function(double alpha, double a)> make;
  /// Terminals to use instead of the grid's (e.g. {0} for t^alpha).
  std::vector<double> fixed_terminals;
  bool depends_on_alpha = false;
};

std::vector<CorpusEntry> default_corpus();

struct SuiteConfig {
  std::vector<CorpusEntry> corpus = default_corpus();
  std::vector<double> alphas{0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  std::vector<double> terminals{0.0, 1.0};
  std::vector<double> offsets{0.1, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> inverse_offsets{0.5, 1.0, 2.0};
  std::vector<IdentityId> identities = all_identities();
  CheckTolerances tol;
  std::uint64_t seed = 20240601;
};

struct ReportSummary {
  int total = 0;
  int applicable = 0;
  int passed = 0;
  int failed = 0;
  int not_applicable = 0;
};

struct IdentityReport {
  std::vector<CaseResult> cases;
  ReportSummary summary;

  bool all_passed() const { return summary.failed == 0; }
};

/// Deterministic: cases are produced in a fixed order and the random
/// coefficients come from a seeded generator.
IdentityReport run_suite(const SuiteConfig& config);
IdentityReport make_report(std::vector<CaseResult> cases);

nlohmann::json to_json(const CaseResult& c);
nlohmann::json to_json(const IdentityReport& r);
void write_table(std::ostream& os, const IdentityReport& r);

}  // namespace confcalc
