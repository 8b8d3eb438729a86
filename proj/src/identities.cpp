#include "confcalc/identities.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "confcalc/errors.hpp"

namespace confcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct IdentityInfo {
  IdentityId id;
  const char* name;
  const char* statement;
};

const IdentityInfo kIdentities[] = {
    {IdentityId::continuity, "continuity",
     "T^alpha f(t -/+ 0) exists => f is left/right continuous at t"},
    {IdentityId::order_relation, "order_relation", "T^alpha f(t) = (t - a)^(beta - alpha) T^beta f(t)"},
    {IdentityId::first_derivative_equivalence, "first_derivative_equivalence",
     "T^alpha f(t) = (t - a)^(1 - alpha) f'(t)"},
    {IdentityId::left_inverse, "left_inverse", "I^alpha T^alpha f(t) = f(t) - f(a + 0)"},
    {IdentityId::right_inverse, "right_inverse", "T^alpha I^alpha f(t) = f(t)"},
    {IdentityId::right_inverse_at_terminal, "right_inverse_at_terminal",
     "lim_{t -> a+} T^alpha I^alpha f(t) = f(a + 0)"},
    {IdentityId::lower_terminal_vanishing, "lower_terminal_vanishing",
     "T^alpha f(a) exists and beta < alpha => T^beta f(a) = 0"},
    {IdentityId::linearity, "linearity", "T^alpha (c f + d g) = c T^alpha f + d T^alpha g"},
    {IdentityId::constant_rule, "constant_rule", "T^alpha (const) = 0"},
    {IdentityId::product_rule, "product_rule", "T^alpha (f g) = g T^alpha f + f T^alpha g"},
    {IdentityId::quotient_rule, "quotient_rule",
     "T^alpha (f / g) = (g T^alpha f - f T^alpha g) / g^2"},
    {IdentityId::average_recovery, "average_recovery", "lim_{h -> 0+} (1/h) int_t^{t+h} f(s) ds = f(t)"},
    {IdentityId::order_class_equality, "order_class_equality",
     "T^alpha f(t) exists <=> T^beta f(t) exists"},
};

const IdentityInfo& info(IdentityId id) {
  for (const auto& i : kIdentities) {
    if (i.id == id) return i;
  }
  throw ParameterError("unknown identity");
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double ref_threshold(const Tolerance& tol, const Value& reference) {
  return tol.rel * (1.0 + norm(reference)) + tol.abs;
}

CaseResult base_case(IdentityId id, const Function& f, double alpha, double a, double t) {
  CaseResult c;
  c.id = id;
  c.f = f.describe();
  c.alpha = alpha;
  c.a = a;
  c.t = t;
  return c;
}

CaseResult& not_applicable(CaseResult& c, std::string why) {
  c.applicable = false;
  c.passed = false;
  c.residual = std::numeric_limits<double>::quiet_NaN();
  c.diagnostics = std::move(why);
  return c;
}

CaseResult& judge(CaseResult& c) {
  c.residual = distance(c.lhs, c.rhs);
  c.passed = c.residual <= c.threshold;
  return c;
}

CaseResult& failed(CaseResult& c, const std::string& why) {
  c.applicable = true;
  c.passed = false;
  if (!std::isfinite(c.residual)) c.residual = kInf;
  c.diagnostics = why;
  return c;
}

// Probe distance for continuity-type sequences at t.
double first_probe(const Function& f, double t, double a, bool left) {
  const Interval dom = f.domain();
  double room = 0.1 * std::max(1.0, std::abs(t));
  if (left) {
    room = std::min(room, 0.5 * (t - a));
    if (std::isfinite(dom.lo)) room = std::min(room, 0.9 * (t - dom.lo));
  } else if (std::isfinite(dom.hi)) {
    room = std::min(room, 0.9 * (dom.hi - t));
  }
  return room;
}

struct Decay {
  double residual;  // largest of the last few |f(t +/- h_k) - f(t)|
  Value last;       // f at the closest probe
};

Decay continuity_decay(const Function& f, double t, double h0, bool left) {
  const Value ft = f.eval(t);
  constexpr int kTerms = 40;
  Decay out{0.0, ft};
  for (int k = 0; k < kTerms; ++k) {
    const double h = std::ldexp(h0, -k);
    const Value v = f.eval(left ? t - h : t + h);
    if (k >= kTerms - 3) out.residual = std::max(out.residual, distance(v, ft));
    out.last = v;
  }
  return out;
}

// Heuristic local boundedness on (a, t]: samples at a + (t - a) 2^-k must
// not keep growing as the terminal is approached.
bool bounded_near_terminal(const Function& f, double a, double t) {
  std::vector<double> norms;
  for (int k = 0; k <= 50; ++k) {
    const double s = a + std::ldexp(t - a, -k);
    if (!(s > a)) break;
    norms.push_back(norm(f.eval(s)));
  }
  constexpr std::size_t kWindow = 12;
  if (norms.size() <= kWindow) return true;
  const std::size_t start = norms.size() - kWindow;
  for (std::size_t k = start; k + 1 < norms.size(); ++k) {
    if (!(norms[k + 1] > norms[k])) return true;
  }
  return !(norms.back() > 1.5 * norms[start]);
}

DerivOptions independent_probes() {
  DerivOptions o;
  o.step_scale = 0.75;
  return o;
}

}  // namespace

std::string to_string(IdentityId id) { return info(id).name; }

IdentityId identity_from_string(const std::string& s) {
  for (const auto& i : kIdentities) {
    if (s == i.name) return i.id;
  }
  throw ParameterError("unknown identity '" + s + "'");
}

std::string statement(IdentityId id) { return info(id).statement; }

const std::vector<IdentityId>& all_identities() {
  static const std::vector<IdentityId> ids = [] {
    std::vector<IdentityId> v;
    for (const auto& i : kIdentities) v.push_back(i.id);
    return v;
  }();
  return ids;
}

CaseResult check_continuity(const Function& f, const ConfParams& p, double t, const CheckTolerances& tol) {
  CaseResult c = base_case(IdentityId::continuity, f, p.alpha(), p.a(), t);
  c.threshold = tol.check.abs;
  try {
    c.rhs = f.eval(t);
    c.lhs = c.rhs;
    double worst = -1.0;
    std::string sides;
    for (const bool left : {true, false}) {
      const DerivResult d = conf_deriv(f, p, t, left ? Side::left : Side::right, tol.kernel);
      if (!d.converged) continue;
      const Decay dec = continuity_decay(f, t, first_probe(f, t, p.a(), left), left);
      sides += sides.empty() ? "" : ", ";
      sides += left ? "left" : "right";
      if (dec.residual > worst) {
        worst = dec.residual;
        c.lhs = dec.last;
      }
    }
    if (worst < 0.0) return not_applicable(c, "no one-sided derivative of order alpha exists at t");
    c.residual = worst;
    c.passed = c.residual <= c.threshold;
    c.diagnostics = "checked sides: " + sides;
  } catch (const Error& e) {
    return failed(c, e.what());
  }
  return c;
}

CaseResult check_order_relation(const Function& f, double alpha, double beta, double a, double t,
                                const CheckTolerances& tol) {
  CaseResult c = base_case(IdentityId::order_relation, f, alpha, a, t);
  c.beta = beta;
  try {
    const DerivResult da = conf_deriv(f, ConfParams(alpha, a), t, Side::two_sided, tol.kernel);
    const DerivResult db =
        conf_deriv(f, ConfParams(beta, a), t, Side::two_sided, tol.kernel, independent_probes());
    if (!da.converged || !db.converged) {
      return not_applicable(c, "derivative does not exist numerically: " +
                                   (da.converged ? db.diagnostics : da.diagnostics));
    }
    c.lhs = da.value;
    c.rhs = std::pow(t - a, beta - alpha) * db.value;
    c.threshold = ref_threshold(tol.check, c.lhs);
    judge(c);
  } catch (const Error& e) {
    return failed(c, e.what());
  }
  return c;
}

CaseResult check_equivalence(const Function& f, const ConfParams& p, double t, const CheckTolerances& tol) {
  CaseResult c = base_case(IdentityId::first_derivative_equivalence, f, p.alpha(), p.a(), t);
  try {
    const DerivResult d = conf_deriv(f, p, t, Side::two_sided, tol.kernel);
    const DerivResult s = conf_deriv_scaled(f, p, t, tol.kernel);
    c.lhs = d.value;
    c.rhs = s.value;
    c.threshold = ref_threshold(tol.check, c.rhs);
    if (!d.converged) {
      not_applicable(c, "conformable derivative does not converge: " + d.diagnostics);
      if (s.converged) c.diagnostics += " (first derivative exists)";
      return c;
    }
    judge(c);
    if (!s.converged) c.diagnostics = "first derivative did not converge: " + s.diagnostics;
  } catch (const Error& e) {
    return failed(c, e.what());
  }
  return c;
}

CaseResult check_left_inverse(const Function& f, const ConfParams& p, double t, const CheckTolerances& tol) {
  CaseResult c = base_case(IdentityId::left_inverse, f, p.alpha(), p.a(), t);
  try {
    const DerivResult dt = conf_deriv(f, p, t, Side::two_sided, tol.kernel);
    if (!dt.converged) return not_applicable(c, "f is not alpha-differentiable at t: " + dt.diagnostics);
    const LimitEstimate f0 = right_limit(f, p.a(), tol.kernel);
    if (!f0.converged) return not_applicable(c, "f(a+0) does not exist numerically: " + f0.diagnostics);

    DerivOptions quick;
    quick.check_sides = false;
    const Tolerance inner = tol.kernel;
    // Below a + delta, t - a has too few significant bits for a difference
    // quotient; the derivative is frozen at a + delta there. The integral
    // changes by at most delta |f'| / alpha for f differentiable near a.
    const double floor = p.a() + 1e-10 * std::max(1.0, std::abs(p.a()));
    const Function df = make_callable(
        [f, p, inner, quick, floor](double s) {
          return conf_deriv(f, p, std::max(s, floor), Side::two_sided, inner, quick).value;
        },
        f.shape(), Interval{p.a(), f.domain().hi}, "T(" + f.describe() + ")");
    // The integrand is only as accurate as the derivative kernel.
    c.lhs = conf_integral(df, p, t, tol.kernel);
    c.rhs = f.eval(t) - f0.value;
    c.threshold = ref_threshold(tol.check, c.rhs);
    judge(c);

    if (f.domain().contains(p.a())) {
      try {
        const Value fa = f.eval(p.a());
        if (distance(fa, f0.value) > tol.check.threshold(norm(f0.value))) {
          c.diagnostics = "jump at the terminal: f(a) = " + to_string(fa) + ", f(a+0) = " +
                          to_string(f0.value) + "; compared against f(a+0)";
        }
      } catch (const DomainError&) {
      }
    }
  } catch (const QuadratureError& e) {
    return failed(c, std::string("integral of the derivative diverges: ") + e.what());
  } catch (const Error& e) {
    return failed(c, e.what());
  }
  return c;
}

CaseResult check_right_inverse(const Function& f, const ConfParams& p, double t, const CheckTolerances& tol) {
  const double a = p.a();
  const bool at_terminal = t == a;
  CaseResult c = base_case(at_terminal ? IdentityId::right_inverse_at_terminal : IdentityId::right_inverse, f,
                           p.alpha(), a, t);
  try {
    if (t < a) throw LowerTerminalError("check_right_inverse: t below the lower terminal");
    const double probe_end = at_terminal ? a + std::min(1.0, f.domain().hi - a) : t;
    if (!bounded_near_terminal(f, a, probe_end)) {
      return not_applicable(c, "f is unbounded near the lower terminal");
    }
    if (at_terminal) {
      const LimitEstimate f0 = right_limit(f, a, tol.kernel);
      if (!f0.converged) {
        return not_applicable(c, "f has no finite limit at a+: " + f0.diagnostics);
      }
      const Function g = conf_integral_function(f, p, tol.quad);
      const DerivResult d = lower_terminal_deriv(g, p, tol.terminal);
      c.lhs = d.value;
      c.rhs = f0.value;
      c.threshold = ref_threshold(tol.terminal, c.rhs);
      judge(c);
      if (!d.converged) {
        c.passed = false;
        c.diagnostics = d.diagnostics;
      }
      return c;
    }

    const Decay dl = continuity_decay(f, t, first_probe(f, t, a, true), true);
    const Decay dr = continuity_decay(f, t, first_probe(f, t, a, false), false);
    if (std::max(dl.residual, dr.residual) > tol.check.abs) {
      return not_applicable(c, "f is not continuous at t");
    }
    const Function g = conf_integral_function(f, p, tol.quad, t);
    const DerivResult d = conf_deriv(g, p, t, Side::two_sided, tol.kernel);
    c.lhs = d.value;
    c.rhs = f.eval(t);
    c.threshold = ref_threshold(tol.check, c.rhs);
    judge(c);
    if (!d.converged) c.diagnostics = d.diagnostics;
  } catch (const QuadratureError& e) {
    return not_applicable(c, std::string("integral does not exist numerically: ") + e.what());
  } catch (const Error& e) {
    return failed(c, e.what());
  }
  return c;
}

CaseResult check_lower_vanishing(const Function& f, double alpha, double beta, double a,
                                 const CheckTolerances& tol) {
  CaseResult c = base_case(IdentityId::lower_terminal_vanishing, f, alpha, a, a);
  c.beta = beta;
  try {
    if (!(beta < alpha)) return not_applicable(c, "requires beta < alpha");
    const DerivResult da = lower_terminal_deriv(f, ConfParams(alpha, a), tol.terminal);
    if (!da.converged) {
      return not_applicable(c, "derivative of order alpha at a does not exist: " + da.diagnostics);
    }
    const DerivResult db = lower_terminal_deriv(f, ConfParams(beta, a), tol.terminal);
    c.lhs = db.value;
    c.rhs = Value::zeros(f.shape());
    c.threshold = tol.terminal.abs + tol.terminal.rel;
    judge(c);
    if (!db.converged) {
      c.passed = false;
      c.diagnostics = db.diagnostics;
    }
  } catch (const Error& e) {
    return failed(c, e.what());
  }
  return c;
}

std::vector<CaseResult> check_algebra_rules(const Function& f, const Function& g, double cf, double dg,
                                            const ConfParams& p, double t, const CheckTolerances& tol) {
  const auto with_pair = [&](IdentityId id) {
    CaseResult c = base_case(id, f, p.alpha(), p.a(), t);
    c.g = g.describe();
    return c;
  };
  const auto deriv = [&](const Function& h) { return conf_deriv(h, p, t, Side::two_sided, tol.kernel); };
  std::vector<CaseResult> out;

  CaseResult lin = with_pair(IdentityId::linearity);
  lin.c = cf;
  lin.d = dg;
  try {
    if (f.shape() != g.shape()) {
      not_applicable(lin, "f and g take values in different spaces");
    } else {
      const DerivResult dh = deriv(linear_combination(cf, f, dg, g));
      const DerivResult df = deriv(f);
      const DerivResult dd = deriv(g);
      if (!dh.converged || !df.converged || !dd.converged) {
        not_applicable(lin, "a derivative does not exist numerically");
      } else {
        lin.lhs = dh.value;
        lin.rhs = axpy(cf, df.value, dg, dd.value);
        lin.threshold = ref_threshold(tol.check, lin.rhs) + dh.err_estimate +
                        std::abs(cf) * df.err_estimate + std::abs(dg) * dd.err_estimate;
        judge(lin);
      }
    }
  } catch (const Error& e) {
    failed(lin, e.what());
  }
  out.push_back(std::move(lin));

  CaseResult cst = base_case(IdentityId::constant_rule, f, p.alpha(), p.a(), t);
  try {
    const Value k = f.eval(t);
    const Function kf = make_constant(k);
    cst.f = kf.describe();
    const DerivResult dk = deriv(kf);
    cst.lhs = dk.value;
    cst.rhs = Value::zeros(k.shape());
    cst.threshold = tol.check.abs;
    judge(cst);
  } catch (const Error& e) {
    failed(cst, e.what());
  }
  out.push_back(std::move(cst));

  // Product and quotient rules need values in a commutative algebra.
  const auto commutative = [&](std::string& why) {
    if (f.shape() != g.shape()) {
      why = "f and g take values in different spaces";
      return false;
    }
    if (!f.shape().is_algebra()) {
      why = "values do not form an algebra";
      return false;
    }
    if (!Value::zeros(f.shape()).is_commutative()) {
      why = "algebra of " + f.shape().str() + " values is not commutative";
      return false;
    }
    return true;
  };

  CaseResult prod = with_pair(IdentityId::product_rule);
  try {
    std::string why;
    if (!commutative(why)) {
      not_applicable(prod, why);
    } else {
      const DerivResult dh = deriv(product(f, g));
      const DerivResult df = deriv(f);
      const DerivResult dd = deriv(g);
      if (!dh.converged || !df.converged || !dd.converged) {
        not_applicable(prod, "a derivative does not exist numerically");
      } else {
        const Value ft = f.eval(t);
        const Value gt = g.eval(t);
        prod.lhs = dh.value;
        prod.rhs = mul(gt, df.value) + mul(ft, dd.value);
        prod.threshold = ref_threshold(tol.check, prod.rhs);
        judge(prod);
      }
    }
  } catch (const Error& e) {
    failed(prod, e.what());
  }
  out.push_back(std::move(prod));

  CaseResult quot = with_pair(IdentityId::quotient_rule);
  try {
    std::string why;
    if (!commutative(why)) {
      not_applicable(quot, why);
    } else {
      const Value gt = g.eval(t);
      std::optional<Value> ginv;
      try {
        ginv = inverse(gt);
      } catch (const AlgebraError&) {
      }
      if (!ginv || !ginv->is_finite() || norm(gt) * norm(*ginv) > 1e12) {
        not_applicable(quot, "g(t) is not invertible");
      } else {
        const DerivResult dh = deriv(quotient(f, g));
        const DerivResult df = deriv(f);
        const DerivResult dd = deriv(g);
        if (!dh.converged || !df.converged || !dd.converged) {
          not_applicable(quot, "a derivative does not exist numerically");
        } else {
          const Value ft = f.eval(t);
          const Value ginv2 = mul(*ginv, *ginv);
          quot.lhs = dh.value;
          quot.rhs = mul(mul(gt, df.value) - mul(ft, dd.value), ginv2);
          quot.threshold = ref_threshold(tol.check, quot.rhs);
          judge(quot);
        }
      }
    }
  } catch (const Error& e) {
    failed(quot, e.what());
  }
  out.push_back(std::move(quot));
  return out;
}

CaseResult check_average_recovery(const Function& f, double t, const CheckTolerances& tol) {
  CaseResult c = base_case(IdentityId::average_recovery, f, 1.0, t, t);
  try {
    const Decay dl = continuity_decay(f, t, first_probe(f, t, -kInf, true), true);
    const Decay dr = continuity_decay(f, t, first_probe(f, t, -kInf, false), false);
    if (std::max(dl.residual, dr.residual) > tol.check.abs) {
      return not_applicable(c, "t is not a continuity point of f");
    }
    const LimitEstimate e = avg_recover_ex(f, t, tol.kernel);
    c.lhs = e.value;
    c.rhs = f.eval(t);
    c.threshold = ref_threshold(tol.check, c.rhs);
    judge(c);
    if (!e.converged) c.diagnostics = e.diagnostics;
  } catch (const Error& e) {
    return failed(c, e.what());
  }
  return c;
}

CaseResult check_class_equality(const Function& f, double alpha, double beta, double a, double t,
                                const CheckTolerances& tol) {
  CaseResult c = base_case(IdentityId::order_class_equality, f, alpha, a, t);
  c.beta = beta;
  try {
    const DerivResult da = conf_deriv(f, ConfParams(alpha, a), t, Side::two_sided, tol.kernel);
    const DerivResult db = conf_deriv(f, ConfParams(beta, a), t, Side::two_sided, tol.kernel);
    c.lhs = da.converged ? 1.0 : 0.0;
    c.rhs = db.converged ? 1.0 : 0.0;
    c.threshold = 0.0;
    judge(c);
    if (!da.converged || !db.converged) {
      c.diagnostics = "alpha: " + std::string(da.converged ? "exists" : da.diagnostics) +
                      "; beta: " + std::string(db.converged ? "exists" : db.diagnostics);
    }
  } catch (const Error& e) {
    return failed(c, e.what());
  }
  return c;
}

std::vector<CorpusEntry> default_corpus() {
  const auto fixed = [](std::string spec) {
    return [spec](double, double) { return make_builtin(spec); };
  };
  std::vector<CorpusEntry> c;
  c.push_back({"1", fixed("one"), {}, false});
  c.push_back({"t", fixed("t"), {}, false});
  c.push_back({"t^2", fixed("t2"), {}, false});
  c.push_back({"t^alpha", [](double alpha, double) { return make_builtin("pow:" + num(alpha)); }, {0.0}, true});
  c.push_back({"(t-a)^alpha",
               [](double alpha, double a) { return make_builtin("pow:" + num(alpha) + ":" + num(a)); },
               {},
               true});
  c.push_back({"exp(t)", fixed("exp"), {}, false});
  c.push_back({"sin(t)", fixed("sin"), {}, false});
  c.push_back({"t*sin(t)", fixed("tsin"), {}, false});
  c.push_back({"[t^2, sin(t), exp(t)]",
               [](double, double) {
                 return make_vector({make_builtin("t2"), make_builtin("sin"), make_builtin("exp")});
               },
               {},
               false});
  c.push_back({"diag(t, t^2)",
               [](double, double) { return make_diag({make_builtin("t"), make_builtin("t2")}); },
               {},
               false});
  return c;
}

IdentityReport make_report(std::vector<CaseResult> cases) {
  IdentityReport r;
  r.cases = std::move(cases);
  for (const auto& c : r.cases) {
    ++r.summary.total;
    if (!c.applicable) {
      ++r.summary.not_applicable;
    } else if (c.passed) {
      ++r.summary.applicable;
      ++r.summary.passed;
    } else {
      ++r.summary.applicable;
      ++r.summary.failed;
    }
  }
  return r;
}

IdentityReport run_suite(const SuiteConfig& cfg) {
  const auto wanted = [&](IdentityId id) {
    return std::find(cfg.identities.begin(), cfg.identities.end(), id) != cfg.identities.end();
  };
  std::map<IdentityId, std::vector<CaseResult>> bucket;
  const auto add = [&](CaseResult c) { bucket[c.id].push_back(std::move(c)); };
  const CheckTolerances& tol = cfg.tol;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  const bool algebra = wanted(IdentityId::linearity) || wanted(IdentityId::constant_rule) ||
                       wanted(IdentityId::product_rule) || wanted(IdentityId::quotient_rule);

  for (std::size_t ei = 0; ei < cfg.corpus.size(); ++ei) {
    const CorpusEntry& entry = cfg.corpus[ei];
    const std::vector<double>& terminals = entry.fixed_terminals.empty() ? cfg.terminals : entry.fixed_terminals;

    // Partner for two-function rules: next entry with the same shape.
    const CorpusEntry* partner = &entry;
    const Shape shape0 = entry.make(1.0, 0.0).shape();
    for (std::size_t k = 1; k < cfg.corpus.size(); ++k) {
      const CorpusEntry& cand = cfg.corpus[(ei + k) % cfg.corpus.size()];
      if (cand.fixed_terminals.empty() && cand.make(1.0, 0.0).shape() == shape0) {
        partner = &cand;
        break;
      }
    }

    for (double a : terminals) {
      for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
        const double alpha = cfg.alphas[ai];
        const ConfParams p(alpha, a);
        const Function f = entry.make(alpha, a);

        for (double off : cfg.offsets) {
          const double t = a + off;
          if (wanted(IdentityId::continuity)) add(check_continuity(f, p, t, tol));
          if (wanted(IdentityId::first_derivative_equivalence)) add(check_equivalence(f, p, t, tol));
          for (std::size_t bi = ai + 1; bi < cfg.alphas.size(); ++bi) {
            const double beta = cfg.alphas[bi];
            if (wanted(IdentityId::order_relation)) add(check_order_relation(f, alpha, beta, a, t, tol));
            if (wanted(IdentityId::order_class_equality)) add(check_class_equality(f, alpha, beta, a, t, tol));
          }
          if (algebra) {
            const double c = coef(rng);
            const double d = coef(rng);
            for (auto& r : check_algebra_rules(f, partner->make(alpha, a), c, d, p, t, tol)) {
              if (wanted(r.id)) add(std::move(r));
            }
          }
          if (wanted(IdentityId::average_recovery) && (ai == 0 || entry.depends_on_alpha)) {
            CaseResult r = check_average_recovery(f, t, tol);
            r.alpha = alpha;
            r.a = a;
            add(std::move(r));
          }
        }
        for (double off : cfg.inverse_offsets) {
          if (wanted(IdentityId::left_inverse)) add(check_left_inverse(f, p, a + off, tol));
          if (wanted(IdentityId::right_inverse)) add(check_right_inverse(f, p, a + off, tol));
        }
        if (wanted(IdentityId::right_inverse_at_terminal)) add(check_right_inverse(f, p, a, tol));
        if (wanted(IdentityId::lower_terminal_vanishing)) {
          for (std::size_t bi = 0; bi < ai; ++bi) {
            add(check_lower_vanishing(f, alpha, cfg.alphas[bi], a, tol));
          }
        }
      }
    }
  }

  std::vector<CaseResult> all;
  for (IdentityId id : all_identities()) {
    auto it = bucket.find(id);
    if (it == bucket.end()) continue;
    for (auto& c : it->second) all.push_back(std::move(c));
  }
  return make_report(std::move(all));
}

nlohmann::json to_json(const CaseResult& c) {
  using nlohmann::json;
  json inputs = {{"f", c.f}, {"alpha", c.alpha}, {"a", c.a}, {"t", c.t}};
  if (!c.g.empty()) inputs["g"] = c.g;
  if (c.beta) inputs["beta"] = *c.beta;
  if (c.c) inputs["c"] = *c.c;
  if (c.d) inputs["d"] = *c.d;
  json j = {{"id", to_string(c.id)},
            {"statement", statement(c.id)},
            {"inputs", inputs},
            {"applicable", c.applicable},
            {"passed", c.passed},
            {"diagnostics", c.diagnostics}};
  if (c.applicable) {
    j["lhs"] = to_json(c.lhs);
    j["rhs"] = to_json(c.rhs);
    j["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
    j["threshold"] = c.threshold;
  } else {
    j["lhs"] = nullptr;
    j["rhs"] = nullptr;
    j["residual"] = nullptr;
    j["threshold"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) cases.push_back(to_json(c));
  return {{"summary",
           {{"total", r.summary.total},
            {"applicable", r.summary.applicable},
            {"passed", r.summary.passed},
            {"failed", r.summary.failed},
            {"not_applicable", r.summary.not_applicable}}},
          {"cases", cases}};
}

void write_table(std::ostream& os, const IdentityReport& r) {
  const auto fmt = [](double x) {
    std::ostringstream s;
    s << std::setprecision(3) << std::scientific << x;
    return s.str();
  };
  os << std::left << std::setw(30) << "identity" << std::setw(26) << "f" << std::setw(7) << "alpha"
     << std::setw(7) << "beta" << std::setw(6) << "a" << std::setw(8) << "t" << std::setw(12) << "residual"
     << std::setw(12) << "threshold" << "status\n";
  for (const auto& c : r.cases) {
    std::ostringstream beta;
    if (c.beta) beta << *c.beta;
    os << std::left << std::setw(30) << to_string(c.id) << std::setw(26) << c.f.substr(0, 25) << std::setw(7)
       << c.alpha << std::setw(7) << beta.str() << std::setw(6) << c.a << std::setw(8) << c.t;
    if (c.applicable) {
      os << std::setw(12) << fmt(c.residual) << std::setw(12) << fmt(c.threshold)
         << (c.passed ? "pass" : "FAIL");
    } else {
      os << std::setw(12) << "-" << std::setw(12) << "-" << "n/a";
    }
    if (!c.diagnostics.empty() && !(c.applicable && c.passed)) os << "  " << c.diagnostics;
    os << '\n';
  }
  os << "total " << r.summary.total << ", passed " << r.summary.passed << ", failed " << r.summary.failed
     << ", not applicable " << r.summary.not_applicable << '\n';
}

}  // namespace confcalc
