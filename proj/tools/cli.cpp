#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "confcalc/calculus.hpp"
#include "confcalc/errors.hpp"
#include "confcalc/funcs.hpp"
#include "confcalc/identities.hpp"
#include "confcalc/ivp.hpp"
#include "json.hpp"

namespace confcalc::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Source {
  std::vector<std::string> exprs;
  std::vector<std::string> grids;
  std::vector<std::string> builtins;
  std::string interp = "cubic";

  std::string kind() const {
    const int kinds = !exprs.empty() + !grids.empty() + !builtins.empty();
    if (kinds != 1) throw UsageError("exactly one of --expr, --grid, --builtin is required");
    if (!exprs.empty()) return "expr";
    if (!grids.empty()) return "grid";
    return "builtin";
  }
  const std::vector<std::string>& items() const {
    const std::string k = kind();
    return k == "expr" ? exprs : k == "grid" ? grids : builtins;
  }
};

struct Options {
  Source src;
  double alpha = 1.0;
  double beta = 1.0;
  double a = 0.0;
  double t = 0.0;
  std::string t_range;
  std::string side = "two-sided";
  bool scaled = false;
  double rel = 0.0;
  double abs = 0.0;
  std::string format = "json";
  std::string output;

  std::string value_json;

  std::vector<std::string> identities;
  std::vector<double> alphas;
  std::vector<double> terminals;
  std::vector<double> offsets;
  std::uint64_t seed = 0;

  std::vector<std::string> rhs;
  std::vector<double> x0;
  double t_end = 1.0;
  int steps = 1000;
  std::string method = "tau";
  bool cross_validate = false;

  // Set after parsing from the option counts.
  bool has_t = false;
  bool has_beta = false;
  bool has_rel = false;
  bool has_abs = false;
  bool has_seed = false;
};

std::string num(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string substitute(std::string s, double alpha, double a) {
  const auto replace = [&s](const std::string& key, const std::string& val) {
    for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + val.size())) {
      s.replace(pos, key.size(), val);
    }
  };
  replace("{alpha}", num(alpha));
  replace("{a}", num(a));
  return s;
}

InterpKind interp_kind(const std::string& s) {
  if (s == "linear") return InterpKind::linear;
  if (s == "cubic") return InterpKind::cubic_hermite;
  throw UsageError("unknown interpolation '" + s + "'");
}

Function build_one(const std::string& kind, const std::string& item, const std::string& interp) {
  try {
    if (kind == "expr") return make_expr(item);
    if (kind == "grid") return make_grid(read_grid_csv_file(item, interp_kind(interp)));
    return make_builtin(item);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("bad --" + kind + " '" + item + "': " + e.what());
  }
}

/// Repeated sources form a vector-valued function.
Function build_function(const Source& src) {
  const std::string kind = src.kind();
  const auto& items = src.items();
  if (items.size() == 1) return build_one(kind, items[0], src.interp);
  std::vector<Function> comps;
  for (const auto& item : items) {
    comps.push_back(build_one(kind, item, src.interp));
    if (comps.back().shape().kind != ShapeKind::scalar) {
      throw UsageError("repeated --" + kind + " components must be scalar");
    }
  }
  return make_vector(std::move(comps));
}

json source_json(const Source& src) {
  json j = {{"kind", src.kind()}, {"items", src.items()}};
  if (src.kind() == "grid") j["interp"] = src.interp;
  return j;
}

Tolerance parse_tol_env(const char* text) {
  Tolerance tol;
  std::string s(text);
  const auto comma = s.find(',');
  try {
    std::size_t used = 0;
    const std::string rel = s.substr(0, comma);
    tol.rel = std::stod(rel, &used);
    if (used != rel.size()) throw std::invalid_argument(rel);
    if (comma != std::string::npos) {
      const std::string abs = s.substr(comma + 1);
      tol.abs = std::stod(abs, &used);
      if (used != abs.size()) throw std::invalid_argument(abs);
    }
  } catch (const std::logic_error&) {
    throw UsageError("CONFCALC_TOL must be 'rel[,abs]', got '" + s + "'");
  }
  return tol;
}

/// Defaults, then CONFCALC_TOL, then --rel / --abs.
Tolerance resolve_tol(const Options& o) {
  Tolerance tol;
  if (const char* env = std::getenv("CONFCALC_TOL"); env != nullptr && *env != '\0') tol = parse_tol_env(env);
  if (o.has_rel) tol.rel = o.rel;
  if (o.has_abs) tol.abs = o.abs;
  try {
    validate(tol);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  return tol;
}

void require_alpha(double alpha, const char* name) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError(std::string(name) + " must lie in (0, 1]");
}

std::vector<double> t_values(const Options& o) {
  if (o.has_t == !o.t_range.empty()) throw UsageError("exactly one of --t, --t-range is required");
  if (o.has_t) return {o.t};
  double start = 0.0;
  double stop = 0.0;
  long count = 0;
  std::istringstream in(o.t_range);
  char c1 = 0;
  char c2 = 0;
  if (!(in >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' || !in.eof() || count < 1 ||
      !std::isfinite(start) || !std::isfinite(stop)) {
    throw UsageError("--t-range must be start:stop:count with count >= 1");
  }
  if (count == 1) return {start};
  std::vector<double> ts(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    ts[static_cast<std::size_t>(i)] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  ts.back() = stop;
  return ts;
}

json tol_json(const Tolerance& tol) { return {{"rel", tol.rel}, {"abs", tol.abs}}; }

struct Record {
  double t = std::numeric_limits<double>::quiet_NaN();
  std::optional<Value> value;
  double err = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  std::string diagnostics;
  json extra = json::object();
};

json record_json(const json& config, const Record& r, bool has_t) {
  json inputs = config;
  if (has_t) inputs["t"] = r.t;
  json j = {{"inputs", inputs},
            {"value", r.value ? to_json(*r.value) : json(nullptr)},
            {"err_estimate", std::isfinite(r.err) ? json(r.err) : json(nullptr)},
            {"converged", r.converged},
            {"diagnostics", r.diagnostics}};
  for (auto it = r.extra.begin(); it != r.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

/// Evaluates fn at every t; a library error at one point becomes a
/// non-converged record and the sweep continues.
std::vector<Record> sweep(const std::vector<double>& ts, const std::function<Record(double)>& fn) {
  std::vector<Record> out;
  out.reserve(ts.size());
  for (double t : ts) {
    Record r;
    try {
      r = fn(t);
    } catch (const Error& e) {
      r = Record{};
      r.diagnostics = e.what();
    }
    r.t = t;
    out.push_back(std::move(r));
  }
  return out;
}

Record from_deriv(const DerivResult& d) {
  Record r;
  r.value = d.value;
  r.err = d.err_estimate;
  r.converged = d.converged;
  r.diagnostics = d.diagnostics;
  if (d.left) r.extra["left"] = to_json(*d.left);
  if (d.right) r.extra["right"] = to_json(*d.right);
  return r;
}

void write_records_csv(std::ostream& os, const std::vector<Record>& records, bool has_t) {
  std::size_t width = 1;
  for (const auto& r : records) {
    if (r.value) width = r.value->size();
  }
  os.precision(17);
  if (has_t) os << "t,";
  os << "err_estimate,converged";
  if (width == 1) {
    os << ",value";
  } else {
    for (std::size_t k = 0; k < width; ++k) os << ",value" << k;
  }
  os << '\n';
  for (const auto& r : records) {
    if (has_t) os << r.t << ',';
    os << r.err << ',' << (r.converged ? 1 : 0);
    for (std::size_t k = 0; k < width; ++k) {
      os << ',';
      if (r.value && k < r.value->size()) {
        os << (*r.value)[k];
      } else {
        os << "nan";
      }
    }
    os << '\n';
  }
}

int emit_records(std::ostream& os, const Options& o, const std::string& command, const json& config,
                 const std::vector<Record>& records, bool has_t) {
  int converged = 0;
  for (const auto& r : records) converged += r.converged;
  const int total = static_cast<int>(records.size());
  if (o.format == "csv") {
    write_records_csv(os, records, has_t);
  } else {
    json recs = json::array();
    for (const auto& r : records) recs.push_back(record_json(config, r, has_t));
    json doc = {{"command", command},
                {"records", recs},
                {"summary", {{"total", total}, {"converged", converged}, {"failed", total - converged}}}};
    os << doc.dump(2) << '\n';
  }
  return converged == total ? 0 : 1;
}

json base_config(const std::string& command, const Options& o, const Tolerance& tol) {
  return {{"command", command}, {"alpha", o.alpha}, {"a", o.a}, {"function", source_json(o.src)},
          {"tol", tol_json(tol)}};
}

int cmd_deriv(const Options& o, std::ostream& os) {
  require_alpha(o.alpha, "--alpha");
  const Tolerance tol = resolve_tol(o);
  const auto ts = t_values(o);
  const Function f = build_function(o.src);
  Side side;
  try {
    side = side_from_string(o.side);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  const ConfParams p(o.alpha, o.a);
  json config = base_config("deriv", o, tol);
  config["side"] = to_string(side);
  config["scaled"] = o.scaled;
  const auto records = sweep(ts, [&](double t) {
    return from_deriv(o.scaled ? conf_deriv_scaled(f, p, t, tol) : conf_deriv(f, p, t, side, tol));
  });
  return emit_records(os, o, "deriv", config, records, true);
}

int cmd_integ(const Options& o, std::ostream& os) {
  require_alpha(o.alpha, "--alpha");
  const Tolerance tol = resolve_tol(o);
  const auto ts = t_values(o);
  const Function f = build_function(o.src);
  const ConfParams p(o.alpha, o.a);
  const auto records = sweep(ts, [&](double t) {
    Record r;
    try {
      const IntegralResult res = conf_integral_ex(f, p, t, tol);
      r.value = res.value;
      r.err = res.err;
      r.converged = true;
      r.extra["intervals"] = res.intervals;
    } catch (const QuadratureError& e) {
      r.err = e.achieved();
      r.diagnostics = e.what();
    }
    return r;
  });
  return emit_records(os, o, "integ", base_config("integ", o, tol), records, true);
}

int cmd_convert(const Options& o, std::ostream& os) {
  require_alpha(o.alpha, "--alpha");
  if (!o.has_beta) throw UsageError("--beta is required");
  require_alpha(o.beta, "--beta");
  const Tolerance tol = resolve_tol(o);
  const auto ts = t_values(o);
  json config = {{"command", "convert"}, {"alpha", o.alpha}, {"beta", o.beta}, {"a", o.a},
                 {"tol", tol_json(tol)}};

  const int kinds = !o.value_json.empty() + !o.src.exprs.empty() + !o.src.grids.empty() + !o.src.builtins.empty();
  if (kinds != 1) throw UsageError("convert takes exactly one of --value or a function source");

  std::vector<Record> records;
  if (!o.value_json.empty()) {
    Value given;
    try {
      given = value_from_json(json::parse(o.value_json));
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad --value: ") + e.what());
    }
    config["value"] = json::parse(o.value_json);
    records = sweep(ts, [&](double t) {
      Record r;
      r.value = convert_order(given, o.alpha, o.beta, o.a, t);
      r.err = 0.0;
      r.converged = true;
      return r;
    });
  } else {
    const Function f = build_function(o.src);
    config["function"] = source_json(o.src);
    const ConfParams p(o.alpha, o.a);
    records = sweep(ts, [&](double t) {
      const DerivResult d = conf_deriv(f, p, t, Side::two_sided, tol);
      Record r = from_deriv(d);
      const double scale = std::pow(t - o.a, o.alpha - o.beta);
      r.value = convert_order(d.value, o.alpha, o.beta, o.a, t);
      r.err = d.err_estimate * scale;
      r.extra["t_alpha"] = to_json(d.value);
      return r;
    });
  }
  return emit_records(os, o, "convert", config, records, true);
}

int cmd_limit(const Options& o, std::ostream& os) {
  require_alpha(o.alpha, "--alpha");
  const Tolerance tol = resolve_tol(o);
  const Function f = build_function(o.src);
  const ConfParams p(o.alpha, o.a);
  Record r;
  try {
    r = from_deriv(lower_terminal_deriv(f, p, tol));
  } catch (const Error& e) {
    r.diagnostics = e.what();
  }
  return emit_records(os, o, "limit", base_config("limit", o, tol), {r}, false);
}

SuiteConfig suite_config(const Options& o) {
  SuiteConfig cfg;
  if (!o.alphas.empty()) {
    for (double al : o.alphas) require_alpha(al, "--alphas");
    cfg.alphas = o.alphas;
  }
  if (!o.terminals.empty()) cfg.terminals = o.terminals;
  if (!o.offsets.empty()) {
    for (double d : o.offsets) {
      if (!(d > 0.0)) throw UsageError("--offsets must be positive");
    }
    cfg.offsets = o.offsets;
  }
  if (o.has_seed) cfg.seed = o.seed;
  if (!o.identities.empty()) {
    cfg.identities.clear();
    for (const auto& name : o.identities) {
      try {
        cfg.identities.push_back(identity_from_string(name));
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
  }
  const int kinds = !o.src.exprs.empty() + !o.src.grids.empty() + !o.src.builtins.empty();
  if (kinds > 1) throw UsageError("check takes at most one kind of function source");
  if (kinds == 1) {
    cfg.corpus.clear();
    const std::string kind = o.src.kind();
    for (const auto& item : o.src.items()) {
      // Validate once up front so a typo is a usage error, not a failed case.
      build_one(kind, substitute(item, cfg.alphas.front(), cfg.terminals.front()), o.src.interp);
      CorpusEntry e;
      e.name = item;
      e.depends_on_alpha = item.find("{alpha}") != std::string::npos;
      e.make = [kind, item, interp = o.src.interp](double alpha, double a) {
        return build_one(kind, substitute(item, alpha, a), interp);
      };
      cfg.corpus.push_back(std::move(e));
    }
  }
  return cfg;
}

int cmd_check(const Options& o, std::ostream& os) {
  if (o.format != "json" && o.format != "csv" && o.format != "table") {
    throw UsageError("check --format must be json, csv or table");
  }
  SuiteConfig cfg = suite_config(o);
  IdentityReport report;
  try {
    report = run_suite(cfg);
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(std::string("check: ") + e.what());
  }

  if (o.format == "table") {
    write_table(os, report);
  } else if (o.format == "csv") {
    os.precision(17);
    os << "id,f,g,alpha,beta,a,t,residual,threshold,applicable,passed\n";
    const auto opt = [](const std::optional<double>& x) { return x ? num(*x) : std::string(); };
    for (const auto& c : report.cases) {
      os << to_string(c.id) << ",\"" << c.f << "\",\"" << c.g << "\"," << c.alpha << ',' << opt(c.beta) << ','
         << c.a << ',' << c.t << ',';
      if (c.applicable) os << c.residual << ',' << c.threshold;
      else os << ',';
      os << ',' << c.applicable << ',' << c.passed << '\n';
    }
  } else {
    json names = json::array();
    for (const auto& e : cfg.corpus) names.push_back(e.name);
    json ids = json::array();
    for (auto id : cfg.identities) ids.push_back(to_string(id));
    json doc = to_json(report);
    json out = {{"command", "check"},
                {"config",
                 {{"corpus", names},
                  {"identities", ids},
                  {"alphas", cfg.alphas},
                  {"terminals", cfg.terminals},
                  {"offsets", cfg.offsets},
                  {"inverse_offsets", cfg.inverse_offsets},
                  {"seed", cfg.seed},
                  {"tolerances",
                   {{"check", tol_json(cfg.tol.check)},
                    {"terminal", tol_json(cfg.tol.terminal)},
                    {"kernel", tol_json(cfg.tol.kernel)},
                    {"quad", tol_json(cfg.tol.quad)}}}}},
                {"records", doc["cases"]},
                {"summary", doc["summary"]}};
    os << out.dump(2) << '\n';
  }
  return report.all_passed() ? 0 : 1;
}

int cmd_ivp(const Options& o, std::ostream& os) {
  require_alpha(o.alpha, "--alpha");
  const Tolerance tol = resolve_tol(o);
  if (o.rhs.empty()) throw UsageError("--rhs is required");
  if (o.x0.size() != o.rhs.size()) throw UsageError("give one --x0 per --rhs");
  if (!(o.t_end > o.a)) throw UsageError("--t-end must exceed --a");
  if (o.steps < 1) throw UsageError("--steps must be positive");
  if (o.method != "tau" && o.method != "volterra") throw UsageError("--method must be tau or volterra");

  IvpProblem prob;
  try {
    prob.rhs = rhs_from_exprs(o.rhs);
  } catch (const Error& e) {
    throw UsageError(std::string("bad --rhs: ") + e.what());
  }
  prob.p = ConfParams(o.alpha, o.a);
  prob.x0 = o.x0.size() == 1 ? Value(o.x0[0]) : Value::vector(o.x0);
  prob.t_end = o.t_end;

  json config = {{"command", "ivp"},       {"alpha", o.alpha},   {"a", o.a},
                 {"rhs", o.rhs},           {"x0", o.x0},         {"t_end", o.t_end},
                 {"steps", o.steps},       {"method", o.method}, {"cross_validate", o.cross_validate},
                 {"tol", tol_json(tol)}};

  std::optional<Trajectory> traj;
  Record r;
  try {
    traj = o.method == "tau" ? solve_tau(prob, o.steps) : solve_volterra(prob, o.steps, tol);
    r.value = traj->x.back();
    r.converged = true;
    if (o.cross_validate) {
      double sup = 0.0;
      for (const auto& x : traj->x) sup = std::max(sup, norm(x));
      const double dev = cross_validate(prob, o.steps, tol);
      const double thr = tol.threshold(sup);
      r.err = dev;
      r.converged = dev <= thr;
      r.extra["cross_validation"] = {{"deviation", dev}, {"threshold", thr}, {"passed", dev <= thr}};
      if (!r.converged) r.diagnostics = "tau and Volterra solutions disagree beyond tolerance";
    }
  } catch (const Error& e) {
    r.converged = false;
    r.diagnostics = e.what();
  }

  if (o.format == "csv") {
    if (traj) write_csv(os, *traj);
    return r.converged ? 0 : 1;
  }
  r.extra["trajectory"] = traj ? to_json(*traj) : json(nullptr);
  const int rc = emit_records(os, o, "ivp", config, {r}, false);
  return rc;
}

void add_source(CLI::App* sub, Options& o, bool multi_help) {
  const std::string rep = multi_help ? " (repeatable)" : " (repeat for vector-valued)";
  sub->add_option("--expr", o.src.exprs, "expression in t" + rep)->expected(1)->take_all();
  sub->add_option("--grid", o.src.grids, "CSV file t,v0[,v1,...]" + rep)->expected(1)->take_all();
  sub->add_option("--builtin", o.src.builtins, "builtin function spec" + rep)->expected(1)->take_all();
  sub->add_option("--interp", o.src.interp, "grid interpolation")
      ->check(CLI::IsMember({"linear", "cubic"}))
      ->capture_default_str();
}

void add_order(CLI::App* sub, Options& o) {
  sub->add_option("--alpha", o.alpha, "order in (0, 1]")->capture_default_str();
  sub->add_option("--a", o.a, "lower terminal")->capture_default_str();
}

void add_points(CLI::App* sub, Options& o) {
  sub->add_option("--t", o.t, "evaluation point");
  sub->add_option("--t-range", o.t_range, "start:stop:count, inclusive");
}

void add_tol_output(CLI::App* sub, Options& o, std::vector<std::string> formats) {
  sub->add_option("--rel", o.rel, "relative tolerance (overrides CONFCALC_TOL)");
  sub->add_option("--abs", o.abs, "absolute tolerance (overrides CONFCALC_TOL)");
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
  sub->add_option("--output,-o", o.output, "output file (default stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformable derivative and integral toolkit", "confcalc"};
  app.require_subcommand(1);
  Options o;

  auto* deriv = app.add_subcommand("deriv", "conformable derivative over t");
  add_source(deriv, o, false);
  add_order(deriv, o);
  add_points(deriv, o);
  deriv->add_option("--side", o.side, "left, right or two-sided")
      ->check(CLI::IsMember({"left", "right", "two-sided"}))
      ->capture_default_str();
  deriv->add_flag("--scaled", o.scaled, "use (t - a)^(1 - alpha) f'(t) instead of the theta-limit");
  add_tol_output(deriv, o, {"json", "csv"});

  auto* integ = app.add_subcommand("integ", "conformable integral over t");
  add_source(integ, o, false);
  add_order(integ, o);
  add_points(integ, o);
  add_tol_output(integ, o, {"json", "csv"});

  auto* convert = app.add_subcommand("convert", "convert a derivative of order alpha to order beta");
  add_source(convert, o, false);
  add_order(convert, o);
  add_points(convert, o);
  convert->add_option("--beta", o.beta, "target order in (0, 1]");
  convert->add_option("--value", o.value_json, "T^alpha f(t) as JSON (number, array or nested array)");
  add_tol_output(convert, o, {"json", "csv"});

  auto* limit = app.add_subcommand("limit", "limit of the derivative at the lower terminal");
  add_source(limit, o, false);
  add_order(limit, o);
  add_tol_output(limit, o, {"json", "csv"});

  auto* check = app.add_subcommand("check", "identity suite over a corpus");
  add_source(check, o, true);
  check->add_option("--identity", o.identities, "restrict to these identities (repeatable)")
      ->expected(1)
      ->take_all();
  check->add_option("--alphas", o.alphas, "orders, comma separated")->delimiter(',');
  check->add_option("--terminals", o.terminals, "lower terminals, comma separated")->delimiter(',');
  check->add_option("--offsets", o.offsets, "t - a offsets, comma separated")->delimiter(',');
  check->add_option("--seed", o.seed, "seed for the random coefficients");
  check->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  check->add_option("--output,-o", o.output, "output file (default stdout)");

  auto* ivp = app.add_subcommand("ivp", "solve T^alpha x = F(t, x), x(a) = x0");
  add_order(ivp, o);
  ivp->add_option("--rhs", o.rhs, "F in t and x (or x0, x1, ... for systems; repeatable)")
      ->expected(1)
      ->take_all();
  ivp->add_option("--x0", o.x0, "initial value (one per --rhs)")->expected(1)->take_all();
  ivp->add_option("--t-end", o.t_end, "end of the interval")->capture_default_str();
  ivp->add_option("--steps", o.steps, "uniform steps in tau")->capture_default_str();
  ivp->add_option("--method", o.method, "tau or volterra")
      ->check(CLI::IsMember({"tau", "volterra"}))
      ->capture_default_str();
  ivp->add_flag("--cross-validate", o.cross_validate, "compare against the other solver");
  add_tol_output(ivp, o, {"json", "csv"});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  for (auto* sub : app.get_subcommands()) {
    const auto given = [sub](const char* name) {
      const auto* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    o.has_t = given("--t");
    o.has_beta = given("--beta");
    o.has_rel = given("--rel");
    o.has_abs = given("--abs");
    o.has_seed = given("--seed");
  }

  try {
    std::ofstream file;
    std::ostream* os = &out;
    if (!o.output.empty()) {
      file.open(o.output);
      if (!file) throw UsageError("cannot open '" + o.output + "' for writing");
      os = &file;
    }
    if (deriv->parsed()) return cmd_deriv(o, *os);
    if (integ->parsed()) return cmd_integ(o, *os);
    if (convert->parsed()) return cmd_convert(o, *os);
    if (limit->parsed()) return cmd_limit(o, *os);
    if (check->parsed()) return cmd_check(o, *os);
    return cmd_ivp(o, *os);
  } catch (const UsageError& e) {
    err << "confcalc: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    err << "confcalc: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "confcalc: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace confcalc::cli
