#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "confcalc/calculus.hpp"
#include "confcalc/errors.hpp"
#include "confcalc/identities.hpp"
#include "confcalc/ivp.hpp"

namespace py = pybind11;
using namespace confcalc;

namespace {

// Values cross the boundary as float, list[float] or list[list[float]].
py::object to_py(const Value& v) {
  switch (v.shape().kind) {
    case ShapeKind::scalar:
      return py::float_(v[0]);
    case ShapeKind::vector: {
      py::list out;
      for (double x : v.components()) out.append(x);
      return std::move(out);
    }
    case ShapeKind::matrix: {
      py::list rows;
      for (std::size_t i = 0; i < v.shape().n; ++i) {
        py::list row;
        for (std::size_t j = 0; j < v.shape().n; ++j) row.append(v.at(i, j));
        rows.append(row);
      }
      return std::move(rows);
    }
  }
  return py::none();
}

Value from_py(const py::handle& h) {
  if (py::isinstance<py::float_>(h) || py::isinstance<py::int_>(h)) return Value(h.cast<double>());
  const auto seq = h.cast<py::sequence>();
  if (seq.size() == 0) throw ShapeError("empty sequence is not a value");
  if (py::isinstance<py::float_>(seq[0]) || py::isinstance<py::int_>(seq[0])) {
    return Value::vector(h.cast<std::vector<double>>());
  }
  const auto rows = h.cast<std::vector<std::vector<double>>>();
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw ShapeError("matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Value::matrix(rows.size(), std::move(flat));
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Tolerance tol_of(double rel, double abs) { return Tolerance{rel, abs}; }

py::dict deriv_dict(const DerivResult& d) {
  py::dict out;
  out["value"] = to_py(d.value);
  out["err_estimate"] = d.err_estimate;
  out["converged"] = d.converged;
  out["side"] = to_string(d.side);
  out["steps_used"] = d.steps_used;
  out["diagnostics"] = d.diagnostics;
  out["left"] = d.left ? to_py(*d.left) : py::none();
  out["right"] = d.right ? to_py(*d.right) : py::none();
  return out;
}

Function from_callable(py::function fn, py::object derivative, double lo, double hi, std::string description) {
  // The shape is fixed by one probe inside the domain.
  const double probe = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi)
                       : std::isfinite(lo)                    ? lo + 1.0
                       : std::isfinite(hi)                    ? hi - 1.0
                                                              : 0.0;
  Shape shape;
  {
    py::gil_scoped_acquire gil;
    shape = from_py(fn(probe)).shape();
  }
  ValueFn f = [fn](double t) {
    py::gil_scoped_acquire gil;
    return from_py(fn(t));
  };
  ValueFn df;
  if (!derivative.is_none()) {
    auto d = derivative.cast<py::function>();
    df = [d](double t) {
      py::gil_scoped_acquire gil;
      return from_py(d(t));
    };
  }
  return make_callable(std::move(f), shape, Interval{lo, hi}, std::move(description), std::move(df));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conformable derivative and integral of vector-valued functions";

  py::register_exception<Error>(m, "Error");
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<LowerTerminalError>(m, "LowerTerminalError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<AlgebraError>(m, "AlgebraError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);

  py::class_<Function>(m, "Function")
      .def("__call__", [](const Function& f, double t) { return to_py(f.eval(t)); }, py::arg("t"))
      .def("derivative",
           [](const Function& f, double t) -> py::object {
             const auto d = f.exact_first_deriv(t);
             return d ? to_py(*d) : py::none();
           },
           py::arg("t"), "Closed-form first derivative, or None for sampled data.")
      .def_property_readonly("domain", [](const Function& f) { return py::make_tuple(f.domain().lo, f.domain().hi); })
      .def_property_readonly("shape", [](const Function& f) { return f.shape().str(); })
      .def("__repr__", [](const Function& f) { return "<confcalc.Function " + f.describe() + ">"; });

  m.def("expr", [](const std::string& text) { return make_expr(text); }, py::arg("text"),
        "Function from an expression in t.");
  m.def("builtin", [](const std::string& spec) { return make_builtin(spec); }, py::arg("spec"));
  m.def("builtin_names", &builtin_names);
  m.def(
      "grid",
      [](const std::string& path, const std::string& interp) {
        if (interp != "linear" && interp != "cubic") throw ParameterError("interp must be linear or cubic");
        return make_grid(read_grid_csv_file(path, interp == "linear" ? InterpKind::linear : InterpKind::cubic_hermite));
      },
      py::arg("path"), py::arg("interp") = "cubic");
  m.def(
      "samples",
      [](std::vector<double> t, py::sequence values, const std::string& interp) {
        std::vector<Value> vs;
        for (const auto& v : values) vs.push_back(from_py(v));
        return make_grid(GridFn(std::move(t), std::move(vs),
                                interp == "linear" ? InterpKind::linear : InterpKind::cubic_hermite));
      },
      py::arg("t"), py::arg("values"), py::arg("interp") = "cubic");
  m.def("callable", &from_callable, py::arg("fn"), py::arg("derivative") = py::none(),
        py::arg("lo") = -INFINITY, py::arg("hi") = INFINITY, py::arg("description") = "python callable");
  m.def("vector", &make_vector, py::arg("components"));
  m.def("diag", &make_diag, py::arg("diagonal"));
  m.def("linear_combination", &linear_combination, py::arg("c"), py::arg("f"), py::arg("d"), py::arg("g"));
  m.def("product", &product, py::arg("f"), py::arg("g"));
  m.def("quotient", &quotient, py::arg("f"), py::arg("g"));
  m.def(
      "with_point_value", [](const Function& f, double t0, py::object v) { return with_point_value(f, t0, from_py(v)); },
      py::arg("f"), py::arg("t0"), py::arg("value"));

  m.def(
      "conf_deriv",
      [](const Function& f, double alpha, double a, double t, const std::string& side, double rel, double abs) {
        return deriv_dict(conf_deriv(f, ConfParams(alpha, a), t, side_from_string(side), tol_of(rel, abs)));
      },
      py::arg("f"), py::arg("alpha"), py::arg("a"), py::arg("t"), py::arg("side") = "two-sided",
      py::arg("rel") = 1e-8, py::arg("abs") = 1e-10);
  m.def(
      "conf_deriv_scaled",
      [](const Function& f, double alpha, double a, double t, double rel, double abs) {
        return deriv_dict(conf_deriv_scaled(f, ConfParams(alpha, a), t, tol_of(rel, abs)));
      },
      py::arg("f"), py::arg("alpha"), py::arg("a"), py::arg("t"), py::arg("rel") = 1e-8, py::arg("abs") = 1e-10);
  m.def(
      "conf_integral",
      [](const Function& f, double alpha, double a, double t, double rel, double abs) {
        return to_py(conf_integral(f, ConfParams(alpha, a), t, tol_of(rel, abs)));
      },
      py::arg("f"), py::arg("alpha"), py::arg("a"), py::arg("t"), py::arg("rel") = 1e-8, py::arg("abs") = 1e-10);
  m.def(
      "convert_order",
      [](py::object v, double alpha, double beta, double a, double t0) {
        return to_py(convert_order(from_py(v), alpha, beta, a, t0));
      },
      py::arg("value"), py::arg("alpha"), py::arg("beta"), py::arg("a"), py::arg("t0"));
  m.def(
      "lower_terminal_deriv",
      [](const Function& f, double alpha, double a, double rel, double abs) {
        return deriv_dict(lower_terminal_deriv(f, ConfParams(alpha, a), tol_of(rel, abs)));
      },
      py::arg("f"), py::arg("alpha"), py::arg("a"), py::arg("rel") = 1e-8, py::arg("abs") = 1e-10);
  m.def(
      "avg_recover", [](const Function& f, double t, double rel, double abs) { return to_py(avg_recover(f, t, tol_of(rel, abs))); },
      py::arg("f"), py::arg("t"), py::arg("rel") = 1e-8, py::arg("abs") = 1e-10);

  m.def("identities", [] {
    std::vector<std::string> names;
    for (auto id : all_identities()) names.push_back(to_string(id));
    return names;
  });
  m.def(
      "run_suite",
      [](std::optional<std::vector<std::string>> identities, std::optional<std::vector<double>> alphas,
         std::optional<std::vector<double>> terminals, std::optional<std::vector<double>> offsets,
         std::optional<std::uint64_t> seed) {
        SuiteConfig cfg;
        if (identities) {
          cfg.identities.clear();
          for (const auto& n : *identities) cfg.identities.push_back(identity_from_string(n));
        }
        if (alphas) cfg.alphas = *alphas;
        if (terminals) cfg.terminals = *terminals;
        if (offsets) cfg.offsets = *offsets;
        if (seed) cfg.seed = *seed;
        IdentityReport r;
        {
          py::gil_scoped_release nogil;
          r = run_suite(cfg);
        }
        return json_to_py(to_json(r));
      },
      py::arg("identities") = py::none(), py::arg("alphas") = py::none(), py::arg("terminals") = py::none(),
      py::arg("offsets") = py::none(), py::arg("seed") = py::none(),
      "Identity suite over the default corpus; returns the JSON report as a dict.");

  m.def(
      "solve_ivp",
      [](py::object rhs, py::object x0, double alpha, double a, double t_end, int steps, const std::string& method,
         double rel, double abs) {
        IvpProblem prob;
        if (py::isinstance<py::str>(rhs)) {
          prob.rhs = rhs_from_exprs({rhs.cast<std::string>()});
        } else if (py::isinstance<py::function>(rhs)) {
          auto fn = rhs.cast<py::function>();
          prob.rhs = [fn](double t, const Value& x) {
            py::gil_scoped_acquire gil;
            return from_py(fn(t, to_py(x)));
          };
        } else {
          prob.rhs = rhs_from_exprs(rhs.cast<std::vector<std::string>>());
        }
        prob.p = ConfParams(alpha, a);
        prob.x0 = from_py(x0);
        prob.t_end = t_end;
        Trajectory tr;
        if (method == "tau") {
          tr = solve_tau(prob, steps);
        } else if (method == "volterra") {
          tr = solve_volterra(prob, steps, tol_of(rel, abs));
        } else {
          throw ParameterError("method must be tau or volterra");
        }
        return json_to_py(to_json(tr));
      },
      py::arg("rhs"), py::arg("x0"), py::arg("alpha"), py::arg("a") = 0.0, py::arg("t_end") = 1.0,
      py::arg("steps") = 1000, py::arg("method") = "tau", py::arg("rel") = 1e-8, py::arg("abs") = 1e-10,
      "Solve T^alpha x = F(t, x), x(a) = x0. rhs is an expression in t and x, a list of expressions in t and "
      "x0..xn, or a Python callable F(t, x).");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int rc = cli::run(args, out, err);
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line front end in process; returns (exit_code, stdout, stderr).");
}
