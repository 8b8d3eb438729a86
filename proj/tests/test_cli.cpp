#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int rc;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int rc = confcalc::cli::run(args, out, err);
  return {rc, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expect_rc = 0) {
  const Run r = run(std::move(args));
  REQUIRE_MESSAGE(r.rc == expect_rc, r.err);
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("deriv: t^0.5 at order 0.5 is 0.5") {
  const json j = run_json({"deriv", "--expr", "t^0.5", "--alpha", "0.5", "--a", "0", "--t", "0.25"});
  CHECK(j["command"] == "deriv");
  REQUIRE(j["records"].size() == 1);
  const json& r = j["records"][0];
  CHECK(r["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r["converged"] == true);
  CHECK(r["inputs"]["t"] == 0.25);
  CHECK(r["inputs"]["alpha"] == 0.5);
  CHECK(r["inputs"]["function"]["items"][0] == "t^0.5");
  CHECK(r["inputs"].contains("tol"));
  CHECK(j["summary"]["failed"] == 0);
}

TEST_CASE("integ: constant 1 gives (t - a)^alpha / alpha") {
  const json j = run_json({"integ", "--expr", "1", "--alpha", "0.5", "--a", "0", "--t", "4"});
  CHECK(j["records"][0]["value"].get<double>() == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("sweeps keep going past failing points") {
  // sqrt(t) is undefined left of 0: the first point fails, the rest succeed.
  const Run r = run({"deriv", "--expr", "sqrt(t)", "--alpha", "1", "--a", "-1", "--t-range", "-0.5:1.5:3"});
  CHECK(r.rc == 1);
  const json j = json::parse(r.out);
  REQUIRE(j["records"].size() == 3);
  CHECK(j["records"][0]["converged"] == false);
  CHECK(j["records"][0]["value"].is_null());
  CHECK_FALSE(j["records"][0]["diagnostics"].get<std::string>().empty());
  for (int i = 1; i < 3; ++i) CHECK(j["records"][i]["converged"] == true);
  CHECK(j["records"][2]["inputs"]["t"] == 1.5);
  CHECK(j["summary"]["failed"] == 1);
}

TEST_CASE("t-range is inclusive and ordered") {
  const json j = run_json({"integ", "--builtin", "one", "--t-range", "0:2:5"});
  std::vector<double> ts;
  for (const auto& r : j["records"]) ts.push_back(r["inputs"]["t"]);
  CHECK(ts == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(j["records"][4]["value"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("repeated sources make a vector-valued function") {
  const json j = run_json({"deriv", "--builtin", "t2", "--builtin", "exp", "--alpha", "1", "--t", "1"});
  const json& v = j["records"][0]["value"];
  REQUIRE(v.is_array());
  CHECK(v[0].get<double>() == doctest::Approx(2.0));
  CHECK(v[1].get<double>() == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("csv output") {
  const Run r = run({"deriv", "--expr", "t^2", "--t-range", "1:2:2", "--format", "csv"});
  CHECK(r.rc == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,err_estimate,converged,value");
  std::getline(in, line);
  CHECK(line.rfind("1,", 0) == 0);
}

TEST_CASE("convert") {
  const json given = run_json({"convert", "--value", "2", "--alpha", "0.5", "--beta", "0.25", "--t", "16"});
  CHECK(given["records"][0]["value"].get<double>() == doctest::Approx(4.0));

  const json computed =
      run_json({"convert", "--builtin", "exp", "--alpha", "0.5", "--beta", "0.9", "--t", "2"});
  CHECK(computed["records"][0]["value"].get<double>() ==
        doctest::Approx(std::pow(2.0, 0.1) * std::exp(2.0)).epsilon(1e-8));

  CHECK(run({"convert", "--value", "2", "--alpha", "0.5", "--t", "1"}).rc == 2);
  CHECK(run({"convert", "--value", "2", "--expr", "t", "--alpha", "0.5", "--beta", "1", "--t", "1"}).rc == 2);
}

TEST_CASE("limit") {
  const json j = run_json({"limit", "--builtin", "pow:0.5", "--alpha", "0.5"});
  CHECK(j["records"][0]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_FALSE(j["records"][0]["inputs"].contains("t"));
  const Run bad = run({"limit", "--builtin", "sinlog", "--alpha", "1"});
  CHECK(bad.rc == 1);
}

TEST_CASE("check with a user corpus and filters") {
  const json j = run_json({"check", "--expr", "(t-{a})^{alpha}", "--expr", "exp(t)", "--identity",
                           "first_derivative_equivalence", "--alphas", "0.5,1", "--terminals", "0,1"});
  CHECK(j["command"] == "check");
  CHECK(j["summary"]["failed"] == 0);
  CHECK(j["config"]["corpus"].size() == 2);
  CHECK(j["config"]["alphas"] == json::array({0.5, 1.0}));
  for (const auto& c : j["records"]) CHECK(c["id"] == "first_derivative_equivalence");
  CHECK(j["records"].size() == 2 * 2 * 2 * 5);

  const Run table = run({"check", "--identity", "average_recovery", "--format", "table"});
  CHECK(table.rc == 0);
  CHECK(table.out.find("average_recovery") != std::string::npos);
}

TEST_CASE("check reports failures through the exit code") {
  // A jump inside (a, t] breaks the left inverse: T f vanishes off the jump.
  const Run r = run({"check", "--expr", "sgn(t - 1.2)", "--identity", "left_inverse", "--terminals", "1",
                     "--alphas", "0.5"});
  CHECK(r.rc == 1);
  const json j = json::parse(r.out);
  CHECK(j["summary"]["failed"] == 3);
  CHECK(j["records"][0]["residual"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("ivp") {
  const json j = run_json({"ivp", "--rhs", "x", "--x0", "1", "--alpha", "0.5", "--t-end", "1", "--steps", "1000",
                           "--cross-validate"});
  const json& r = j["records"][0];
  CHECK(r["value"].get<double>() == doctest::Approx(std::exp(2.0)).epsilon(1e-10));
  CHECK(r["cross_validation"]["passed"] == true);
  CHECK(r["trajectory"]["t"].size() == 1001);
  CHECK(r["inputs"]["steps"] == 1000);

  const Run csv = run({"ivp", "--rhs", "x1", "--rhs", "-x0", "--x0", "1", "--x0", "0", "--steps", "4", "--format",
                       "csv"});
  CHECK(csv.rc == 0);
  CHECK(csv.out.rfind("t,x0,x1\n", 0) == 0);

  CHECK(run({"ivp", "--rhs", "x", "--x0", "1", "--x0", "2"}).rc == 2);
  CHECK(run({"ivp", "--rhs", "y", "--x0", "1"}).rc == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).rc == 2);
  CHECK(run({"frobnicate"}).rc == 2);
  CHECK(run({"deriv", "--t", "1"}).rc == 2);                                     // no source
  CHECK(run({"deriv", "--expr", "t", "--builtin", "t", "--t", "1"}).rc == 2);   // two kinds
  CHECK(run({"deriv", "--expr", "t"}).rc == 2);                                 // no t
  CHECK(run({"deriv", "--expr", "t", "--t", "1", "--t-range", "0:1:2"}).rc == 2);
  CHECK(run({"deriv", "--expr", "t", "--t-range", "0:1"}).rc == 2);
  CHECK(run({"deriv", "--expr", "t", "--t", "1", "--alpha", "0"}).rc == 2);
  CHECK(run({"deriv", "--expr", "t", "--t", "1", "--alpha", "1.5"}).rc == 2);
  CHECK(run({"deriv", "--expr", "t +", "--t", "1"}).rc == 2);
  CHECK(run({"deriv", "--grid", "/nonexistent.csv", "--t", "1"}).rc == 2);
  CHECK(run({"deriv", "--expr", "t", "--t", "1", "--rel", "-1"}).rc == 2);
  CHECK(run({"deriv", "--expr", "t", "--t", "1", "--side", "up"}).rc == 2);
  CHECK(run({"check", "--identity", "nope"}).rc == 2);
  const Run r = run({"deriv", "--t", "1"});
  CHECK_FALSE(r.err.empty());
  CHECK(r.out.empty());
  CHECK(run({"--help"}).rc == 0);
}

TEST_CASE("tolerance precedence: flags over environment over defaults") {
  const auto tol_of = [](std::vector<std::string> extra) {
    std::vector<std::string> args{"integ", "--builtin", "exp", "--t", "1"};
    args.insert(args.end(), extra.begin(), extra.end());
    return run_json(args)["records"][0]["inputs"]["tol"];
  };
  ::unsetenv("CONFCALC_TOL");
  CHECK(tol_of({})["rel"] == 1e-8);
  ::setenv("CONFCALC_TOL", "1e-6,1e-9", 1);
  CHECK(tol_of({})["rel"] == 1e-6);
  CHECK(tol_of({})["abs"] == 1e-9);
  CHECK(tol_of({"--rel", "1e-10"})["rel"] == 1e-10);
  CHECK(tol_of({"--rel", "1e-10"})["abs"] == 1e-9);
  ::setenv("CONFCALC_TOL", "garbage", 1);
  CHECK(run({"integ", "--builtin", "exp", "--t", "1"}).rc == 2);
  ::unsetenv("CONFCALC_TOL");
}

TEST_CASE("grid input and output file") {
  const std::string grid = "test_cli_grid.csv";
  const std::string out = "test_cli_out.json";
  {
    std::ofstream g(grid);
    g << "t,v\n";
    for (int i = 0; i <= 40; ++i) g << 0.05 * i << ',' << (0.05 * i) * (0.05 * i) << '\n';
  }
  const Run r = run({"deriv", "--grid", grid, "--interp", "cubic", "--alpha", "1", "--t", "1", "--output", out});
  CHECK(r.rc == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const json j = json::parse(in);
  CHECK(j["records"][0]["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(j["records"][0]["inputs"]["function"]["interp"] == "cubic");
  std::remove(grid.c_str());
  std::remove(out.c_str());
}

TEST_CASE("identical arguments give identical output") {
  const std::vector<std::string> args{"check", "--alphas", "0.5", "--terminals", "1"};
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.rc == 0);
  CHECK(a.out == b.out);
}
