#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "cli.hpp"
#include "fejer/factor1d.hpp"
#include "fejer/poly_io.hpp"
#include "fejer/verify.hpp"
#include "helpers.hpp"

using namespace fejer;
using namespace fejer::testing;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  json report;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fejer");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.err = err.str();
  r.report = json::parse(out.str(), nullptr, false);
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("fejer_cli_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write(const std::string& name, const json& doc) const { return write(name, doc.dump()); }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check") {
  TempDir dir;
  const Run ok = invoke({"check", dir.write("q.json", poly::to_json(laurent({2, 5, 2})))});
  CHECK(ok.code == 0);
  CHECK(ok.report["min_eig"].get<double>() == doctest::Approx(1.0));

  const Run bad = invoke({"check", dir.write("b.json", poly::to_json(laurent({1, 0, 1})))});
  CHECK(bad.code == 1);
  CHECK(bad.report["min_eig"].get<double>() == doctest::Approx(-2.0));
  CHECK(bad.report["witness"]["zeta"][0].get<double>() == -1.0);
  CHECK(bad.report["witness"]["zeta"][1].get<double>() == 0.0);

  CHECK(invoke({"check", dir.write("m.json", std::string("{not json"))}).code == 2);
  CHECK(invoke({"check", dir.path("missing.json")}).code == 2);

  const Run two = invoke({"check", dir.write("c.json", poly::to_json(cross(5.0)))});
  CHECK(two.code == 0);
  CHECK(two.report["strictly_positive"] == true);
}

TEST_CASE("factor") {
  TempDir dir;
  const std::string out = dir.path("p.json");
  const Run r = invoke({"factor", dir.write("q.json", poly::to_json(laurent({2, 5, 2}))), "--out", out});
  CHECK(r.code == 0);
  CHECK(r.report["report"]["residual_sup"].get<double>() <= 1e-10);
  CHECK(r.report["report"].contains("N_used"));
  CHECK(r.report["report"]["outer_verdict"] == "verified");
  // The factor file re-parses and verifies against its source.
  const auto p = std::get<poly::MatrixAnalyticPoly1>(poly::read_poly_file(out));
  CHECK(std::abs(p.coeff(0)(0, 0) - 2.0) < 1e-8);
  CHECK(std::abs(p.coeff(1)(0, 0) - 1.0) < 1e-8);
  CHECK(verify::residual(laurent({2, 5, 2}), p, {}) <= 1e-10);

  const Run four = invoke({"factor", dir.write("c.json", poly::to_json(laurent({4})))});
  CHECK(four.code == 0);
  CHECK(four.report["factor"]["coeffs"][0]["matrix"][0][0][0].get<double>() == doctest::Approx(2.0));

  CHECK(invoke({"factor", dir.write("b.json", poly::to_json(laurent({1, 0, 1})))}).code == 1);
  // Two-variable input to the one-variable command is an input error.
  CHECK(invoke({"factor", dir.write("x.json", poly::to_json(cross(5.0)))}).code == 2);
}

TEST_CASE("factor reports slow convergence with exit 3") {
  TempDir dir;
  const Run r = invoke({"factor", dir.write("d.json", poly::to_json(laurent({1, 2, 1}))), "--max-trunc", "64"});
  CHECK(r.code == 3);
  CHECK(r.report["report"]["converged"] == false);
  CHECK(r.report["report"]["gap"].get<double>() > 0.0);
}

TEST_CASE("factor2d") {
  TempDir dir;
  const std::string out = dir.path("f.json");
  const Run r = invoke({"factor2d", dir.write("q.json", poly::to_json(cross(5.0))), "--out", out});
  CHECK(r.code == 0);
  CHECK(r.report["plan"]["N"] == 4);
  CHECK(r.report["factors"].size() <= 5);
  CHECK(r.report["report"]["residual_sup"].get<double>() <= 1e-6 * 9.0);
  std::ifstream f(out);
  const json doc = json::parse(f);
  const auto fs = poly::factors2_from_json(doc["factors"]);
  CHECK(verify::residual(cross(5.0), fs, {6, std::nullopt}) <= 1e-6 * 9.0);

  const Run two = invoke({"factor2d", dir.write("c.json", poly::to_json(poly::MatrixLaurentPoly2(0, 0, {scalar(2)})))});
  CHECK(two.code == 0);
  CHECK(two.report["factors"].size() == 1);

  const Run flat = invoke({"factor2d", dir.write("z.json", poly::to_json(cross(4.0)))});
  CHECK(flat.code == 1);
  CHECK(flat.err.find("delta_est") != std::string::npos);
  CHECK(flat.err.find("<= 0") != std::string::npos);
}

TEST_CASE("eval") {
  TempDir dir;
  const std::string q = dir.write("q.json", poly::to_json(laurent({2, 5, 2})));
  const Run r = invoke({"eval", q, "--point", "0.25"});
  CHECK(r.code == 0);
  CHECK(r.report["value"][0][0][0].get<double>() == doctest::Approx(5.0));
  CHECK(invoke({"eval", q}).code == 2);
  CHECK(invoke({"eval", q, "--point", "0.1,0.2"}).code == 2);
  const Run c = invoke({"eval", dir.write("c.json", poly::to_json(cross(5.0))), "--point", "0.5,0.5"});
  CHECK(c.report["min_eig"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("oracle") {
  TempDir dir;
  const Run r = invoke({"oracle", dir.write("q.json", poly::to_json(laurent({2, 5, 2})))});
  CHECK(r.code == 0);
  CHECK(r.report["difference"].get<double>() <= 1e-8);
  const Run one = invoke({"oracle", dir.write("o.json", poly::to_json(laurent({1})))});
  CHECK(one.code == 0);
  CHECK(one.report["difference"].get<double>() == 0.0);

  const ComplexMatrix q1 = mat({{0, 1}, {0, 0}});
  const poly::MatrixLaurentPoly1 m({q1.adjoint(), mat({{1, 0}, {0, 2}}), q1});
  const Run mr = invoke({"oracle", dir.write("m.json", poly::to_json(m))});
  CHECK(mr.code == 2);
  CHECK(mr.err.find("oracle is scalar-only") != std::string::npos);
}

TEST_CASE("roundtrip") {
  const Run r = invoke({"roundtrip", "--seed", "42", "--size", "2", "--degree", "3", "--count", "20"});
  CHECK(r.code == 0);
  CHECK(r.report["max_relative_residual"].get<double>() <= 1e-7);
  CHECK(r.report["failures"].empty());

  const Run none = invoke({"roundtrip", "--count", "0"});
  CHECK(none.code == 0);
  CHECK(none.report["failures"].empty());
  CHECK(none.report["max_relative_residual"].is_null());

  const Run starved = invoke({"roundtrip", "--seed", "7", "--ridge", "0", "--max-trunc", "8", "--count", "3"});
  CHECK(starved.code == 3);
  REQUIRE_FALSE(starved.report["failures"].empty());
  CHECK(starved.report["failures"][0].contains("gap"));
}

TEST_CASE("reports are deterministic") {
  const Run a = invoke({"roundtrip", "--seed", "5", "--count", "3"});
  const Run b = invoke({"roundtrip", "--seed", "5", "--count", "3"});
  CHECK(a.report.dump() == b.report.dump());
}

TEST_CASE("flag validation") {
  TempDir dir;
  const std::string q = dir.write("q.json", poly::to_json(laurent({2, 5, 2})));
  CHECK(invoke({"factor", q, "--tol", "-1"}).code == 2);
  CHECK(invoke({"factor", q, "--grid", "2"}).code == 2);
  CHECK(invoke({"factor", q, "--grid", "x"}).code == 2);
  CHECK(invoke({"factor2d", q, "--margin", "1.5"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"factor", q, "--grid", "8,10"}).code == 0);
}

}  // TEST_SUITE
