#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fejer/corpus.hpp"
#include "fejer/errors.hpp"
#include "fejer/factor1d.hpp"
#include "fejer/factor2d.hpp"
#include "fejer/poly_io.hpp"
#include "fejer/verify.hpp"

namespace fejer::cli {

using nlohmann::json;
using poly::Complex;
using poly::ComplexMatrix;

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::optional<double> tol;
  std::string grid = "9";
  int max_trunc = 4096;
  std::optional<double> delta;
  double margin = 1.0 / 3.0;
  std::optional<std::int64_t> seed;
  std::string point;
  // roundtrip corpus shape
  int size = 2;
  int degree = 3;
  int count = 20;
  double ridge = 0.1;
};

// Result of one command: the JSON report, its exit code, and the stderr line.
struct Outcome {
  json report;
  int code = kExitOk;
  std::string summary;
};

[[noreturn]] void input_error(const std::string& what) {
  throw Error(ErrorKind::kArgument, what);
}

std::vector<double> split_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      input_error(std::string(flag) + ": cannot parse \"" + piece + "\"");
    }
  }
  if (out.empty() || out.size() > 2) {
    input_error(std::string(flag) + " takes one or two comma-separated values");
  }
  return out;
}

verify::GridSpec parse_grid(const std::string& text) {
  const std::vector<double> v = split_reals(text, "--grid");
  for (double g : v) {
    if (g != std::floor(g)) input_error("--grid: exponents must be integers");
  }
  verify::GridSpec spec{static_cast<int>(v[0]), std::nullopt};
  if (v.size() == 2) spec.g2 = static_cast<int>(v[1]);
  spec.validate();
  return spec;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument: return kExitInput;
    case ErrorKind::kNotPsd:
    case ErrorKind::kNotStrictlyPositive: return kExitRejected;
    case ErrorKind::kConvergence:
    case ErrorKind::kNumerical: return kExitNumerical;
  }
  return kExitNumerical;
}

const char* status_of(int code) {
  switch (code) {
    case kExitOk: return "ok";
    case kExitRejected: return "rejected";
    case kExitInput: return "input_error";
    default: return "failed";
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

void write_file(const std::string& path, const json& doc) {
  std::ofstream f(path);
  if (!f) input_error("cannot open output file " + path);
  f << doc.dump(2) << '\n';
  if (!f) input_error("cannot write output file " + path);
}

template <typename T>
const T& expect(const poly::PolyValue& v, const char* what) {
  if (const T* p = std::get_if<T>(&v)) return *p;
  input_error(std::string("expected ") + what);
}

factor1d::FactorOptions factor_options(const RunConfig& cfg) {
  factor1d::FactorOptions opts;
  opts.residual_tol = cfg.tol.value_or(1e-8);
  opts.grid = parse_grid(cfg.grid);
  opts.schur.n_max = cfg.max_trunc;
  return opts;
}

// Exit code of a finished one-variable factorization.
int factor_code(const factor1d::FactorReport& r) {
  if (!r.converged || !r.residual_ok) return kExitNumerical;
  if (r.outer_verdict == verify::OuterVerdict::kFailed) return kExitNumerical;
  return kExitOk;
}

std::string factor_reason(const factor1d::FactorReport& r) {
  if (!r.converged) return "Schur complements did not settle within N_max";
  if (!r.residual_ok) return "residual above tolerance";
  if (r.outer_verdict == verify::OuterVerdict::kFailed) return "factor is not outer";
  return "";
}

Outcome cmd_check(const RunConfig& cfg) {
  const poly::PolyValue v = poly::read_poly_file(cfg.input);
  const double tol = cfg.tol.value_or(1e-8);
  const verify::GridSpec grid = parse_grid(cfg.grid);
  Outcome o;
  if (const auto* q = std::get_if<poly::MatrixLaurentPoly1>(&v)) {
    const verify::GridMin gm = verify::grid_min_eig(*q, grid);
    const double scale = std::max(verify::sup_norm(*q, grid), 1e-300);
    const bool grid_psd = gm.value >= -tol * scale;
    const poly::ToeplitzCheck tc =
        poly::toeplitz_psd_check(*q, 4 * (q->degree() + 1), tol);
    const bool psd = grid_psd && tc.psd;
    o.report = {{"vars", 1},
                {"min_eig", gm.value},
                {"witness", {{"t", gm.t1}, {"zeta", complex_json(poly::turn(gm.t1))}}},
                {"grid_psd", grid_psd},
                {"toeplitz", {{"psd", tc.psd}, {"smallest", tc.smallest}, {"blocks", tc.n_used}}},
                {"psd", psd}};
    o.code = psd ? kExitOk : kExitRejected;
    std::ostringstream s;
    s << (psd ? "nonnegative" : "not nonnegative") << ": min eigenvalue " << gm.value
      << " at t = " << gm.t1;
    o.summary = s.str();
    return o;
  }
  const auto& q = expect<poly::MatrixLaurentPoly2>(v, "a Laurent polynomial");
  const verify::GridMin gm = verify::grid_min_eig(q, grid);
  const double scale = std::max(verify::sup_norm(q, grid), 1e-300);
  const double delta = factor2d::estimate_delta(q, grid);
  const bool psd = gm.value >= -tol * scale;
  o.report = {{"vars", 2},
              {"min_eig", gm.value},
              {"witness", {{"t", {gm.t1, gm.t2}},
                           {"zeta", {complex_json(poly::turn(gm.t1)),
                                     complex_json(poly::turn(gm.t2))}}}},
              {"grid_psd", psd},
              {"delta_est", delta},
              {"strictly_positive", delta > 0.0},
              {"psd", psd}};
  o.code = psd ? kExitOk : kExitRejected;
  std::ostringstream s;
  s << (psd ? "nonnegative" : "not nonnegative") << " on grid: min eigenvalue "
    << gm.value << ", delta_est " << delta;
  o.summary = s.str();
  return o;
}

Outcome cmd_factor(const RunConfig& cfg) {
  const poly::PolyValue v = poly::read_poly_file(cfg.input);
  const auto& q = expect<poly::MatrixLaurentPoly1>(v, "a one-variable Laurent polynomial");
  const factor1d::FactorResult res = factor1d::factor(q, factor_options(cfg));
  Outcome o;
  o.code = factor_code(res.report);
  o.report = {{"report", res.report.to_json()}, {"factor", poly::to_json(res.factor)}};
  if (!cfg.output.empty()) write_file(cfg.output, poly::to_json(res.factor));
  std::ostringstream s;
  if (o.code == kExitOk) {
    s << "factored: degree " << res.factor.degree() << ", residual "
      << res.report.residual_sup << ", N_used " << res.report.n_used << ", outer "
      << verify::to_string(res.report.outer_verdict);
  } else {
    s << "factorization failed: " << factor_reason(res.report);
    o.report["reason"] = factor_reason(res.report);
  }
  o.summary = s.str();
  return o;
}

Outcome cmd_factor2d(const RunConfig& cfg) {
  const poly::PolyValue v = poly::read_poly_file(cfg.input);
  const auto& q = expect<poly::MatrixLaurentPoly2>(v, "a two-variable Laurent polynomial");
  factor2d::Factor2dOptions opts;
  opts.inner = factor_options(cfg);
  opts.inner.residual_tol = 1e-8;
  opts.inner.grid = verify::GridSpec{};
  opts.grid = parse_grid(cfg.grid);
  opts.residual_tol = cfg.tol.value_or(1e-6);
  opts.margin = cfg.margin;
  opts.delta = cfg.delta;
  const factor2d::Factor2dResult res = factor2d::factor_strict(q, opts);

  json factors = json::array();
  for (const auto& f : res.factors) factors.push_back(poly::to_json(f));
  json doc = {{"plan", res.plan->to_json()}, {"factors", factors}};
  Outcome o;
  const auto& lifted = res.report.lifted;
  o.code = res.report.residual_ok && lifted.converged ? kExitOk : kExitNumerical;
  o.report = {{"report", res.report.to_json()}, {"plan", doc["plan"]}, {"factors", factors}};
  if (!cfg.output.empty()) write_file(cfg.output, doc);
  std::ostringstream s;
  if (o.code == kExitOk) {
    s << "factored: " << res.factors.size() << " factors, plan N = " << res.plan->n
      << ", residual " << res.report.residual_sup;
  } else {
    const std::string reason = lifted.converged ? "residual above tolerance"
                                                : factor_reason(lifted);
    s << "factorization failed: " << reason;
    o.report["reason"] = reason;
  }
  o.summary = s.str();
  return o;
}

Outcome cmd_eval(const RunConfig& cfg) {
  const poly::PolyValue v = poly::read_poly_file(cfg.input);
  if (cfg.point.empty()) input_error("eval needs --point t1[,t2]");
  const std::vector<double> t = split_reals(cfg.point, "--point");
  const bool two = std::holds_alternative<poly::MatrixLaurentPoly2>(v) ||
                   std::holds_alternative<poly::MatrixAnalyticPoly2>(v);
  if (t.size() != (two ? 2u : 1u)) {
    input_error(two ? "--point needs t1,t2 for two-variable input"
                    : "--point needs a single t for one-variable input");
  }
  const Complex z1 = poly::turn(t[0]);
  const Complex z2 = two ? poly::turn(t[1]) : Complex(1.0);
  const ComplexMatrix value = std::visit(
      [&](const auto& p) -> ComplexMatrix {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, poly::MatrixLaurentPoly1> ||
                      std::is_same_v<T, poly::MatrixAnalyticPoly1>) {
          return poly::eval1(p, z1);
        } else {
          return poly::eval2(p, z1, z2);
        }
      },
      v);
  Outcome o;
  o.report = {{"point", t}, {"value", poly::matrix_to_json(value)}};
  std::ostringstream s;
  s << "evaluated " << value.rows() << "x" << value.cols() << " value";
  if (std::holds_alternative<poly::MatrixLaurentPoly1>(v) ||
      std::holds_alternative<poly::MatrixLaurentPoly2>(v)) {
    const double min = linalg::eig_hermitian(linalg::HermitianMatrix::symmetrized(value)).values(0);
    o.report["min_eig"] = min;
    s << ", min eigenvalue " << min;
  }
  o.summary = s.str();
  return o;
}

Outcome cmd_oracle(const RunConfig& cfg) {
  const poly::PolyValue v = poly::read_poly_file(cfg.input);
  const auto& q = expect<poly::MatrixLaurentPoly1>(v, "a one-variable Laurent polynomial");
  const double tol = cfg.tol.value_or(1e-8);
  const poly::MatrixAnalyticPoly1 roots = factor1d::scalar_root_factor(q);
  const factor1d::FactorResult res = factor1d::factor(q, factor_options(cfg));
  const poly::MatrixAnalyticPoly1 a = factor1d::normalize_gauge(roots);
  const poly::MatrixAnalyticPoly1 b = factor1d::normalize_gauge(res.factor);
  double diff = 0.0;
  for (int k = 0; k <= std::max(a.degree(), b.degree()); ++k) {
    const auto coeff = [k](const poly::MatrixAnalyticPoly1& p) {
      return k <= p.degree() ? p.coeff(k)(0, 0) : Complex(0.0);
    };
    diff = std::max(diff, std::abs(coeff(a) - coeff(b)));
  }
  const double bound = tol * std::max(q.scale(), 1e-300);
  Outcome o;
  o.code = factor_code(res.report);
  if (o.code == kExitOk && diff > bound) o.code = kExitRejected;
  o.report = {{"difference", diff},
              {"bound", bound},
              {"agree", diff <= bound},
              {"root_factor", poly::to_json(a)},
              {"schur_factor", poly::to_json(b)},
              {"report", res.report.to_json()}};
  std::ostringstream s;
  s << (diff <= bound ? "agree" : "disagree") << ": max coefficient difference " << diff;
  if (o.code == kExitNumerical) s << " (Schur factorization failed: " << factor_reason(res.report) << ")";
  o.summary = s.str();
  return o;
}

Outcome cmd_roundtrip(const RunConfig& cfg) {
  if (cfg.size < 1 || cfg.degree < 0 || cfg.count < 0) {
    input_error("roundtrip needs --size >= 1, --degree >= 0, --count >= 0");
  }
  if (!(cfg.ridge >= 0.0)) input_error("--ridge must be nonnegative");
  const std::int64_t seed = cfg.seed.value_or(0);
  corpus::Generator gen(static_cast<std::uint64_t>(seed));
  const factor1d::FactorOptions opts = factor_options(cfg);

  json failures = json::array();
  std::optional<double> max_rel;
  int code = kExitOk;
  for (int i = 0; i < cfg.count; ++i) {
    const poly::MatrixAnalyticPoly1 p = corpus::random_analytic(gen, cfg.size, cfg.degree);
    const poly::MatrixLaurentPoly1 q = corpus::ridged_gram(p, cfg.ridge);
    json failure;
    try {
      const factor1d::FactorResult res = factor1d::factor(q, opts);
      const double rel = res.report.residual_sup / std::max(res.report.scale, 1e-300);
      max_rel = std::max(max_rel.value_or(0.0), rel);
      const int c = factor_code(res.report);
      if (c != kExitOk) {
        failure = {{"index", i},
                   {"reason", factor_reason(res.report)},
                   {"N_used", res.report.n_used},
                   {"gap", res.report.gap ? json(*res.report.gap) : json(nullptr)},
                   {"residual_sup", res.report.residual_sup}};
        code = std::max(code, c);
      }
    } catch (const Error& e) {
      failure = {{"index", i}, {"reason", e.what()}, {"kind", to_string(e.kind())}};
      const int c = exit_code(e.kind());
      code = c == kExitNumerical || code == kExitNumerical ? kExitNumerical
                                                           : std::max(code, c);
    }
    if (!failure.is_null()) failures.push_back(std::move(failure));
  }
  Outcome o;
  o.code = code;
  o.report = {{"seed", seed},
              {"size", cfg.size},
              {"degree", cfg.degree},
              {"count", cfg.count},
              {"ridge", cfg.ridge},
              {"max_relative_residual", max_rel ? json(*max_rel) : json(nullptr)},
              {"failures", failures}};
  std::ostringstream s;
  s << cfg.count - static_cast<int>(failures.size()) << "/" << cfg.count << " passed";
  if (max_rel) s << ", max relative residual " << *max_rel;
  o.summary = s.str();
  return o;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectral factorization of matrix Laurent polynomials", "fejer"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", cfg.tol, "Residual / agreement tolerance, relative (default 1e-8; 1e-6 for factor2d)");
  app.add_option("--grid", cfg.grid, "log2 grid size per variable, g or g1,g2")->capture_default_str();
  app.add_option("--max-trunc", cfg.max_trunc, "Largest Toeplitz section in blocks")->capture_default_str();
  app.add_option("--delta", cfg.delta, "Positivity margin override for factor2d");
  app.add_option("--margin", cfg.margin, "Fraction of delta kept in reserve")->capture_default_str();
  app.add_option("--out", cfg.output, "Output file for factors");
  app.add_option("--seed", cfg.seed, "Seed for roundtrip");
  app.add_option("--point", cfg.point, "Evaluation point t1[,t2] in turns");

  struct Command {
    const char* name;
    const char* help;
    bool takes_file;
  };
  const Command commands[] = {
      {"check", "Test nonnegativity on the grid and Toeplitz sections", true},
      {"factor", "One-variable outer spectral factor", true},
      {"factor2d", "Two-variable sum of squares for strictly positive input", true},
      {"eval", "Evaluate a polynomial at --point", true},
      {"oracle", "Compare with the scalar root-pairing factor", true},
      {"roundtrip", "Factor a seeded random corpus", false},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->callback([&cfg, name = c.name] { cfg.command = name; });
    if (c.takes_file) sub->add_option("file", cfg.input, "Polynomial JSON file")->required();
    if (std::string(c.name) == "roundtrip") {
      sub->add_option("--size", cfg.size, "Coefficient size r")->capture_default_str();
      sub->add_option("--degree", cfg.degree, "Degree m")->capture_default_str();
      sub->add_option("--count", cfg.count, "Number of instances")->capture_default_str();
      sub->add_option("--ridge", cfg.ridge, "Ridge as a multiple of |P^*P constant term|")
          ->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  Outcome o;
  try {
    if (cfg.tol && !(*cfg.tol > 0.0)) input_error("--tol must be positive");
    if (!(cfg.margin > 0.0 && cfg.margin < 1.0)) input_error("--margin must lie in (0, 1)");
    if (cfg.max_trunc < 1) input_error("--max-trunc must be positive");
    if (cfg.delta && !(*cfg.delta > 0.0)) input_error("--delta must be positive");
    if (cfg.command == "check") o = cmd_check(cfg);
    else if (cfg.command == "factor") o = cmd_factor(cfg);
    else if (cfg.command == "factor2d") o = cmd_factor2d(cfg);
    else if (cfg.command == "eval") o = cmd_eval(cfg);
    else if (cfg.command == "oracle") o = cmd_oracle(cfg);
    else o = cmd_roundtrip(cfg);
  } catch (const Error& e) {
    o.code = exit_code(e.kind());
    o.report = {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    o.summary = std::string("error: ") + e.what();
  }
  json report = {{"command", cfg.command}, {"status", status_of(o.code)}, {"exit_code", o.code}};
  report.update(o.report);
  out << report.dump(2) << '\n';
  err << cfg.command << ": " << o.summary << '\n';
  return o.code;
}

}  // namespace fejer::cli
