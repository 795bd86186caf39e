#include "fejer/factor2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fejer/errors.hpp"

namespace fejer::factor2d {

using linalg::ComplexMatrix;

namespace {

void require_truncation(const MatrixLaurentPoly2& q, int n, const char* what) {
  if (n < q.degree2()) {
    std::ostringstream os;
    os << what << ": N = " << n << " is below the z2-degree " << q.degree2();
    throw Error(ErrorKind::kArgument, os.str());
  }
}

template <typename Weight>
MatrixLaurentPoly2 reweight(const MatrixLaurentPoly2& q, Weight weight) {
  std::vector<ComplexMatrix> coeffs;
  for (int j = -q.degree1(); j <= q.degree1(); ++j) {
    for (int k = -q.degree2(); k <= q.degree2(); ++k) {
      coeffs.push_back(weight(std::abs(k)) * q.coeff(j, k));
    }
  }
  return MatrixLaurentPoly2(q.degree1(), q.degree2(), std::move(coeffs));
}

// Spectral norms of the coefficients, summed over j for each |k|.
std::vector<double> column_norms(const MatrixLaurentPoly2& q) {
  std::vector<double> out(static_cast<std::size_t>(q.degree2() + 1), 0.0);
  for (int j = -q.degree1(); j <= q.degree1(); ++j) {
    for (int k = -q.degree2(); k <= q.degree2(); ++k) {
      out[static_cast<std::size_t>(std::abs(k))] += linalg::spectral_norm(q.coeff(j, k));
    }
  }
  return out;
}

double bound_from_norms(const std::vector<double>& norms, int n) {
  double out = 0.0;
  for (std::size_t k = 1; k < norms.size(); ++k) {
    const double kk = static_cast<double>(k);
    out += kk / (static_cast<double>(n) + 1.0 - kk) * norms[k];
  }
  return out;
}

}  // namespace

nlohmann::json LiftPlan::to_json() const {
  return {{"N", n},
          {"r", r},
          {"delta_est", delta_est},
          {"bound_S", bound_s},
          {"margin", margin}};
}

nlohmann::json Factor2dReport::to_json() const {
  return {{"residual_sup", residual_sup},
          {"residual_tol", residual_tol},
          {"residual_ok", residual_ok},
          {"scale", scale},
          {"factor_count", factor_count},
          {"max_degree1", max_degree1},
          {"lifted", lifted.to_json()}};
}

MatrixLaurentPoly2 cesaro_smooth(const MatrixLaurentPoly2& q, int n) {
  require_truncation(q, n, "cesaro_smooth");
  const double np1 = n + 1.0;
  return reweight(q, [&](int k) { return (np1 - k) / np1; });
}

MatrixLaurentPoly2 inverse_cesaro(const MatrixLaurentPoly2& q, int n) {
  require_truncation(q, n, "inverse_cesaro");
  const double np1 = n + 1.0;
  return reweight(q, [&](int k) { return np1 / (np1 - k); });
}

double remainder_bound(const MatrixLaurentPoly2& q, int n) {
  require_truncation(q, n, "remainder_bound");
  return bound_from_norms(column_norms(q), n);
}

LiftPlan choose_truncation(const MatrixLaurentPoly2& q, double delta_est,
                           double margin) {
  if (!(delta_est > 0.0)) {
    throw Error(ErrorKind::kArgument, "choose_truncation: delta must be positive");
  }
  if (!(margin > 0.0 && margin < 1.0)) {
    throw Error(ErrorKind::kArgument, "choose_truncation: margin must lie in (0, 1)");
  }
  const std::vector<double> norms = column_norms(q);
  const double budget = delta_est * (1.0 - margin);
  // Strict inequality with room for rounding, so ties stay ties.
  const double strict = budget * (1.0 - 1e-12);
  for (int n = q.degree2(); n <= kMaxTruncation; ++n) {
    const double bound = bound_from_norms(norms, n);
    if (bound < strict) return LiftPlan{n, q.size(), delta_est, bound, margin};
  }
  std::ostringstream os;
  os << "degenerate delta: no truncation up to N = " << kMaxTruncation
     << " brings the remainder below " << budget;
  throw Error(ErrorKind::kNotStrictlyPositive, os.str());
}

MatrixLaurentPoly1 lift_to_block(const MatrixLaurentPoly2& q, int n) {
  require_truncation(q, n, "lift_to_block");
  const Index r = q.size();
  const Index blocks = n + 1;
  const double norm = 1.0 / static_cast<double>(blocks);
  std::vector<ComplexMatrix> coeffs;
  for (int j = -q.degree1(); j <= q.degree1(); ++j) {
    ComplexMatrix t = ComplexMatrix::Zero(r * blocks, r * blocks);
    for (Index p = 0; p < blocks; ++p) {
      for (Index c = 0; c < blocks; ++c) {
        t.block(p * r, c * r, r, r) = norm * q.coeff(j, static_cast<int>(p - c));
      }
    }
    coeffs.push_back(std::move(t));
  }
  return MatrixLaurentPoly1(std::move(coeffs));
}

std::vector<MatrixAnalyticPoly2> unlift_factor(const MatrixAnalyticPoly1& phi,
                                               Index r, int n) {
  const Index blocks = n + 1;
  if (r < 1 || n < 0 || phi.cols() != r * blocks || phi.rows() % r != 0) {
    std::ostringstream os;
    os << "unlift_factor: factor of shape " << phi.rows() << "x" << phi.cols()
       << " does not split into blocks of size " << r << " with N = " << n;
    throw Error(ErrorKind::kArgument, os.str());
  }
  const Index count = phi.rows() / r;
  const int m1 = phi.degree();
  std::vector<MatrixAnalyticPoly2> out;
  for (Index l = 0; l < count; ++l) {
    std::vector<ComplexMatrix> coeffs;
    for (int j = 0; j <= m1; ++j) {
      for (int k = 0; k <= n; ++k) {
        const Index c = n - k;
        coeffs.push_back(phi.coeff(j).block(l * r, c * r, r, r));
      }
    }
    out.emplace_back(m1, n, std::move(coeffs));
  }
  return out;
}

Factor2dResult factor_cesaro(const MatrixLaurentPoly2& q, int n,
                             const Factor2dOptions& opts) {
  require_truncation(q, n, "factor_cesaro");
  const double scale = std::max(q.scale(), 1e-300);
  const verify::GridMin screen = verify::grid_min_eig(q, opts.grid);
  if (screen.value < -opts.inner.schur.clamp_tol * scale) {
    std::ostringstream os;
    os << "not nonnegative: Q has eigenvalue " << screen.value
       << " at turn fractions (" << screen.t1 << ", " << screen.t2 << ")";
    throw Error(ErrorKind::kNotPsd, os.str());
  }

  const MatrixLaurentPoly1 lifted = lift_to_block(q, n);
  factor1d::FactorResult inner = factor1d::factor(lifted, opts.inner);

  Factor2dResult out;
  out.factors = unlift_factor(inner.factor, q.size(), n);
  out.report.lifted = std::move(inner.report);

  const MatrixLaurentPoly2 target = cesaro_smooth(q, n);
  out.report.scale = verify::sup_norm(target, opts.grid);
  out.report.residual_sup = verify::residual(target, out.factors, opts.grid);
  out.report.residual_tol = opts.residual_tol * std::max(out.report.scale, 1e-300);
  out.report.residual_ok = out.report.residual_sup <= out.report.residual_tol;
  out.report.factor_count = static_cast<int>(out.factors.size());
  for (const auto& f : out.factors) {
    out.report.max_degree1 = std::max(out.report.max_degree1, f.degree1());
  }
  return out;
}

double estimate_delta(const MatrixLaurentPoly2& q, const verify::GridSpec& grid) {
  const verify::GridMin min = verify::grid_min_eig(q, grid);
  const double m1 = q.degree1();
  const double m2 = q.degree2();
  const double guard =
      q.opnorm_sum() * std::numbers::pi *
      (m1 / std::ldexp(1.0, grid.g1) + m2 / std::ldexp(1.0, grid.second()));
  return min.value - guard;
}

Factor2dResult factor_strict(const MatrixLaurentPoly2& q,
                             const Factor2dOptions& opts) {
  const double delta = opts.delta ? *opts.delta : estimate_delta(q, opts.grid);
  if (!(delta > 0.0)) {
    std::ostringstream os;
    os << "not strictly positive on sampling grid: delta_est = " << delta << " <= 0";
    throw Error(ErrorKind::kNotStrictlyPositive, os.str());
  }
  const LiftPlan plan = choose_truncation(q, delta, opts.margin);
  const MatrixLaurentPoly2 perturbed = inverse_cesaro(q, plan.n);

  Factor2dResult out;
  try {
    out = factor_cesaro(perturbed, plan.n, opts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNotPsd) throw;
    std::ostringstream os;
    os << "strictification insufficient: increase margin (" << e.what() << ")";
    throw Error(ErrorKind::kNotStrictlyPositive, os.str());
  }
  // The weights cancel, so the reported residual is already against Q.
  out.plan = plan;
  return out;
}

}  // namespace fejer::factor2d
