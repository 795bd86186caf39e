#pragma once

// Sums of squares for two-variable matrix Laurent polynomials.
//
// A polynomial in (z1, z2) is lifted to a one-variable polynomial in z1 whose
// coefficients are (N+1)-block Toeplitz sections in z2 scaled by 1/(N+1).
// Factoring the lift and regrouping the block columns of the factor by
// z2-exponent gives N+1 analytic polynomials whose sum of squares equals the
// Cesaro-weighted polynomial Q^(N), where Q_{jk} carries the weight
// (N+1-|k|)/(N+1). For strictly positive Q the weights are pre-inverted on a
// slightly perturbed copy, so the squares reproduce Q itself.

#include <optional>
#include <vector>

#include <json.hpp>

#include "fejer/factor1d.hpp"
#include "fejer/poly.hpp"
#include "fejer/verify.hpp"

namespace fejer::factor2d {

using poly::Index;
using poly::MatrixAnalyticPoly1;
using poly::MatrixAnalyticPoly2;
using poly::MatrixLaurentPoly1;
using poly::MatrixLaurentPoly2;

inline constexpr int kMaxTruncation = 100000;

struct LiftPlan {
  int n = 0;                // truncation degree in z2
  Index r = 0;
  double delta_est = 0.0;   // lower bound used for Q on the torus
  double bound_s = 0.0;     // remainder_bound(Q, n)
  double margin = 0.0;

  nlohmann::json to_json() const;
};

/// Multiplies Q_{jk} by (N+1-|k|)/(N+1). Requires N >= m2.
MatrixLaurentPoly2 cesaro_smooth(const MatrixLaurentPoly2& q, int n);

/// Multiplies Q_{jk} by (N+1)/(N+1-|k|). Requires N >= m2.
MatrixLaurentPoly2 inverse_cesaro(const MatrixLaurentPoly2& q, int n);

/// sum_{jk} |k|/(N+1-|k|) |Q_{jk}|, a bound on sup |inverse_cesaro(Q) - Q|.
double remainder_bound(const MatrixLaurentPoly2& q, int n);

/// Smallest N >= m2 with remainder_bound(Q, N) < delta_est (1 - margin).
LiftPlan choose_truncation(const MatrixLaurentPoly2& q, double delta_est,
                           double margin);

/// One-variable polynomial in z1 with r(N+1)-sized coefficients; block (p, q)
/// of coefficient j is Q_{j,p-q}/(N+1).
MatrixLaurentPoly1 lift_to_block(const MatrixLaurentPoly2& q, int n);

/// Splits every coefficient of phi into N+1 block columns of width r. The
/// block column at position c carries z2-exponent N-c, and block row l goes
/// to factor F_l.
std::vector<MatrixAnalyticPoly2> unlift_factor(const MatrixAnalyticPoly1& phi,
                                               Index r, int n);

struct Factor2dOptions {
  factor1d::FactorOptions inner;
  verify::GridSpec grid{9, std::nullopt};  // delta estimation and residual
  double residual_tol = 1e-6;              // relative to sup |Q| on the grid
  double margin = 1.0 / 3.0;
  std::optional<double> delta;             // overrides the grid estimate
};

struct Factor2dReport {
  factor1d::FactorReport lifted;  // report of the one-variable factorization
  double residual_sup = 0.0;      // against the target (Q^(N) or Q)
  double residual_tol = 0.0;
  double scale = 0.0;
  bool residual_ok = false;
  int factor_count = 0;
  int max_degree1 = 0;

  nlohmann::json to_json() const;
};

struct Factor2dResult {
  std::vector<MatrixAnalyticPoly2> factors;
  Factor2dReport report;
  std::optional<LiftPlan> plan;
};

/// Factors Q^(N) = sum_l F_l^* F_l. Q must be nonnegative on the grid.
Factor2dResult factor_cesaro(const MatrixLaurentPoly2& q, int n,
                             const Factor2dOptions& opts = {});

/// Lower bound for Q on the torus from the grid minimum less a derivative
/// guard, |Q|_1 * pi * (m1 / 2^g1 + m2 / 2^g2).
double estimate_delta(const MatrixLaurentPoly2& q, const verify::GridSpec& grid);

/// Q = sum_l F_l^* F_l for strictly positive Q. Throws kNotStrictlyPositive
/// when the delta estimate is not positive or the perturbed lift fails the
/// nonnegativity screen.
Factor2dResult factor_strict(const MatrixLaurentPoly2& q,
                             const Factor2dOptions& opts = {});

}  // namespace fejer::factor2d
