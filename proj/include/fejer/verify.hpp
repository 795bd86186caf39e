#pragma once

// Independent checks on factorizations: torus sampling, residuals, and
// outerness through determinant roots.

#include <optional>
#include <vector>

#include "fejer/poly.hpp"

namespace fejer::verify {

using poly::Complex;
using poly::ComplexMatrix;
using poly::MatrixAnalyticPoly1;
using poly::MatrixAnalyticPoly2;
using poly::MatrixLaurentPoly1;
using poly::MatrixLaurentPoly2;

/// log2 point counts per variable. g2 defaults to g1 for two-variable input.
struct GridSpec {
  int g1 = 9;
  std::optional<int> g2;

  /// Throws kArgument unless every count lies in [3, 16].
  void validate() const;
  int second() const { return g2.value_or(g1); }
};

struct GridMin {
  double value = 0.0;
  // Attaining point as fractions of a full turn.
  double t1 = 0.0;
  double t2 = 0.0;
};

GridMin grid_min_eig(const MatrixLaurentPoly1& q, const GridSpec& grid);
GridMin grid_min_eig(const MatrixLaurentPoly2& q, const GridSpec& grid);

/// sup over the grid of |Q(zeta) - P(zeta)^* P(zeta)|.
double residual(const MatrixLaurentPoly1& q, const MatrixAnalyticPoly1& p,
                const GridSpec& grid);
/// sup over the grid of |Q(zeta) - sum_l F_l(zeta)^* F_l(zeta)|.
double residual(const MatrixLaurentPoly2& q,
                const std::vector<MatrixAnalyticPoly2>& fs,
                const GridSpec& grid);

/// sup over the grid of |Q(zeta)| (the operator norm scale of Q).
double sup_norm(const MatrixLaurentPoly1& q, const GridSpec& grid);
double sup_norm(const MatrixLaurentPoly2& q, const GridSpec& grid);

/// Coefficients of det P(z), recovered from samples at roots of unity.
MatrixAnalyticPoly1 det_poly(const MatrixAnalyticPoly1& p);

/// Roots of c_0 + c_1 z + ... + c_n z^n from the companion matrix, each
/// refined by one Newton step. Leading coefficients that are zero are
/// dropped first.
std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs);

enum class OuterVerdict { kVerified, kFailed, kInconclusive };

const char* to_string(OuterVerdict v);

struct OuterCheck {
  OuterVerdict verdict = OuterVerdict::kInconclusive;
  std::optional<Complex> witness;   // offending root when failed
  std::optional<double> min_root_modulus;
};

/// Verified when every root of det P has modulus >= 1 - radius_tol; failed
/// with the smallest such root otherwise; inconclusive when det P vanishes
/// identically (coefficients below 1e-10 * scale).
OuterCheck outer_check(const MatrixAnalyticPoly1& p, double radius_tol = 1e-6);

}  // namespace fejer::verify
