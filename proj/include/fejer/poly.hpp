#pragma once

// Matrix-coefficient trigonometric (Laurent) and analytic polynomials in one
// and two variables.
//
// Conventions: a Laurent polynomial Q(z) = sum_k Q_k z^k is self-adjoint on
// the unit circle, i.e. Q_{-k} = Q_k^*. Its block Toeplitz matrix has block
// (p, q) equal to Q_{p-q}. For an analytic P, the adjoint product P^* P has
// coefficients Q_h = sum_j P_j^* P_{j+h}.

#include <vector>

#include "fejer/linalg.hpp"

namespace fejer::poly {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using linalg::Index;

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kUnimodularTol = 1e-12;

class MatrixLaurentPoly1 {
 public:
  MatrixLaurentPoly1() = default;

  /// `coeffs` holds Q_{-m}, ..., Q_m (odd length, all r x r). Validates the
  /// symmetry Q_{-k} = Q_k^* to kSymmetryTol relative to the largest entry,
  /// symmetrizes, and trims vanishing outer coefficients so the degree is
  /// tight.
  explicit MatrixLaurentPoly1(std::vector<ComplexMatrix> coeffs);

  /// Builds from the causal half Q_0, ..., Q_m; negative indices are the
  /// adjoints. Q_0 must be Hermitian.
  static MatrixLaurentPoly1 from_causal(std::vector<ComplexMatrix> causal);

  static MatrixLaurentPoly1 constant(const ComplexMatrix& q0);

  Index size() const noexcept { return r_; }
  int degree() const noexcept { return m_; }

  /// Q_k, or zero for |k| > degree().
  const ComplexMatrix& coeff(int k) const;

  /// Sum of coefficient Frobenius norms; bounds sup |Q(zeta)| on the circle.
  double scale() const;

 private:
  Index r_ = 0;
  int m_ = 0;
  std::vector<ComplexMatrix> coeffs_;  // index k + m
  ComplexMatrix zero_;
};

class MatrixAnalyticPoly1 {
 public:
  MatrixAnalyticPoly1() = default;

  /// `coeffs` holds P_0, ..., P_m, all of identical shape.
  explicit MatrixAnalyticPoly1(std::vector<ComplexMatrix> coeffs);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  const ComplexMatrix& coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  const std::vector<ComplexMatrix>& coeffs() const noexcept { return coeffs_; }

  double scale() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<ComplexMatrix> coeffs_;
};

class MatrixLaurentPoly2 {
 public:
  MatrixLaurentPoly2() = default;

  /// Row-major over (j, k) with j in [-m1, m1] outer and k in [-m2, m2]
  /// inner. Validates Q_{-j,-k} = Q_{jk}^* and symmetrizes. Degrees are kept
  /// as given.
  MatrixLaurentPoly2(int m1, int m2, std::vector<ComplexMatrix> coeffs);

  /// All-zero polynomial of the given shape.
  static MatrixLaurentPoly2 zero(Index r, int m1, int m2);

  Index size() const noexcept { return r_; }
  int degree1() const noexcept { return m1_; }
  int degree2() const noexcept { return m2_; }

  const ComplexMatrix& coeff(int j, int k) const;

  double scale() const;

  /// Sum over (j, k) of the spectral norms of Q_{jk}.
  double opnorm_sum() const;

 private:
  std::size_t slot(int j, int k) const {
    return static_cast<std::size_t>((j + m1_) * (2 * m2_ + 1) + (k + m2_));
  }

  Index r_ = 0;
  int m1_ = 0;
  int m2_ = 0;
  std::vector<ComplexMatrix> coeffs_;
  ComplexMatrix zero_;
};

class MatrixAnalyticPoly2 {
 public:
  MatrixAnalyticPoly2() = default;

  /// Row-major over j in [0, m1] outer and k in [0, m2] inner.
  MatrixAnalyticPoly2(int m1, int m2, std::vector<ComplexMatrix> coeffs);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  int degree1() const noexcept { return m1_; }
  int degree2() const noexcept { return m2_; }

  /// F_{jk}, or zero outside the stored range.
  const ComplexMatrix& coeff(int j, int k) const;

  double scale() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  int m1_ = 0;
  int m2_ = 0;
  std::vector<ComplexMatrix> coeffs_;
  ComplexMatrix zero_;
};

/// Q(zeta); zeta must be unimodular.
ComplexMatrix eval1(const MatrixLaurentPoly1& q, Complex zeta);
/// P(z) for any complex z.
ComplexMatrix eval1(const MatrixAnalyticPoly1& p, Complex z);

ComplexMatrix eval2(const MatrixLaurentPoly2& q, Complex zeta1, Complex zeta2);
ComplexMatrix eval2(const MatrixAnalyticPoly2& f, Complex z1, Complex z2);

/// P^* P as a Laurent polynomial.
MatrixLaurentPoly1 adjoint_product(const MatrixAnalyticPoly1& p);

/// sum_l F_l^* F_l. All factors must share the column dimension.
MatrixLaurentPoly2 adjoint_product_list2(const std::vector<MatrixAnalyticPoly2>& fs);

/// The n-block leading section of the Toeplitz matrix of Q.
HermitianMatrix block_toeplitz(const MatrixLaurentPoly1& q, Index n);

struct ToeplitzCheck {
  bool psd = false;
  double smallest = 0.0;
  Index n_used = 0;
};

ToeplitzCheck toeplitz_psd_check(const MatrixLaurentPoly1& q, Index n,
                                 double tol);

/// The 2^g-th roots of unity, exp(2 pi i j / 2^g).
std::vector<Complex> unit_roots(int g);

/// exp(2 pi i t) with exact values at multiples of a quarter turn.
Complex turn(double t);

}  // namespace fejer::poly
