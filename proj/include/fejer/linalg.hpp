#pragma once

// Dense complex Hermitian linear algebra used throughout the factorization
// code: eigendecomposition, PSD square roots, contractions and Schur
// complements of 2x2 block operators.

#include <complex>

#include <Eigen/Core>

namespace fejer::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kDefaultHermitianTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultClampTol = 1e-9;

/// Throws kArgument unless `m` is non-empty and every entry is finite.
void require_well_formed(const ComplexMatrix& m, const char* what);

/// Largest entry magnitude (0 for an empty matrix).
double max_abs(const ComplexMatrix& m);

/// Operator 2-norm.
double spectral_norm(const ComplexMatrix& m);

/// A square matrix that is self-adjoint to working precision. Construction
/// validates against the Hermitian tolerance and replaces the input by its
/// Hermitian part (H + H*)/2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  static HermitianMatrix from(const ComplexMatrix& m,
                              double hermitian_tol = kDefaultHermitianTol);

  /// Skips validation; the caller guarantees `m` is square. Only the Hermitian
  /// part is kept.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);

  static HermitianMatrix identity(Index n);
  static HermitianMatrix zero(Index n);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

  /// Spectral norm, i.e. largest |eigenvalue|.
  double norm() const;

 private:
  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct EigenPair {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix basis;     // unitary, eigenvectors as columns
};

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each sweep visits every off-diagonal pair once and annihilates it with a
/// complex plane rotation. Iteration stops when the off-diagonal Frobenius
/// mass drops below machine precision relative to the full norm; a sweep cap
/// guards against pathological input.
EigenPair eig_hermitian(const HermitianMatrix& h);

struct PsdVerdict {
  bool psd = false;
  double smallest = 0.0;
  double largest_magnitude = 0.0;
};

/// PSD iff the smallest eigenvalue is >= -tol * (1 + largest |eigenvalue|).
PsdVerdict psd_check(const HermitianMatrix& h, double tol);

/// Principal square root. Eigenvalues in [-clamp_tol*scale, 0) are treated as
/// zero; anything more negative raises kNotPsd.
HermitianMatrix psd_sqrt(const HermitianMatrix& h,
                         double clamp_tol = kDefaultClampTol);

/// Moore-Penrose inverse of the square root, with eigenvalues at or below
/// rank_tol * largest eigenvalue treated as zero.
ComplexMatrix psd_pinv_sqrt(const HermitianMatrix& h,
                            double rank_tol = kDefaultRankTol);

/// For a PSD block operator [[A, B*], [B, C]], returns the contraction G with
/// B = C^1/2 G A^1/2 that maps ran A into ran C and vanishes on ker A.
/// Ranges are numerical ranges at threshold rank_tol. Throws kNotPsd when the
/// reconstruction fails or G is not a contraction.
ComplexMatrix contraction_extract(const HermitianMatrix& a,
                                  const ComplexMatrix& b,
                                  const HermitianMatrix& c,
                                  double rank_tol = kDefaultRankTol);

/// Schur complement of M supported on its leading k coordinates: the largest
/// PSD S with M - embed(S) still PSD.
///
/// When the trailing block C is well conditioned (cond(C) < 1/rank_tol) this
/// is A - B* C^-1 B; otherwise S = A^1/2 (I - G*G) A^1/2 with G from
/// contraction_extract.
HermitianMatrix schur_complement(const HermitianMatrix& m, Index k,
                                 double rank_tol = kDefaultRankTol,
                                 double clamp_tol = kDefaultClampTol);

/// Pads `s` with zeros to an n x n matrix supported on the leading block.
HermitianMatrix embed(const HermitianMatrix& s, Index n);

struct RangeSolve {
  ComplexMatrix x;
  double residual = 0.0;  // Frobenius norm of rstar * x - b
};

/// Minimum-norm solution of R* X = B with ran X inside the numerical range of
/// R. Throws kNumerical when the residual exceeds 1e-8 * |B|.
RangeSolve range_restricted_solve(const ComplexMatrix& rstar,
                                  const ComplexMatrix& b,
                                  double rank_tol = kDefaultRankTol);

}  // namespace fejer::linalg
