#pragma once

// One-variable spectral factorization Q = P^* P with P outer and P(0) >= 0.
//
// The factor is built one coefficient at a time from Schur complements of the
// block Toeplitz operator T_Q supported on its leading k+1 blocks, S(k):
//
//   P_0 = S(0)^1/2,
//   S(k) = L_k^* L_k with L_k lower block-triangular Toeplitz in P_0..P_k,
//
// and each new coefficient is read off the first block column of S(k) by a
// range-restricted triangular solve against L_{k-1}^*. The infinite operator
// is approached through finite sections whose size doubles until the
// complement settles.
//
// A classical root-pairing factorization for scalar input is provided as an
// independent cross-check.

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "fejer/linalg.hpp"
#include "fejer/poly.hpp"
#include "fejer/verify.hpp"

namespace fejer::factor1d {

using linalg::HermitianMatrix;
using poly::MatrixAnalyticPoly1;
using poly::MatrixLaurentPoly1;

struct SchurOptions {
  double rank_tol = linalg::kDefaultRankTol;
  double clamp_tol = linalg::kDefaultClampTol;
  double conv_tol = 1e-12;  // relative to Q.scale()
  int n0 = 0;               // 0 selects 4 (m + 1)
  int n_max = 4096;
};

struct SchurResult {
  HermitianMatrix value;
  int k = 0;
  int n_used = 0;
  std::optional<double> gap;  // |S_N - S_2N| at the last doubling
  bool converged = false;
};

/// Schur complement of the n-block Toeplitz section of Q supported on its
/// leading k+1 blocks. Throws kNotPsd when the section is not PSD.
HermitianMatrix truncated_schur(const MatrixLaurentPoly1& q, int k, int n,
                                const SchurOptions& opts = {});

/// Doubles the section size from opts.n0 until two consecutive complements
/// agree to conv_tol * Q.scale(). Throws kConvergence past opts.n_max.
SchurResult schur_limit(const MatrixLaurentPoly1& q, int k,
                        const SchurOptions& opts = {});

/// Truncated complements S_N(k) for all k that share one elimination sweep.
/// Exposed for diagnostics and tests; factor() uses it internally.
class SchurSequence {
 public:
  SchurSequence(const MatrixLaurentPoly1& q, const SchurOptions& opts);
  ~SchurSequence();
  SchurSequence(SchurSequence&&) noexcept;
  SchurSequence& operator=(SchurSequence&&) noexcept;

  /// S_n(k). Requires n >= k + 1.
  HermitianMatrix complement(int k, int n);

  /// Doubling loop of schur_limit without the throw.
  SchurResult limit(int k);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct FactorOptions {
  SchurOptions schur;
  double residual_tol = 1e-8;  // relative to sup |Q| on the grid
  double radius_tol = 1e-6;
  verify::GridSpec grid{9, std::nullopt};
};

struct FactorReport {
  double residual_sup = 0.0;
  double residual_tol = 0.0;  // absolute threshold used; at least gap when unconverged
  double scale = 0.0;         // sup |Q| on the grid
  bool residual_ok = false;
  verify::OuterVerdict outer_verdict = verify::OuterVerdict::kInconclusive;
  std::optional<poly::Complex> outer_witness;
  std::optional<double> min_root_modulus;
  int n_used = 0;
  bool converged = false;
  std::optional<double> gap;     // largest final doubling gap over all k
  double trailing_norm = 0.0;    // |P_{m+1}|, zero in exact arithmetic
  double extension_residual = 0.0;
  FactorOptions options;

  nlohmann::json to_json() const;
};

struct FactorResult {
  MatrixAnalyticPoly1 factor;
  FactorReport report;
};

/// Outer factor of Q with P(0) PSD.
///
/// Inputs whose (m+1)-block Toeplitz section fails the PSD screen raise
/// kNotPsd. If a Schur complement does not settle within n_max blocks the
/// best available factor is still returned with report.converged == false.
/// An inconsistent extension solve raises kNumerical.
FactorResult factor(const MatrixLaurentPoly1& q, const FactorOptions& opts = {});

/// Left-multiplies P by the adjoint of the polar unitary of P(0), so that
/// P(0) becomes PSD. On the numerical kernel of P(0) the unitary is the one
/// closest to the identity.
MatrixAnalyticPoly1 normalize_gauge(const MatrixAnalyticPoly1& p,
                                    double rank_tol = linalg::kDefaultRankTol);

/// Scalar factorization by pairing roots z, 1/conj(z) of z^m q(z) and keeping
/// the ones outside the open disk. Throws kArgument for matrix input and
/// kNotPsd for inputs that are negative on a 1024-point grid or have an
/// unpaired boundary root.
MatrixAnalyticPoly1 scalar_root_factor(const MatrixLaurentPoly1& q,
                                       double pairing_tol = 1e-6);

}  // namespace fejer::factor1d
