#include "fejer/verify.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "fejer/errors.hpp"

namespace fejer::verify {

using linalg::HermitianMatrix;
using linalg::Index;

namespace {

double smallest_eig(const ComplexMatrix& m) {
  if (m.rows() == 1) return m(0, 0).real();
  return linalg::eig_hermitian(HermitianMatrix::symmetrized(m)).values(0);
}

double hermitian_norm(const ComplexMatrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0).real());
  const auto e = linalg::eig_hermitian(HermitianMatrix::symmetrized(m));
  return std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
}

double fraction(std::size_t j, std::size_t count) {
  return static_cast<double>(j) / static_cast<double>(count);
}

ComplexMatrix gram_sum(const std::vector<MatrixAnalyticPoly2>& fs, Complex z1,
                       Complex z2, Index r) {
  ComplexMatrix acc = ComplexMatrix::Zero(r, r);
  for (const auto& f : fs) {
    const ComplexMatrix v = poly::eval2(f, z1, z2);
    acc += v.adjoint() * v;
  }
  return acc;
}

}  // namespace

void GridSpec::validate() const {
  auto check = [](int g) {
    if (g < 3 || g > 16) {
      throw Error(ErrorKind::kArgument,
                  "grid exponent " + std::to_string(g) + " outside [3, 16]");
    }
  };
  check(g1);
  if (g2) check(*g2);
}

GridMin grid_min_eig(const MatrixLaurentPoly1& q, const GridSpec& grid) {
  grid.validate();
  const auto pts = poly::unit_roots(grid.g1);
  GridMin best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double v = smallest_eig(poly::eval1(q, pts[j]));
    if (v < best.value) {
      best.value = v;
      best.t1 = fraction(j, pts.size());
    }
  }
  return best;
}

GridMin grid_min_eig(const MatrixLaurentPoly2& q, const GridSpec& grid) {
  grid.validate();
  const auto p1 = poly::unit_roots(grid.g1);
  const auto p2 = poly::unit_roots(grid.second());
  GridMin best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < p1.size(); ++a) {
    for (std::size_t b = 0; b < p2.size(); ++b) {
      const double v = smallest_eig(poly::eval2(q, p1[a], p2[b]));
      if (v < best.value) {
        best.value = v;
        best.t1 = fraction(a, p1.size());
        best.t2 = fraction(b, p2.size());
      }
    }
  }
  return best;
}

double residual(const MatrixLaurentPoly1& q, const MatrixAnalyticPoly1& p,
                const GridSpec& grid) {
  grid.validate();
  if (p.cols() != q.size()) {
    throw Error(ErrorKind::kArgument, "residual: factor width does not match Q");
  }
  double worst = 0.0;
  for (const Complex zeta : poly::unit_roots(grid.g1)) {
    const ComplexMatrix v = poly::eval1(p, zeta);
    worst = std::max(worst, hermitian_norm(poly::eval1(q, zeta) - v.adjoint() * v));
  }
  return worst;
}

double residual(const MatrixLaurentPoly2& q,
                const std::vector<MatrixAnalyticPoly2>& fs,
                const GridSpec& grid) {
  grid.validate();
  for (const auto& f : fs) {
    if (f.cols() != q.size()) {
      throw Error(ErrorKind::kArgument, "residual: factor width does not match Q");
    }
  }
  const auto p1 = poly::unit_roots(grid.g1);
  const auto p2 = poly::unit_roots(grid.second());
  double worst = 0.0;
  for (const Complex z1 : p1) {
    for (const Complex z2 : p2) {
      worst = std::max(worst, hermitian_norm(poly::eval2(q, z1, z2) -
                                             gram_sum(fs, z1, z2, q.size())));
    }
  }
  return worst;
}

double sup_norm(const MatrixLaurentPoly1& q, const GridSpec& grid) {
  grid.validate();
  double worst = 0.0;
  for (const Complex zeta : poly::unit_roots(grid.g1)) {
    worst = std::max(worst, hermitian_norm(poly::eval1(q, zeta)));
  }
  return worst;
}

double sup_norm(const MatrixLaurentPoly2& q, const GridSpec& grid) {
  grid.validate();
  const auto p1 = poly::unit_roots(grid.g1);
  const auto p2 = poly::unit_roots(grid.second());
  double worst = 0.0;
  for (const Complex z1 : p1) {
    for (const Complex z2 : p2) {
      worst = std::max(worst, hermitian_norm(poly::eval2(q, z1, z2)));
    }
  }
  return worst;
}

MatrixAnalyticPoly1 det_poly(const MatrixAnalyticPoly1& p) {
  if (p.rows() != p.cols()) {
    throw Error(ErrorKind::kArgument, "det_poly: coefficients must be square");
  }
  const int degree = static_cast<int>(p.rows()) * p.degree();
  std::size_t count = 1;
  while (count < static_cast<std::size_t>(degree + 1)) count <<= 1;

  std::vector<Complex> samples(count);
  for (std::size_t j = 0; j < count; ++j) {
    const ComplexMatrix v = poly::eval1(p, poly::turn(fraction(j, count)));
    samples[j] = v.rows() == 1 ? v(0, 0) : v.partialPivLu().determinant();
  }
  std::vector<ComplexMatrix> coeffs;
  for (int k = 0; k <= degree; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      acc += samples[j] * std::conj(poly::turn(fraction(j * static_cast<std::size_t>(k) % count, count)));
    }
    coeffs.push_back(ComplexMatrix::Constant(1, 1, acc / static_cast<double>(count)));
  }
  return MatrixAnalyticPoly1(std::move(coeffs));
}

std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && coeffs.back() == Complex(0.0)) coeffs.pop_back();
  if (coeffs.size() <= 1) return {};
  const Index n = static_cast<Index>(coeffs.size()) - 1;
  ComplexMatrix companion = ComplexMatrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < n; ++i) {
    companion(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumerical, "polynomial_roots: eigenvalue solver failed");
  }
  std::vector<Complex> roots;
  for (Index i = 0; i < n; ++i) {
    Complex z = solver.eigenvalues()(i);
    // One Newton step; skipped when the derivative vanishes (multiple roots).
    Complex f = coeffs.back();
    Complex df = 0.0;
    for (Index k = n - 1; k >= 0; --k) {
      df = df * z + f;
      f = f * z + coeffs[static_cast<std::size_t>(k)];
    }
    if (std::abs(df) > 0.0) {
      const Complex step = f / df;
      if (std::abs(step) < 1e-3 * std::max(1.0, std::abs(z))) z -= step;
    }
    roots.push_back(z);
  }
  return roots;
}

const char* to_string(OuterVerdict v) {
  switch (v) {
    case OuterVerdict::kVerified: return "verified";
    case OuterVerdict::kFailed: return "failed";
    case OuterVerdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

OuterCheck outer_check(const MatrixAnalyticPoly1& p, double radius_tol) {
  const MatrixAnalyticPoly1 det = det_poly(p);
  double coef_bound = 0.0;
  for (const auto& c : p.coeffs()) coef_bound += linalg::spectral_norm(c);
  const double scale = std::pow(std::max(coef_bound, 1e-300), static_cast<double>(p.rows()));

  std::vector<Complex> coeffs;
  double largest = 0.0;
  for (int k = 0; k <= det.degree(); ++k) {
    coeffs.push_back(det.coeff(k)(0, 0));
    largest = std::max(largest, std::abs(coeffs.back()));
  }
  OuterCheck out;
  if (largest <= 1e-10 * scale) {
    out.verdict = OuterVerdict::kInconclusive;
    return out;
  }
  // High-order coefficients at rounding level only move roots that are far
  // outside the disk; drop them.
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= 1e-12 * largest) {
    coeffs.pop_back();
  }
  out.verdict = OuterVerdict::kVerified;
  for (const Complex z : polynomial_roots(coeffs)) {
    const double mod = std::abs(z);
    if (!out.min_root_modulus || mod < *out.min_root_modulus) {
      out.min_root_modulus = mod;
      if (mod < 1.0 - radius_tol) {
        out.verdict = OuterVerdict::kFailed;
        out.witness = z;
      }
    }
  }
  return out;
}

}  // namespace fejer::verify
