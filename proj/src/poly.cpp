#include "fejer/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fejer/errors.hpp"

namespace fejer::poly {

namespace {

void require_shape(const ComplexMatrix& m, Index rows, Index cols,
                   const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << what << ": coefficient is " << m.rows() << "x" << m.cols()
       << ", expected " << rows << "x" << cols;
    throw Error(ErrorKind::kArgument, os.str());
  }
}

double max_entry(const std::vector<ComplexMatrix>& coeffs) {
  double out = 0.0;
  for (const auto& c : coeffs) out = std::max(out, linalg::max_abs(c));
  return out;
}

double frobenius_sum(const std::vector<ComplexMatrix>& coeffs) {
  double out = 0.0;
  for (const auto& c : coeffs) out += c.norm();
  return out;
}

void require_unimodular(Complex zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > kUnimodularTol) {
    std::ostringstream os;
    os << "Laurent polynomial evaluated off the unit circle (|zeta| = "
       << std::abs(zeta) << ")";
    throw Error(ErrorKind::kArgument, os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MatrixLaurentPoly1

MatrixLaurentPoly1::MatrixLaurentPoly1(std::vector<ComplexMatrix> coeffs) {
  if (coeffs.empty() || coeffs.size() % 2 == 0) {
    throw Error(ErrorKind::kArgument,
                "MatrixLaurentPoly1: need 2m+1 coefficients");
  }
  m_ = static_cast<int>(coeffs.size() / 2);
  r_ = coeffs.front().rows();
  for (const auto& c : coeffs) {
    linalg::require_well_formed(c, "MatrixLaurentPoly1");
    require_shape(c, r_, r_, "MatrixLaurentPoly1");
  }
  const double tol = kSymmetryTol * std::max(1.0, max_entry(coeffs));
  for (int k = 0; k <= m_; ++k) {
    auto& pos = coeffs[static_cast<std::size_t>(m_ + k)];
    auto& neg = coeffs[static_cast<std::size_t>(m_ - k)];
    const double skew = linalg::max_abs(neg - pos.adjoint());
    if (skew > tol) {
      std::ostringstream os;
      os << "MatrixLaurentPoly1: Q_{-" << k << "} differs from Q_" << k
         << "^* by " << skew;
      throw Error(ErrorKind::kArgument, os.str());
    }
    const ComplexMatrix avg = 0.5 * (pos + neg.adjoint());
    pos = avg;
    neg = avg.adjoint();
  }
  // Tight degree.
  int top = m_;
  while (top > 0 && coeffs[static_cast<std::size_t>(m_ + top)].isZero(0.0)) --top;
  coeffs_.assign(coeffs.begin() + (m_ - top), coeffs.begin() + (m_ + top + 1));
  m_ = top;
  zero_ = ComplexMatrix::Zero(r_, r_);
}

MatrixLaurentPoly1 MatrixLaurentPoly1::from_causal(
    std::vector<ComplexMatrix> causal) {
  if (causal.empty()) {
    throw Error(ErrorKind::kArgument, "from_causal: no coefficients");
  }
  const std::size_t m = causal.size() - 1;
  std::vector<ComplexMatrix> all(2 * m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    all[m + k] = causal[k];
    all[m - k] = causal[k].adjoint();
  }
  return MatrixLaurentPoly1(std::move(all));
}

MatrixLaurentPoly1 MatrixLaurentPoly1::constant(const ComplexMatrix& q0) {
  return MatrixLaurentPoly1(std::vector<ComplexMatrix>{q0});
}

const ComplexMatrix& MatrixLaurentPoly1::coeff(int k) const {
  if (k < -m_ || k > m_) return zero_;
  return coeffs_[static_cast<std::size_t>(k + m_)];
}

double MatrixLaurentPoly1::scale() const { return frobenius_sum(coeffs_); }

// ---------------------------------------------------------------------------
// MatrixAnalyticPoly1

MatrixAnalyticPoly1::MatrixAnalyticPoly1(std::vector<ComplexMatrix> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw Error(ErrorKind::kArgument, "MatrixAnalyticPoly1: no coefficients");
  }
  rows_ = coeffs_.front().rows();
  cols_ = coeffs_.front().cols();
  for (const auto& c : coeffs_) {
    linalg::require_well_formed(c, "MatrixAnalyticPoly1");
    require_shape(c, rows_, cols_, "MatrixAnalyticPoly1");
  }
}

double MatrixAnalyticPoly1::scale() const { return frobenius_sum(coeffs_); }

// ---------------------------------------------------------------------------
// MatrixLaurentPoly2

MatrixLaurentPoly2::MatrixLaurentPoly2(int m1, int m2,
                                       std::vector<ComplexMatrix> coeffs)
    : m1_(m1), m2_(m2), coeffs_(std::move(coeffs)) {
  if (m1 < 0 || m2 < 0 ||
      coeffs_.size() != static_cast<std::size_t>((2 * m1 + 1) * (2 * m2 + 1))) {
    throw Error(ErrorKind::kArgument,
                "MatrixLaurentPoly2: coefficient count does not match degrees");
  }
  r_ = coeffs_.front().rows();
  for (const auto& c : coeffs_) {
    linalg::require_well_formed(c, "MatrixLaurentPoly2");
    require_shape(c, r_, r_, "MatrixLaurentPoly2");
  }
  const double tol = kSymmetryTol * std::max(1.0, max_entry(coeffs_));
  for (int j = -m1_; j <= m1_; ++j) {
    for (int k = -m2_; k <= m2_; ++k) {
      if (slot(j, k) < slot(-j, -k)) continue;
      auto& a = coeffs_[slot(j, k)];
      auto& b = coeffs_[slot(-j, -k)];
      const double skew = linalg::max_abs(b - a.adjoint());
      if (skew > tol) {
        std::ostringstream os;
        os << "MatrixLaurentPoly2: Q_{" << -j << "," << -k
           << "} differs from Q_{" << j << "," << k << "}^* by " << skew;
        throw Error(ErrorKind::kArgument, os.str());
      }
      const ComplexMatrix avg = 0.5 * (a + b.adjoint());
      a = avg;
      b = avg.adjoint();
    }
  }
  zero_ = ComplexMatrix::Zero(r_, r_);
}

MatrixLaurentPoly2 MatrixLaurentPoly2::zero(Index r, int m1, int m2) {
  return MatrixLaurentPoly2(
      m1, m2,
      std::vector<ComplexMatrix>(static_cast<std::size_t>((2 * m1 + 1) * (2 * m2 + 1)),
                                 ComplexMatrix::Zero(r, r)));
}

const ComplexMatrix& MatrixLaurentPoly2::coeff(int j, int k) const {
  if (j < -m1_ || j > m1_ || k < -m2_ || k > m2_) return zero_;
  return coeffs_[slot(j, k)];
}

double MatrixLaurentPoly2::scale() const { return frobenius_sum(coeffs_); }

double MatrixLaurentPoly2::opnorm_sum() const {
  double out = 0.0;
  for (const auto& c : coeffs_) out += linalg::spectral_norm(c);
  return out;
}

// ---------------------------------------------------------------------------
// MatrixAnalyticPoly2

MatrixAnalyticPoly2::MatrixAnalyticPoly2(int m1, int m2,
                                         std::vector<ComplexMatrix> coeffs)
    : m1_(m1), m2_(m2), coeffs_(std::move(coeffs)) {
  if (m1 < 0 || m2 < 0 ||
      coeffs_.size() != static_cast<std::size_t>((m1 + 1) * (m2 + 1))) {
    throw Error(ErrorKind::kArgument,
                "MatrixAnalyticPoly2: coefficient count does not match degrees");
  }
  rows_ = coeffs_.front().rows();
  cols_ = coeffs_.front().cols();
  for (const auto& c : coeffs_) {
    linalg::require_well_formed(c, "MatrixAnalyticPoly2");
    require_shape(c, rows_, cols_, "MatrixAnalyticPoly2");
  }
  zero_ = ComplexMatrix::Zero(rows_, cols_);
}

const ComplexMatrix& MatrixAnalyticPoly2::coeff(int j, int k) const {
  if (j < 0 || j > m1_ || k < 0 || k > m2_) return zero_;
  return coeffs_[static_cast<std::size_t>(j * (m2_ + 1) + k)];
}

double MatrixAnalyticPoly2::scale() const { return frobenius_sum(coeffs_); }

// ---------------------------------------------------------------------------
// Evaluation

ComplexMatrix eval1(const MatrixLaurentPoly1& q, Complex zeta) {
  require_unimodular(zeta);
  const int m = q.degree();
  // Causal half in zeta, anticausal half in conj(zeta) = 1/zeta.
  ComplexMatrix causal = q.coeff(m);
  for (int k = m - 1; k >= 0; --k) causal = causal * zeta + q.coeff(k);
  ComplexMatrix anti = ComplexMatrix::Zero(q.size(), q.size());
  const Complex zbar = std::conj(zeta);
  for (int k = m; k >= 1; --k) anti = (anti + q.coeff(-k)) * zbar;
  return causal + anti;
}

ComplexMatrix eval1(const MatrixAnalyticPoly1& p, Complex z) {
  ComplexMatrix acc = p.coeff(p.degree());
  for (int k = p.degree() - 1; k >= 0; --k) acc = acc * z + p.coeff(k);
  return acc;
}

ComplexMatrix eval2(const MatrixLaurentPoly2& q, Complex zeta1, Complex zeta2) {
  require_unimodular(zeta1);
  require_unimodular(zeta2);
  const int m1 = q.degree1();
  const int m2 = q.degree2();
  const Complex z2bar = std::conj(zeta2);
  // Inner Horner in zeta2 for each j, outer split Horner in zeta1.
  auto row = [&](int j) {
    ComplexMatrix causal = q.coeff(j, m2);
    for (int k = m2 - 1; k >= 0; --k) causal = causal * zeta2 + q.coeff(j, k);
    ComplexMatrix anti = ComplexMatrix::Zero(q.size(), q.size());
    for (int k = m2; k >= 1; --k) anti = (anti + q.coeff(j, -k)) * z2bar;
    return ComplexMatrix(causal + anti);
  };
  ComplexMatrix causal = row(m1);
  for (int j = m1 - 1; j >= 0; --j) causal = causal * zeta1 + row(j);
  ComplexMatrix anti = ComplexMatrix::Zero(q.size(), q.size());
  const Complex z1bar = std::conj(zeta1);
  for (int j = m1; j >= 1; --j) anti = (anti + row(-j)) * z1bar;
  return causal + anti;
}

ComplexMatrix eval2(const MatrixAnalyticPoly2& f, Complex z1, Complex z2) {
  ComplexMatrix acc = ComplexMatrix::Zero(f.rows(), f.cols());
  for (int j = f.degree1(); j >= 0; --j) {
    ComplexMatrix inner = f.coeff(j, f.degree2());
    for (int k = f.degree2() - 1; k >= 0; --k) inner = inner * z2 + f.coeff(j, k);
    acc = acc * z1 + inner;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Products and Toeplitz sections

MatrixLaurentPoly1 adjoint_product(const MatrixAnalyticPoly1& p) {
  const int m = p.degree();
  std::vector<ComplexMatrix> causal;
  causal.reserve(static_cast<std::size_t>(m + 1));
  for (int h = 0; h <= m; ++h) {
    ComplexMatrix acc = ComplexMatrix::Zero(p.cols(), p.cols());
    for (int j = 0; j + h <= m; ++j) acc += p.coeff(j).adjoint() * p.coeff(j + h);
    causal.push_back(std::move(acc));
  }
  causal[0] = HermitianMatrix::symmetrized(causal[0]).matrix();
  return MatrixLaurentPoly1::from_causal(std::move(causal));
}

MatrixLaurentPoly2 adjoint_product_list2(
    const std::vector<MatrixAnalyticPoly2>& fs) {
  if (fs.empty()) {
    throw Error(ErrorKind::kArgument, "adjoint_product_list2: no factors");
  }
  const Index r = fs.front().cols();
  int m1 = 0;
  int m2 = 0;
  for (const auto& f : fs) {
    if (f.cols() != r) {
      throw Error(ErrorKind::kArgument,
                  "adjoint_product_list2: factors disagree on column count");
    }
    m1 = std::max(m1, f.degree1());
    m2 = std::max(m2, f.degree2());
  }
  const std::size_t width = static_cast<std::size_t>(2 * m2 + 1);
  std::vector<ComplexMatrix> coeffs(static_cast<std::size_t>(2 * m1 + 1) * width,
                                    ComplexMatrix::Zero(r, r));
  for (const auto& f : fs) {
    for (int j = 0; j <= f.degree1(); ++j) {
      for (int k = 0; k <= f.degree2(); ++k) {
        const ComplexMatrix lhs = f.coeff(j, k).adjoint();
        for (int jj = 0; jj <= f.degree1(); ++jj) {
          for (int kk = 0; kk <= f.degree2(); ++kk) {
            const int a = jj - j;
            const int b = kk - k;
            coeffs[static_cast<std::size_t>(a + m1) * width +
                   static_cast<std::size_t>(b + m2)] += lhs * f.coeff(jj, kk);
          }
        }
      }
    }
  }
  return MatrixLaurentPoly2(m1, m2, std::move(coeffs));
}

HermitianMatrix block_toeplitz(const MatrixLaurentPoly1& q, Index n) {
  if (n < 1) throw Error(ErrorKind::kArgument, "block_toeplitz: n must be >= 1");
  const Index r = q.size();
  ComplexMatrix t = ComplexMatrix::Zero(r * n, r * n);
  for (Index p = 0; p < n; ++p) {
    for (Index c = 0; c < n; ++c) {
      const int k = static_cast<int>(p - c);
      if (std::abs(k) > q.degree()) continue;
      t.block(p * r, c * r, r, r) = q.coeff(k);
    }
  }
  return HermitianMatrix::symmetrized(t);
}

ToeplitzCheck toeplitz_psd_check(const MatrixLaurentPoly1& q, Index n,
                                 double tol) {
  const linalg::PsdVerdict v = linalg::psd_check(block_toeplitz(q, n), tol);
  return ToeplitzCheck{v.psd, v.smallest, n};
}

Complex turn(double t) {
  t -= std::floor(t);
  const double quarter = 4.0 * t;
  if (quarter == std::floor(quarter)) {
    switch (static_cast<int>(quarter)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
      default: break;
    }
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * t);
}

std::vector<Complex> unit_roots(int g) {
  const std::size_t count = std::size_t{1} << g;
  std::vector<Complex> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    out[j] = turn(static_cast<double>(j) / static_cast<double>(count));
  }
  return out;
}

}  // namespace fejer::poly
