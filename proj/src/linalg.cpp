#include "fejer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/SVD>

#include "fejer/errors.hpp"

namespace fejer::linalg {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kEps = std::numeric_limits<double>::epsilon();

ComplexMatrix from_eigen(const EigenPair& e, const Eigen::VectorXd& values) {
  return e.basis * values.cast<Complex>().asDiagonal() * e.basis.adjoint();
}

double scale_of(const EigenPair& e) {
  if (e.values.size() == 0) return 0.0;
  return std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
}

}  // namespace

void require_well_formed(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw Error(ErrorKind::kArgument, std::string(what) + ": empty matrix");
  }
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        throw Error(ErrorKind::kArgument,
                    std::string(what) + ": non-finite entry");
      }
    }
  }
}

double max_abs(const ComplexMatrix& m) {
  double out = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) out = std::max(out, std::abs(m(i, j)));
  }
  return out;
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  // The smaller Gram matrix has the same nonzero spectrum.
  const ComplexMatrix gram =
      m.rows() < m.cols() ? ComplexMatrix(m * m.adjoint()) : ComplexMatrix(m.adjoint() * m);
  const EigenPair e = eig_hermitian(HermitianMatrix::symmetrized(gram));
  return std::sqrt(std::max(0.0, e.values(e.values.size() - 1)));
}

HermitianMatrix HermitianMatrix::from(const ComplexMatrix& m,
                                      double hermitian_tol) {
  require_well_formed(m, "HermitianMatrix");
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "HermitianMatrix: matrix is " << m.rows() << "x" << m.cols()
       << ", expected square";
    throw Error(ErrorKind::kArgument, os.str());
  }
  const double skew = max_abs(m - m.adjoint());
  if (skew > hermitian_tol * (1.0 + max_abs(m))) {
    std::ostringstream os;
    os << "HermitianMatrix: |H - H*| = " << skew << " exceeds tolerance";
    throw Error(ErrorKind::kArgument, os.str());
  }
  return symmetrized(m);
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  for (Index i = 0; i < h.rows(); ++i) h(i, i) = h(i, i).real();
  return HermitianMatrix(std::move(h));
}

HermitianMatrix HermitianMatrix::identity(Index n) {
  return HermitianMatrix(ComplexMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(Index n) {
  return HermitianMatrix(ComplexMatrix::Zero(n, n));
}

double HermitianMatrix::norm() const { return scale_of(eig_hermitian(*this)); }

EigenPair eig_hermitian(const HermitianMatrix& h) {
  ComplexMatrix a = h.matrix();
  const Index n = a.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double total = a.norm();
  bool converged = total == 0.0 || n == 1;
  double off = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    off = 0.0;
    for (Index q = 0; q < n; ++q) {
      for (Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    }
    off = std::sqrt(2.0 * off);
    if (off <= kEps * total) {
      converged = true;
      break;
    }
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Below this size the rotation would not change the diagonal in
        // floating point.
        if (mag < 1e-3 * kEps * std::max(std::abs(app), std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex s_phase = s * phase;
        const Complex s_conj = s * std::conj(phase);

        for (Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s_conj * akq;
          a(k, q) = s_phase * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s_phase * aqk;
          a(q, k) = s_conj * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s_conj * vkq;
          v(k, q) = s_phase * vkp + c * vkq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "eig_hermitian: no convergence after " << kMaxSweeps
       << " sweeps on a " << n << "x" << n
       << " matrix (off-diagonal residual " << off << ")";
    throw Error(ErrorKind::kNumerical, os.str());
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    return a(i, i).real() < a(j, j).real();
  });
  EigenPair out;
  out.values.resize(n);
  out.basis.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = a(src, src).real();
    out.basis.col(i) = v.col(src);
  }
  return out;
}

PsdVerdict psd_check(const HermitianMatrix& h, double tol) {
  const EigenPair e = eig_hermitian(h);
  PsdVerdict v;
  v.smallest = e.values(0);
  v.largest_magnitude = scale_of(e);
  v.psd = v.smallest >= -tol * (1.0 + v.largest_magnitude);
  return v;
}

HermitianMatrix psd_sqrt(const HermitianMatrix& h, double clamp_tol) {
  const EigenPair e = eig_hermitian(h);
  const double scale = scale_of(e);
  Eigen::VectorXd roots(e.values.size());
  for (Index i = 0; i < e.values.size(); ++i) {
    const double lambda = e.values(i);
    if (lambda < -clamp_tol * scale) {
      std::ostringstream os;
      os << "psd_sqrt: not PSD, eigenvalue " << lambda << " below -"
         << clamp_tol << " * " << scale;
      throw Error(ErrorKind::kNotPsd, os.str());
    }
    roots(i) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  return HermitianMatrix::symmetrized(from_eigen(e, roots));
}

ComplexMatrix psd_pinv_sqrt(const HermitianMatrix& h, double rank_tol) {
  const EigenPair e = eig_hermitian(h);
  const double cutoff = rank_tol * scale_of(e);
  Eigen::VectorXd inv(e.values.size());
  for (Index i = 0; i < e.values.size(); ++i) {
    inv(i) = e.values(i) > cutoff && e.values(i) > 0.0
                 ? 1.0 / std::sqrt(e.values(i))
                 : 0.0;
  }
  return from_eigen(e, inv);
}

ComplexMatrix contraction_extract(const HermitianMatrix& a,
                                  const ComplexMatrix& b,
                                  const HermitianMatrix& c, double rank_tol) {
  if (b.rows() != c.dim() || b.cols() != a.dim()) {
    std::ostringstream os;
    os << "contraction_extract: B is " << b.rows() << "x" << b.cols()
       << " but A is " << a.dim() << "x" << a.dim() << " and C is " << c.dim()
       << "x" << c.dim();
    throw Error(ErrorKind::kArgument, os.str());
  }
  const ComplexMatrix a_half = psd_sqrt(a).matrix();
  const ComplexMatrix c_half = psd_sqrt(c).matrix();
  ComplexMatrix g =
      psd_pinv_sqrt(c, rank_tol) * b * psd_pinv_sqrt(a, rank_tol);

  // Singular values marginally above one are rounding; pull them back.
  const EigenPair gram = eig_hermitian(HermitianMatrix::symmetrized(g.adjoint() * g));
  const double sigma_max = std::sqrt(std::max(0.0, gram.values(gram.values.size() - 1)));
  if (sigma_max > 1.0 + 1e-6) {
    std::ostringstream os;
    os << "contraction_extract: block not PSD (|G| = " << sigma_max << ")";
    throw Error(ErrorKind::kNotPsd, os.str());
  }
  if (sigma_max > 1.0) {
    Eigen::VectorXd shrink(gram.values.size());
    for (Index i = 0; i < shrink.size(); ++i) {
      const double sigma = std::sqrt(std::max(0.0, gram.values(i)));
      shrink(i) = sigma > 1.0 ? 1.0 / sigma : 1.0;
    }
    g = g * from_eigen(gram, shrink);
  }

  const double scale = std::max({1e-300, a.norm(), c.norm()});
  const double recon = max_abs(c_half * g * a_half - b);
  if (recon > std::max(1e-8, 10.0 * std::sqrt(rank_tol)) * scale) {
    std::ostringstream os;
    os << "contraction_extract: block not PSD (reconstruction residual "
       << recon << ")";
    throw Error(ErrorKind::kNotPsd, os.str());
  }
  return g;
}

HermitianMatrix embed(const HermitianMatrix& s, Index n) {
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  out.topLeftCorner(s.dim(), s.dim()) = s.matrix();
  return HermitianMatrix::symmetrized(out);
}

HermitianMatrix schur_complement(const HermitianMatrix& m, Index k,
                                 double rank_tol, double clamp_tol) {
  const Index n = m.dim();
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "schur_complement: split " << k << " out of range for dimension "
       << n;
    throw Error(ErrorKind::kArgument, os.str());
  }
  const PsdVerdict verdict = psd_check(m, clamp_tol);
  if (!verdict.psd) {
    std::ostringstream os;
    os << "schur_complement: not PSD (smallest eigenvalue " << verdict.smallest
       << ")";
    throw Error(ErrorKind::kNotPsd, os.str());
  }
  if (k == n) return m;

  const ComplexMatrix& mm = m.matrix();
  const HermitianMatrix a = HermitianMatrix::symmetrized(mm.topLeftCorner(k, k));
  const ComplexMatrix b = mm.bottomLeftCorner(n - k, k);
  const HermitianMatrix c =
      HermitianMatrix::symmetrized(mm.bottomRightCorner(n - k, n - k));

  const EigenPair ce = eig_hermitian(c);
  const double c_min = ce.values(0);
  const double c_max = ce.values(ce.values.size() - 1);

  ComplexMatrix s;
  if (c_max > 0.0 && c_min > rank_tol * c_max) {
    const Eigen::VectorXd inv = ce.values.cwiseInverse();
    const ComplexMatrix w = ce.basis.adjoint() * b;
    s = a.matrix() - w.adjoint() * inv.cast<Complex>().asDiagonal() * w;
  } else {
    const ComplexMatrix g = contraction_extract(a, b, c, rank_tol);
    const ComplexMatrix a_half = psd_sqrt(a, clamp_tol).matrix();
    s = a_half *
        (ComplexMatrix::Identity(k, k) - g.adjoint() * g) * a_half;
  }

  // Rounding can leave tiny negative eigenvalues; project them out.
  const EigenPair se = eig_hermitian(HermitianMatrix::symmetrized(s));
  if (se.values(0) < 0.0) {
    return HermitianMatrix::symmetrized(
        from_eigen(se, se.values.cwiseMax(0.0)));
  }
  return HermitianMatrix::symmetrized(s);
}

RangeSolve range_restricted_solve(const ComplexMatrix& rstar,
                                  const ComplexMatrix& b, double rank_tol) {
  if (rstar.rows() != b.rows()) {
    std::ostringstream os;
    os << "range_restricted_solve: R* has " << rstar.rows()
       << " rows but B has " << b.rows();
    throw Error(ErrorKind::kArgument, os.str());
  }
  // Minimum-norm solution through the SVD of R*; the right singular vectors
  // with nonzero singular value span ran R.
  const Eigen::JacobiSVD<ComplexMatrix> svd(
      rstar, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? rank_tol * sigma(0) : 0.0;
  ComplexMatrix x = ComplexMatrix::Zero(rstar.cols(), b.cols());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) <= cutoff || sigma(i) == 0.0) break;
    x += svd.matrixV().col(i) *
         ((svd.matrixU().col(i).adjoint() * b) / sigma(i));
  }

  RangeSolve out;
  out.x = std::move(x);
  out.residual = (rstar * out.x - b).norm();
  if (out.residual > 1e-8 * b.norm()) {
    std::ostringstream os;
    os << "range_restricted_solve: inconsistent system (residual "
       << out.residual << ", |B| = " << b.norm() << ")";
    throw Error(ErrorKind::kNumerical, os.str());
  }
  return out;
}

}  // namespace fejer::linalg
