#include "fejer/factor1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "fejer/errors.hpp"

namespace fejer::factor1d {

using linalg::ComplexMatrix;
using linalg::Index;
using poly::Complex;

namespace {

double hermitian_gap(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::symmetrized(a.matrix() - b.matrix()).norm();
}

// Lower block-triangular Toeplitz matrix with P_0 on the diagonal.
ComplexMatrix lower_toeplitz(const std::vector<ComplexMatrix>& p, Index blocks) {
  const Index r = p.front().rows();
  ComplexMatrix out = ComplexMatrix::Zero(blocks * r, blocks * r);
  for (Index row = 0; row < blocks; ++row) {
    for (Index col = 0; col <= row; ++col) {
      out.block(row * r, col * r, r, r) = p[static_cast<std::size_t>(row - col)];
    }
  }
  return out;
}

}  // namespace

// Eliminating the last block of a banded block Toeplitz section only touches
// the m blocks above it, so after j eliminations the section T_n is T_{n-j}
// with its trailing w = max(m, 1) blocks replaced by a corner matrix Z_j.
// Z_j does not depend on n, which makes every S_N(k) a cheap read-out of one
// shared recursion.
struct SchurSequence::Impl {
  MatrixLaurentPoly1 q;
  SchurOptions opts;
  Index r = 0;
  Index w = 0;
  double scale = 0.0;
  ComplexMatrix window;               // T_{w+1}
  std::vector<ComplexMatrix> corners; // Z_0, Z_1, ...

  Impl(const MatrixLaurentPoly1& poly, const SchurOptions& o)
      : q(poly), opts(o), r(poly.size()), w(std::max(poly.degree(), 1)),
        scale(std::max(poly.scale(), 1e-300)) {
    window = poly::block_toeplitz(q, w + 1).matrix();
    corners.push_back(poly::block_toeplitz(q, w).matrix());
  }

  void step() {
    ComplexMatrix m = window;
    m.bottomRightCorner(w * r, w * r) = corners.back();
    const Index keep = w * r;
    const auto pivot = linalg::eig_hermitian(
        HermitianMatrix::symmetrized(m.bottomRightCorner(r, r)));
    const double lo = pivot.values(0);
    const double hi = pivot.values(pivot.values.size() - 1);
    if (lo < -opts.clamp_tol * scale) {
      std::ostringstream os;
      os << "pivot eigenvalue " << lo;
      throw Error(ErrorKind::kNotPsd, os.str());
    }
    ComplexMatrix next;
    if (hi > 0.0 && lo > opts.rank_tol * hi) {
      const ComplexMatrix coupling = pivot.basis.adjoint() * m.bottomLeftCorner(r, keep);
      next = m.topLeftCorner(keep, keep) -
             coupling.adjoint() *
                 pivot.values.cwiseInverse().cast<Complex>().asDiagonal() * coupling;
    } else {
      next = linalg::schur_complement(HermitianMatrix::symmetrized(m), keep,
                                      opts.rank_tol, opts.clamp_tol)
                 .matrix();
    }
    corners.push_back(HermitianMatrix::symmetrized(next).matrix());
  }

  const ComplexMatrix& corner(std::size_t j) {
    while (corners.size() <= j) step();
    return corners[j];
  }

  HermitianMatrix complement(int k, int n) {
    if (k < 0 || n < k + 1) {
      std::ostringstream os;
      os << "truncated Schur complement needs N >= k + 1 (k = " << k
         << ", N = " << n << ")";
      throw Error(ErrorKind::kArgument, os.str());
    }
    const Index lead = static_cast<Index>(k + 1) * r;
    const Index base = std::max<Index>(k + 1, w);
    try {
      HermitianMatrix out;
      if (n < base) {
        const HermitianMatrix t = poly::block_toeplitz(q, n);
        out = n == k + 1 ? t
                         : linalg::schur_complement(t, lead, opts.rank_tol,
                                                    opts.clamp_tol);
      } else {
        const ComplexMatrix& z = corner(static_cast<std::size_t>(n - base));
        if (k + 1 >= w) {
          ComplexMatrix t = poly::block_toeplitz(q, k + 1).matrix();
          t.bottomRightCorner(w * r, w * r) = z;
          out = HermitianMatrix::symmetrized(t);
        } else {
          out = linalg::schur_complement(HermitianMatrix::symmetrized(z), lead,
                                         opts.rank_tol, opts.clamp_tol);
        }
      }
      const auto verdict = linalg::psd_check(out, opts.clamp_tol);
      if (!verdict.psd) {
        std::ostringstream os;
        os << "complement eigenvalue " << verdict.smallest;
        throw Error(ErrorKind::kNotPsd, os.str());
      }
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNotPsd) throw;
      std::ostringstream os;
      os << "Q not nonnegative on circle (witness at truncation N = " << n
         << ": " << e.what() << ")";
      throw Error(ErrorKind::kNotPsd, os.str());
    }
  }

  SchurResult limit(int k) {
    int n = opts.n0 > 0 ? opts.n0 : 4 * (q.degree() + 1);
    n = std::max(std::min(n, opts.n_max), k + 1);
    SchurResult res;
    res.k = k;
    res.value = complement(k, n);
    while (2 * n <= opts.n_max) {
      HermitianMatrix next = complement(k, 2 * n);
      res.gap = hermitian_gap(res.value, next);
      res.value = std::move(next);
      n *= 2;
      if (*res.gap <= opts.conv_tol * scale) {
        res.converged = true;
        break;
      }
    }
    res.n_used = n;
    return res;
  }
};

SchurSequence::SchurSequence(const MatrixLaurentPoly1& q, const SchurOptions& opts)
    : impl_(std::make_unique<Impl>(q, opts)) {}
SchurSequence::~SchurSequence() = default;
SchurSequence::SchurSequence(SchurSequence&&) noexcept = default;
SchurSequence& SchurSequence::operator=(SchurSequence&&) noexcept = default;

HermitianMatrix SchurSequence::complement(int k, int n) {
  return impl_->complement(k, n);
}

SchurResult SchurSequence::limit(int k) { return impl_->limit(k); }

HermitianMatrix truncated_schur(const MatrixLaurentPoly1& q, int k, int n,
                                const SchurOptions& opts) {
  return SchurSequence(q, opts).complement(k, n);
}

SchurResult schur_limit(const MatrixLaurentPoly1& q, int k,
                        const SchurOptions& opts) {
  const int n0 = opts.n0 > 0 ? opts.n0 : 4 * (q.degree() + 1);
  if (n0 < k + 1) {
    throw Error(ErrorKind::kArgument, "schur_limit: N0 must be at least k + 1");
  }
  SchurResult res = SchurSequence(q, opts).limit(k);
  if (!res.converged) {
    std::ostringstream os;
    os << "slow Schur convergence for k = " << k << ": N reached "
       << res.n_used << " (cap " << opts.n_max << ")";
    if (res.gap) os << ", last gap " << *res.gap;
    throw Error(ErrorKind::kConvergence, os.str());
  }
  return res;
}

// ---------------------------------------------------------------------------

FactorResult factor(const MatrixLaurentPoly1& q, const FactorOptions& opts) {
  const int m = q.degree();
  const Index r = q.size();

  const auto screen = poly::toeplitz_psd_check(q, m + 1, opts.schur.clamp_tol);
  if (!screen.psd) {
    std::ostringstream os;
    os << "not nonnegative: " << m + 1
       << "-block Toeplitz section has eigenvalue " << screen.smallest;
    throw Error(ErrorKind::kNotPsd, os.str());
  }

  FactorReport report;
  report.options = opts;
  report.converged = true;

  SchurSequence seq(q, opts.schur);
  std::vector<HermitianMatrix> complements;
  for (int k = 0; k <= m + 1; ++k) {
    SchurResult s = seq.limit(k);
    report.converged = report.converged && s.converged;
    report.n_used = std::max(report.n_used, s.n_used);
    if (s.gap) report.gap = std::max(report.gap.value_or(0.0), *s.gap);
    complements.push_back(std::move(s.value));
  }

  std::vector<ComplexMatrix> coeffs;
  coeffs.push_back(linalg::psd_sqrt(complements[0], opts.schur.clamp_tol).matrix());
  for (int k = 1; k <= m + 1; ++k) {
    const ComplexMatrix& s = complements[static_cast<std::size_t>(k)].matrix();
    const ComplexMatrix column = s.bottomLeftCorner(k * r, r);
    const ComplexMatrix lower = lower_toeplitz(coeffs, k);
    linalg::RangeSolve x;
    try {
      x = linalg::range_restricted_solve(lower.adjoint(), column,
                                         opts.schur.rank_tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNumerical) throw;
      std::ostringstream os;
      os << "numerical failure: S(" << k << ") structure violated ("
         << e.what() << ")";
      throw Error(ErrorKind::kNumerical, os.str());
    }
    const double rel = x.residual / std::max(column.norm(), 1e-300);
    report.extension_residual = std::max(report.extension_residual, rel);
    coeffs.push_back(x.x.bottomRows(r));
  }
  report.trailing_norm = linalg::spectral_norm(coeffs.back());
  coeffs.pop_back();

  MatrixAnalyticPoly1 p =
      normalize_gauge(MatrixAnalyticPoly1(std::move(coeffs)), opts.schur.rank_tol);

  report.scale = verify::sup_norm(q, opts.grid);
  report.residual_sup = verify::residual(q, p, opts.grid);
  report.residual_tol = opts.residual_tol * std::max(report.scale, 1e-300);
  // Degraded mode: an unsettled complement can be off by its last gap, so the
  // residual is only held to that.
  if (!report.converged && report.gap) {
    report.residual_tol = std::max(report.residual_tol, *report.gap);
  }
  report.residual_ok = report.residual_sup <= report.residual_tol;
  const verify::OuterCheck outer = verify::outer_check(p, opts.radius_tol);
  report.outer_verdict = outer.verdict;
  report.outer_witness = outer.witness;
  report.min_root_modulus = outer.min_root_modulus;
  return FactorResult{std::move(p), std::move(report)};
}

nlohmann::json FactorReport::to_json() const {
  nlohmann::json j;
  j["residual_sup"] = residual_sup;
  j["residual_tol"] = residual_tol;
  j["residual_ok"] = residual_ok;
  j["scale"] = scale;
  j["outer_verdict"] = verify::to_string(outer_verdict);
  j["outer_witness"] = outer_witness
                           ? nlohmann::json::array({outer_witness->real(),
                                                    outer_witness->imag()})
                           : nlohmann::json(nullptr);
  j["min_root_modulus"] =
      min_root_modulus ? nlohmann::json(*min_root_modulus) : nlohmann::json(nullptr);
  j["N_used"] = n_used;
  j["converged"] = converged;
  j["gap"] = gap ? nlohmann::json(*gap) : nlohmann::json(nullptr);
  j["trailing_norm"] = trailing_norm;
  j["extension_residual"] = extension_residual;
  j["tolerances"] = {
      {"residual_tol", options.residual_tol},
      {"rank_tol", options.schur.rank_tol},
      {"clamp_tol", options.schur.clamp_tol},
      {"conv_tol", options.schur.conv_tol},
      {"radius_tol", options.radius_tol},
      {"N0", options.schur.n0},
      {"N_max", options.schur.n_max},
      {"grid", options.grid.g1},
  };
  return j;
}

// ---------------------------------------------------------------------------

MatrixAnalyticPoly1 normalize_gauge(const MatrixAnalyticPoly1& p,
                                    double rank_tol) {
  if (p.rows() != p.cols()) {
    throw Error(ErrorKind::kArgument,
                "normalize_gauge: coefficients must be square");
  }
  const Index r = p.rows();
  const Eigen::JacobiSVD<ComplexMatrix> svd(
      p.coeff(0), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Index rank = 0;
  while (rank < r && sigma(rank) > rank_tol * sigma(0) && sigma(rank) > 0.0) ++rank;

  const ComplexMatrix& u = svd.matrixU();
  const ComplexMatrix& v = svd.matrixV();
  ComplexMatrix unitary = u.leftCols(rank) * v.leftCols(rank).adjoint();
  if (rank < r) {
    // Map ker P(0) onto (ran P(0))^perp by the unitary nearest the identity.
    const Index d = r - rank;
    const ComplexMatrix uk = u.rightCols(d);
    const ComplexMatrix vk = v.rightCols(d);
    const Eigen::JacobiSVD<ComplexMatrix> inner(
        uk.adjoint() * vk, Eigen::ComputeFullU | Eigen::ComputeFullV);
    unitary += uk * inner.matrixU() * inner.matrixV().adjoint() * vk.adjoint();
  }

  std::vector<ComplexMatrix> coeffs;
  for (const auto& c : p.coeffs()) coeffs.push_back(unitary.adjoint() * c);
  coeffs[0] = HermitianMatrix::symmetrized(coeffs[0]).matrix();
  return MatrixAnalyticPoly1(std::move(coeffs));
}

MatrixAnalyticPoly1 scalar_root_factor(const MatrixLaurentPoly1& q,
                                       double pairing_tol) {
  if (q.size() != 1) {
    throw Error(ErrorKind::kArgument, "scalar_root_factor: oracle is scalar-only");
  }
  const double scale = std::max(q.scale(), 1e-300);
  const verify::GridMin screen = verify::grid_min_eig(q, verify::GridSpec{10, {}});
  if (screen.value < -1e-9 * scale) {
    std::ostringstream os;
    os << "scalar_root_factor: q takes value " << screen.value
       << " at turn fraction " << screen.t1;
    throw Error(ErrorKind::kNotPsd, os.str());
  }

  const int m = q.degree();
  if (m == 0) {
    const double q0 = q.coeff(0)(0, 0).real();
    return MatrixAnalyticPoly1({ComplexMatrix::Constant(1, 1, std::sqrt(std::max(q0, 0.0)))});
  }

  // z^m q(z) has coefficients q_{-m}, ..., q_m.
  std::vector<Complex> shifted;
  for (int k = -m; k <= m; ++k) shifted.push_back(q.coeff(k)(0, 0));
  const std::vector<Complex> roots = verify::polynomial_roots(shifted);

  std::vector<Complex> selected;
  std::vector<Complex> boundary;
  for (const Complex z : roots) {
    const double mod = std::abs(z);
    if (mod > 1.0 + pairing_tol) {
      selected.push_back(z);
    } else if (mod >= 1.0 - pairing_tol) {
      boundary.push_back(z);
    }
  }
  // Boundary roots come in clusters of even multiplicity; keep half of each.
  std::vector<bool> used(boundary.size(), false);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (used[i]) continue;
    std::vector<Complex> cluster{boundary[i]};
    used[i] = true;
    for (std::size_t j = i + 1; j < boundary.size(); ++j) {
      if (!used[j] && std::abs(boundary[j] - boundary[i]) <= 10.0 * pairing_tol) {
        cluster.push_back(boundary[j]);
        used[j] = true;
      }
    }
    if (cluster.size() % 2 != 0) {
      std::ostringstream os;
      os << "not factorable: unpaired boundary root near (" << boundary[i].real()
         << ", " << boundary[i].imag() << ")";
      throw Error(ErrorKind::kNotPsd, os.str());
    }
    Complex mean = 0.0;
    for (const Complex z : cluster) mean += z;
    mean /= static_cast<double>(cluster.size());
    mean /= std::abs(mean);
    for (std::size_t c = 0; c < cluster.size() / 2; ++c) selected.push_back(mean);
  }
  if (selected.size() != static_cast<std::size_t>(m)) {
    std::ostringstream os;
    os << "not factorable: " << selected.size() << " roots outside the disk, expected "
       << m;
    throw Error(ErrorKind::kNotPsd, os.str());
  }

  // Monic product of (z - w_i), then scale so that sum |p_k|^2 = q_0.
  std::vector<Complex> monic{1.0};
  for (const Complex w : selected) {
    std::vector<Complex> next(monic.size() + 1, 0.0);
    for (std::size_t k = 0; k < monic.size(); ++k) {
      next[k + 1] += monic[k];
      next[k] -= w * monic[k];
    }
    monic = std::move(next);
  }
  double energy = 0.0;
  for (const Complex c : monic) energy += std::norm(c);
  const double gamma = std::sqrt(std::max(q.coeff(0)(0, 0).real(), 0.0) / energy);
  const Complex phase = std::conj(monic[0]) / std::abs(monic[0]);

  std::vector<ComplexMatrix> coeffs;
  for (const Complex c : monic) coeffs.push_back(ComplexMatrix::Constant(1, 1, gamma * phase * c));
  coeffs[0](0, 0) = std::abs(coeffs[0](0, 0));
  return MatrixAnalyticPoly1(std::move(coeffs));
}

}  // namespace fejer::factor1d
