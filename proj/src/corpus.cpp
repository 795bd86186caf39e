#include "fejer/corpus.hpp"

#include <cmath>
#include <numbers>

#include "fejer/errors.hpp"
#include "fejer/linalg.hpp"

namespace fejer::corpus {

double Generator::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Generator::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

int Generator::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(static_cast<std::uint64_t>(uniform() * static_cast<double>(span)) % span);
}

Complex Generator::disk() {
  for (;;) {
    const double x = uniform(-1.0, 1.0);
    const double y = uniform(-1.0, 1.0);
    if (x * x + y * y <= 1.0) return {x, y};
  }
}

ComplexMatrix Generator::disk_matrix(Index rows, Index cols) {
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = disk();
  }
  return m;
}

poly::MatrixAnalyticPoly1 random_analytic(Generator& gen, Index r, int m) {
  if (r < 1 || m < 0) throw Error(ErrorKind::kArgument, "random_analytic: bad shape");
  std::vector<ComplexMatrix> coeffs;
  for (int k = 0; k <= m; ++k) coeffs.push_back(gen.disk_matrix(r, r));
  return poly::MatrixAnalyticPoly1(std::move(coeffs));
}

poly::MatrixLaurentPoly1 ridged_gram(const poly::MatrixAnalyticPoly1& p, double ridge) {
  const poly::MatrixLaurentPoly1 g = poly::adjoint_product(p);
  std::vector<ComplexMatrix> coeffs;
  for (int k = -g.degree(); k <= g.degree(); ++k) coeffs.push_back(g.coeff(k));
  ComplexMatrix& q0 = coeffs[static_cast<std::size_t>(g.degree())];
  const double shift = ridge * linalg::spectral_norm(q0);
  q0 += shift * ComplexMatrix::Identity(q0.rows(), q0.cols());
  return poly::MatrixLaurentPoly1(std::move(coeffs));
}

poly::MatrixAnalyticPoly1 random_outer_scalar(Generator& gen, int m, double rmin,
                                              double rmax) {
  std::vector<Complex> c{1.0};  // ascending
  double scale = 1.0;
  for (int i = 0; i < m; ++i) {
    const double rad = gen.uniform(rmin, rmax);
    const Complex w = std::polar(rad, 2.0 * std::numbers::pi * gen.uniform());
    scale *= rad;
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= w * c[k];
    }
    c = std::move(next);
  }
  std::vector<ComplexMatrix> coeffs;
  for (const Complex v : c) coeffs.push_back(ComplexMatrix::Constant(1, 1, v / scale));
  return poly::MatrixAnalyticPoly1(std::move(coeffs));
}

poly::MatrixAnalyticPoly2 random_analytic2(Generator& gen, Index r, int m1, int m2) {
  std::vector<ComplexMatrix> coeffs;
  for (int j = 0; j <= m1; ++j) {
    for (int k = 0; k <= m2; ++k) coeffs.push_back(gen.disk_matrix(r, r));
  }
  return poly::MatrixAnalyticPoly2(m1, m2, std::move(coeffs));
}

}  // namespace fejer::corpus
