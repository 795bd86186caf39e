#pragma once

#include <initializer_list>
#include <vector>

#include "fejer/linalg.hpp"
#include "fejer/poly.hpp"

namespace fejer::testing {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

inline ComplexMatrix scalar(Complex v) { return ComplexMatrix::Constant(1, 1, v); }

inline ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const Complex v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline HermitianMatrix herm(std::initializer_list<std::initializer_list<Complex>> rows) {
  return HermitianMatrix::from(mat(rows));
}

// Scalar Laurent polynomial from coefficients q_{-m} .. q_m.
inline poly::MatrixLaurentPoly1 laurent(std::initializer_list<double> c) {
  std::vector<ComplexMatrix> v;
  for (double x : c) v.push_back(scalar(x));
  return poly::MatrixLaurentPoly1(std::move(v));
}

// Scalar analytic polynomial from p_0 .. p_m.
inline poly::MatrixAnalyticPoly1 analytic(std::initializer_list<Complex> c) {
  std::vector<ComplexMatrix> v;
  for (Complex x : c) v.push_back(scalar(x));
  return poly::MatrixAnalyticPoly1(std::move(v));
}

// 5 + z1 + 1/z1 + z2 + 1/z2 style cross with the given center.
inline poly::MatrixLaurentPoly2 cross(double center) {
  std::vector<ComplexMatrix> c(9, scalar(0.0));
  c[4] = scalar(center);
  for (int idx : {1, 3, 5, 7}) c[static_cast<std::size_t>(idx)] = scalar(1.0);
  return poly::MatrixLaurentPoly2(1, 1, std::move(c));
}

inline double min_eig(const ComplexMatrix& m) {
  return linalg::eig_hermitian(HermitianMatrix::symmetrized(m)).values(0);
}

}  // namespace fejer::testing
