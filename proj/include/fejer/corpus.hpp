#pragma once

// Seeded random polynomials for round-trip runs and property tests.
//
// The generator is std::mt19937_64. Reals in [0, 1) take the top 53 bits of
// one draw; complex entries are uniform on the closed unit disk by rejection
// from the square. The stream is therefore fixed by the seed on every
// platform, unlike the std distributions.

#include <cstdint>
#include <random>
#include <vector>

#include "fejer/poly.hpp"

namespace fejer::corpus {

using poly::Complex;
using poly::ComplexMatrix;
using poly::Index;

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : engine_(seed) {}

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi)
  int integer(int lo, int hi);               // inclusive range
  Complex disk();
  ComplexMatrix disk_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
};

/// P_0 .. P_m with r x r entries uniform on the unit disk.
poly::MatrixAnalyticPoly1 random_analytic(Generator& gen, Index r, int m);

/// P^* P + ridge |Q_0| I, with |.| the spectral norm of the constant term.
poly::MatrixLaurentPoly1 ridged_gram(const poly::MatrixAnalyticPoly1& p,
                                     double ridge);

/// Scalar analytic polynomial c prod_i (z - w_i) with |w_i| drawn from
/// [rmin, rmax], uniform phases, and c = 1 / prod |w_i|, so p(0) has modulus 1.
poly::MatrixAnalyticPoly1 random_outer_scalar(Generator& gen, int m,
                                              double rmin, double rmax);

/// m1 x m2 analytic two-variable polynomial with r x r disk entries.
poly::MatrixAnalyticPoly2 random_analytic2(Generator& gen, Index r, int m1, int m2);

}  // namespace fejer::corpus
