#include <cmath>

#include <doctest.h>

#include "fejer/corpus.hpp"
#include "fejer/errors.hpp"
#include "fejer/factor1d.hpp"
#include "fejer/factor2d.hpp"
#include "helpers.hpp"

using namespace fejer;
using namespace fejer::testing;
using poly::MatrixAnalyticPoly1;
using poly::MatrixAnalyticPoly2;
using poly::MatrixLaurentPoly1;
using poly::MatrixLaurentPoly2;

namespace {

// z2 + 1/z2
MatrixLaurentPoly2 z2_cosine() {
  return MatrixLaurentPoly2(0, 1, {scalar(1), scalar(0), scalar(1)});
}

// Scalar polynomial in z1 only, q_{-m} .. q_m.
MatrixLaurentPoly2 z1_only(std::initializer_list<double> c) {
  std::vector<ComplexMatrix> v;
  for (double x : c) v.push_back(scalar(x));
  const int m1 = static_cast<int>(v.size() / 2);
  return MatrixLaurentPoly2(m1, 0, std::move(v));
}

double coeff_gap(const MatrixLaurentPoly2& a, const MatrixLaurentPoly2& b) {
  double d = 0.0;
  const int m1 = std::max(a.degree1(), b.degree1());
  const int m2 = std::max(a.degree2(), b.degree2());
  for (int j = -m1; j <= m1; ++j) {
    for (int k = -m2; k <= m2; ++k) d = std::max(d, linalg::max_abs(a.coeff(j, k) - b.coeff(j, k)));
  }
  return d;
}

const verify::GridSpec kGrid64{6, std::nullopt};

}  // namespace

TEST_SUITE("factor2d") {

TEST_CASE("cesaro weights frozen values") {
  const MatrixLaurentPoly2 flat = z1_only({1, 3, 1});
  CHECK(coeff_gap(factor2d::cesaro_smooth(flat, 0), flat) == 0.0);
  CHECK(coeff_gap(factor2d::inverse_cesaro(flat, 3), flat) == 0.0);

  const MatrixLaurentPoly2 s = factor2d::cesaro_smooth(z2_cosine(), 1);
  CHECK(s.coeff(0, 1)(0, 0).real() == doctest::Approx(0.5));
  CHECK(factor2d::inverse_cesaro(z2_cosine(), 1).coeff(0, -1)(0, 0).real() ==
        doctest::Approx(2.0));

  const MatrixLaurentPoly2 c = factor2d::cesaro_smooth(cross(5.0), 4);
  CHECK(c.coeff(0, 0)(0, 0).real() == doctest::Approx(5.0));
  CHECK(c.coeff(1, 0)(0, 0).real() == doctest::Approx(1.0));
  CHECK(c.coeff(0, 1)(0, 0).real() == doctest::Approx(0.8));

  corpus::Generator gen(41);
  const auto q = poly::adjoint_product_list2({corpus::random_analytic2(gen, 2, 2, 2)});
  CHECK(coeff_gap(factor2d::cesaro_smooth(factor2d::inverse_cesaro(q, 3), 3), q) <= 1e-14 * q.scale());
  CHECK_THROWS_AS(factor2d::cesaro_smooth(q, 1), Error);
}

TEST_CASE("remainder bound") {
  CHECK(factor2d::remainder_bound(z1_only({1, 3, 1}), 0) == 0.0);
  for (int n : {1, 2, 5, 40}) {
    CHECK(factor2d::remainder_bound(cross(5.0), n) == doctest::Approx(2.0 / n));
  }
  std::vector<ComplexMatrix> doubled;
  const MatrixLaurentPoly2 q = cross(5.0);
  for (int j = -1; j <= 1; ++j) {
    for (int k = -1; k <= 1; ++k) doubled.push_back(3.0 * q.coeff(j, k));
  }
  CHECK(factor2d::remainder_bound(MatrixLaurentPoly2(1, 1, doubled), 4) ==
        doctest::Approx(3.0 * factor2d::remainder_bound(q, 4)));
}

TEST_CASE("remainder bound dominates the actual perturbation") {
  corpus::Generator gen(42);
  for (int trial = 0; trial < 5; ++trial) {
    const auto q = poly::adjoint_product_list2({corpus::random_analytic2(gen, 1, 1, 2)});
    for (int n : {2, 4, 9}) {
      const auto diff_sup = verify::sup_norm(
          MatrixLaurentPoly2(q.degree1(), q.degree2(), [&] {
            std::vector<ComplexMatrix> c;
            const auto inv = factor2d::inverse_cesaro(q, n);
            for (int j = -q.degree1(); j <= q.degree1(); ++j) {
              for (int k = -q.degree2(); k <= q.degree2(); ++k) c.push_back(inv.coeff(j, k) - q.coeff(j, k));
            }
            return c;
          }()),
          verify::GridSpec{7, std::nullopt});
      CHECK(diff_sup <= factor2d::remainder_bound(q, n) + 1e-9 * q.scale());
    }
  }
}

TEST_CASE("truncation choice") {
  const auto plan = factor2d::choose_truncation(cross(5.0), 1.0, 1.0 / 3.0);
  CHECK(plan.n == 4);
  CHECK(plan.bound_s == doctest::Approx(0.5));
  CHECK(factor2d::choose_truncation(z1_only({1, 3, 1}), 1.0, 0.5).n == 0);
  int prev = 1 << 30;
  for (double delta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const int n = factor2d::choose_truncation(cross(5.0), delta, 0.5).n;
    CHECK(n <= prev);
    prev = n;
  }
  CHECK_THROWS_AS(factor2d::choose_truncation(cross(5.0), 0.0, 0.5), Error);
  CHECK_THROWS_AS(factor2d::choose_truncation(cross(5.0), 1.0, 1.0), Error);
  try {
    factor2d::choose_truncation(cross(5.0), 1e-9, 0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("degenerate delta") != std::string::npos);
  }
}

TEST_CASE("lift frozen values") {
  const auto c = factor2d::lift_to_block(MatrixLaurentPoly2(0, 0, {scalar(3)}), 1);
  CHECK(linalg::max_abs(c.coeff(0) - 1.5 * ComplexMatrix::Identity(2, 2)) < 1e-15);

  const auto s = factor2d::lift_to_block(z2_cosine(), 1);
  CHECK(linalg::max_abs(s.coeff(0) - mat({{0, 0.5}, {0.5, 0}})) < 1e-15);

  const auto w = factor2d::lift_to_block(z1_only({1, 0, 1}), 0);
  CHECK(w.degree() == 1);
  CHECK(w.coeff(1)(0, 0) == Complex(1.0));
  CHECK(w.coeff(-1)(0, 0) == Complex(1.0));
  CHECK(w.coeff(0)(0, 0) == Complex(0.0));
}

TEST_CASE("lift is exactly self-adjoint") {
  corpus::Generator gen(45);
  const auto q = poly::adjoint_product_list2({corpus::random_analytic2(gen, 2, 2, 2)});
  const auto psi = factor2d::lift_to_block(q, 3);
  for (int j = 0; j <= psi.degree(); ++j) {
    CHECK(linalg::max_abs(psi.coeff(-j) - psi.coeff(j).adjoint()) == 0.0);
  }
}

TEST_CASE("unlift orientation") {
  const Complex a = 1, b = 2, c = 3, d = 4;
  const auto fs = factor2d::unlift_factor(MatrixAnalyticPoly1({mat({{a, b}, {c, d}})}), 1, 1);
  REQUIRE(fs.size() == 2);
  // F0 = a z2 + b, F1 = c z2 + d
  CHECK(fs[0].coeff(0, 0)(0, 0) == b);
  CHECK(fs[0].coeff(0, 1)(0, 0) == a);
  CHECK(fs[1].coeff(0, 0)(0, 0) == d);
  CHECK(fs[1].coeff(0, 1)(0, 0) == c);

  const auto single = factor2d::unlift_factor(analytic({2, 1}), 1, 0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].degree2() == 0);
  CHECK(single[0].coeff(1, 0)(0, 0) == Complex(1.0));
  CHECK_THROWS_AS(factor2d::unlift_factor(analytic({2, 1}), 1, 1), Error);
}

TEST_CASE("unlift reproduces the smoothed polynomial for any lift factor") {
  // If Phi^* Phi equals the lift of Q, the regrouped squares give Q^(N).
  corpus::Generator gen(43);
  for (int trial = 0; trial < 6; ++trial) {
    const int r = gen.integer(1, 2);
    const int n = gen.integer(0, 3);
    const MatrixAnalyticPoly1 phi = corpus::random_analytic(gen, r * (n + 1), gen.integer(0, 2));
    const MatrixLaurentPoly1 psi = poly::adjoint_product(phi);
    const auto fs = factor2d::unlift_factor(phi, r, n);
    const MatrixLaurentPoly2 sum = poly::adjoint_product_list2(fs);
    // Lift of sum, scaled by N+1, must share Psi's block-diagonal sums.
    for (int j = -phi.degree(); j <= phi.degree(); ++j) {
      for (int k = -n; k <= n; ++k) {
        ComplexMatrix acc = ComplexMatrix::Zero(r, r);
        for (int p = 0; p <= n; ++p) {
          const int q = p - k;
          if (q < 0 || q > n) continue;
          acc += psi.coeff(j).block(p * r, q * r, r, r);
        }
        CHECK(linalg::max_abs(acc - sum.coeff(j, k)) <= 1e-12 * psi.scale());
      }
    }
  }
}

TEST_CASE("factor at a fixed truncation") {
  const auto four = factor2d::factor_cesaro(MatrixLaurentPoly2(0, 0, {scalar(4)}), 0);
  REQUIRE(four.factors.size() == 1);
  CHECK(std::abs(four.factors[0].coeff(0, 0)(0, 0) - 2.0) < 1e-12);

  const auto flat = factor2d::factor_cesaro(z1_only({1, 2, 1}), 0);
  REQUIRE(flat.factors.size() == 1);
  // Boundary root at z1 = -1: the Schur sequence is slow, accuracy is ~1/N.
  CHECK(std::abs(flat.factors[0].coeff(0, 0)(0, 0) - 1.0) < 1e-3);
  CHECK(std::abs(flat.factors[0].coeff(1, 0)(0, 0) - 1.0) < 1e-3);

  const MatrixLaurentPoly2 product(1, 1, {scalar(1), scalar(2), scalar(1), scalar(2), scalar(4),
                                          scalar(2), scalar(1), scalar(2), scalar(1)});
  // (2 + z1 + 1/z1)(2 + z2 + 1/z2) has zeros on the torus; raise it slightly.
  std::vector<ComplexMatrix> lifted;
  for (int j = -1; j <= 1; ++j) {
    for (int k = -1; k <= 1; ++k) lifted.push_back(product.coeff(j, k) + (j == 0 && k == 0 ? scalar(0.5) : scalar(0)));
  }
  const MatrixLaurentPoly2 q(1, 1, lifted);
  factor2d::Factor2dOptions opts;
  opts.grid = kGrid64;
  const auto res = factor2d::factor_cesaro(q, 2, opts);
  CHECK(res.report.residual_sup <= 1e-6 * res.report.scale);
  CHECK(res.factors.size() == 3);
  CHECK(res.report.max_degree1 <= 1);
  CHECK(verify::residual(factor2d::cesaro_smooth(q, 2), res.factors, kGrid64) <=
        1e-6 * verify::sup_norm(q, kGrid64));
}

TEST_CASE("factor at a fixed truncation on random sums of squares") {
  corpus::Generator gen(44);
  factor2d::Factor2dOptions opts;
  opts.grid = kGrid64;
  for (int trial = 0; trial < 4; ++trial) {
    const int r = gen.integer(1, 2);
    const auto q = poly::adjoint_product_list2(
        {corpus::random_analytic2(gen, r, 2, 1), corpus::random_analytic2(gen, r, 2, 1)});
    for (int n : {1, 3}) {
      const auto res = factor2d::factor_cesaro(q, n, opts);
      CHECK(res.report.residual_ok);
      CHECK(static_cast<int>(res.factors.size()) <= n + 1);
      CHECK(res.report.max_degree1 <= 2);
    }
  }
}

TEST_CASE("strict factorization") {
  const auto two = factor2d::factor_strict(MatrixLaurentPoly2(0, 0, {scalar(2)}));
  REQUIRE(two.plan);
  CHECK(two.plan->n == 0);
  REQUIRE(two.factors.size() == 1);
  CHECK(std::abs(two.factors[0].coeff(0, 0)(0, 0) - std::sqrt(2.0)) < 1e-12);

  // The default grid feeds the delta estimate; the residual is re-checked on 64 x 64.
  const auto res = factor2d::factor_strict(cross(5.0));
  CHECK(res.plan->n == 4);
  CHECK(res.factors.size() <= 5);
  CHECK(res.report.max_degree1 <= 1);
  CHECK(verify::residual(cross(5.0), res.factors, kGrid64) <= 1e-6 * 9.0);

  try {
    factor2d::factor_strict(cross(4.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotStrictlyPositive);
    CHECK(std::string(e.what()).find("delta_est") != std::string::npos);
  }
}

TEST_CASE("strict factorization of a z1-only input matches the 1D factor") {
  const MatrixLaurentPoly2 q = z1_only({2, 5, 2});
  const auto res = factor2d::factor_strict(q);
  CHECK(res.plan->n == 0);
  REQUIRE(res.factors.size() == 1);
  CHECK(std::abs(res.factors[0].coeff(0, 0)(0, 0) - 2.0) < 1e-8);
  CHECK(std::abs(res.factors[0].coeff(1, 0)(0, 0) - 1.0) < 1e-8);
}

TEST_CASE("delta estimate") {
  const double d = factor2d::estimate_delta(cross(5.0), {9, std::nullopt});
  CHECK(d < 1.0);
  CHECK(d > 0.8);
  CHECK(factor2d::estimate_delta(cross(4.0), {9, std::nullopt}) < 0.0);
}

}  // TEST_SUITE
