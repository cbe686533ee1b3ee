#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "contact3/errors.hpp"
#include "contact3/jet.hpp"
#include "contact3/smallmat.hpp"

using namespace contact3;

namespace {

Mat<double> make3(std::initializer_list<double> v) {
  Mat<double> m(3, 3);
  int i = 0;
  for (double x : v) m(i / 3, i % 3) = x, ++i;
  return m;
}

}  // namespace

TEST_CASE("LU solves a 3x3 system and reproduces the determinant") {
  const Mat<double> a = make3({2, 1, -1, -3, -1, 2, -2, 1, 2});
  LU<double> lu(a);
  CHECK(lu.det() == doctest::Approx(-1.0));  // Sarrus by hand
  const std::vector<double> rhs = {8, -11, -3};
  const std::vector<double> x = lu.solve(rhs);
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(3.0));
  CHECK(x[2] == doctest::Approx(-1.0));
  const Mat<double> inv = lu.inverse();
  const Mat<double> id = a * inv;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(id(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0));
}

TEST_CASE("LU rejects singular input") {
  Mat<double> a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 2;
  a(1, 1) = 4;
  CHECK_THROWS_AS((LU<double>(a)), SingularMetric);
}

TEST_CASE("jet LU inverse carries correct derivatives") {
  // A(x) = [[x, 1], [1, x]], inverse (1,1) entry x/(x^2-1)
  const double x0 = 1.7;
  const Jet x = Jet::variable(x0, 0, 1);
  Mat<Jet> a(2, 2);
  a(0, 0) = x;
  a(0, 1) = Jet::constant(1.0);
  a(1, 0) = Jet::constant(1.0);
  a(1, 1) = x;
  const Mat<Jet> inv = LU<Jet>(a).inverse();
  const double den = x0 * x0 - 1;
  CHECK(inv(0, 0).value() == doctest::Approx(x0 / den));
  CHECK(inv(0, 1).value() == doctest::Approx(-1.0 / den));
  // d/dx [x/(x^2-1)] = -(x^2+1)/(x^2-1)^2
  CHECK(inv(0, 0).d(0) == doctest::Approx(-(x0 * x0 + 1) / (den * den)));
  // d2/dx2 [x/(x^2-1)] = 2x(x^2+3)/(x^2-1)^3
  CHECK(inv(0, 0).d2(0, 0) ==
        doctest::Approx(2 * x0 * (x0 * x0 + 3) / (den * den * den)));
  const Jet det = LU<Jet>(a).det();
  CHECK(det.value() == doctest::Approx(den));
  CHECK(det.d(0) == doctest::Approx(2 * x0));
  CHECK(det.d2(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("cholesky factors an SPD matrix and rejects an indefinite one") {
  const Mat<double> a = make3({4, 2, -2, 2, 10, 2, -2, 2, 9});
  const Mat<double> l = cholesky(a);
  const Mat<double> llt = l * l.transposed();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(llt(i, j) == doctest::Approx(a(i, j)));
  CHECK(l(0, 1) == doctest::Approx(0.0));
  const Mat<double> bad = make3({1, 3, 0, 3, 1, 0, 0, 0, 1});
  CHECK_THROWS_AS(cholesky(bad), SingularMetric);
}

TEST_CASE("jacobi eigensolver on a matrix with known spectrum") {
  const Mat<double> a = make3({2, 1, 0, 1, 2, 0, 0, 0, 5});
  std::vector<double> w;
  Mat<double> v(3, 3);
  jacobi_eigen(a, w, v);
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == doctest::Approx(1.0));
  CHECK(sorted[1] == doctest::Approx(3.0));
  CHECK(sorted[2] == doctest::Approx(5.0));
  // columns are eigenvectors: A v_k = w_k v_k, and V is orthogonal
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) {
      double av = 0;
      for (int j = 0; j < 3; ++j) av += a(i, j) * v(j, k);
      CHECK(av == doctest::Approx(w[k] * v(i, k)).scale(1.0));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double dot = 0;
      for (int k = 0; k < 3; ++k) dot += v(k, i) * v(k, j);
      CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0));
    }
}

namespace {

// value-level SPD square root through the eigensolver, used as the reference
// for the jet version below
Mat<double> sqrt_spd_value(const Mat<double>& m) {
  std::vector<double> w;
  Mat<double> v(m.rows(), m.cols());
  jacobi_eigen(m, w, v);
  Mat<double> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      double s = 0;
      for (int k = 0; k < m.rows(); ++k)
        s += v(i, k) * std::sqrt(w[k]) * v(j, k);
      r(i, j) = s;
    }
  return r;
}

Mat<double> spd_at(double t) {
  Mat<double> m(2, 2);
  m(0, 0) = 1.0 + t;
  m(0, 1) = m(1, 0) = 0.5 * t;
  m(1, 1) = 2.0 - 0.3 * t * t;
  return m;
}

}  // namespace

TEST_CASE("spd square root: value, first and second derivative channels") {
  const double t0 = 0.4;
  Mat<Jet> m(2, 2);
  const Jet t = Jet::variable(t0, 0, 1);
  m(0, 0) = Jet::constant(1.0) + t;
  m(0, 1) = m(1, 0) = t * 0.5;
  m(1, 1) = Jet::constant(2.0) - t * t * 0.3;
  const Mat<Jet> r = sqrt_spd(m, 1);

  // r * r == m including all jet channels
  const Mat<Jet> rr = r * r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(rr(i, j).value() == doctest::Approx(m(i, j).value()).scale(1.0));
      CHECK(rr(i, j).d(0) == doctest::Approx(m(i, j).d(0)).scale(1.0));
      CHECK(rr(i, j).d2(0, 0) == doctest::Approx(m(i, j).d2(0, 0)).scale(1.0));
    }

  // derivative channels against finite differences of the value-level root
  const double h = 1e-5;
  const Mat<double> rp = sqrt_spd_value(spd_at(t0 + h));
  const Mat<double> rm = sqrt_spd_value(spd_at(t0 - h));
  const Mat<double> r0 = sqrt_spd_value(spd_at(t0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(r(i, j).value() == doctest::Approx(r0(i, j)).scale(1.0));
      CHECK(r(i, j).d(0) ==
            doctest::Approx((rp(i, j) - rm(i, j)) / (2 * h)).epsilon(1e-6).scale(1.0));
      CHECK(r(i, j).d2(0, 0) ==
            doctest::Approx((rp(i, j) - 2 * r0(i, j) + rm(i, j)) / (h * h))
                .epsilon(1e-4)
                .scale(1.0));
    }
}

TEST_CASE("spd square root rejects indefinite input") {
  Mat<Jet> m(2, 2);
  m(0, 0) = Jet::constant(1.0);
  m(0, 1) = m(1, 0) = Jet::constant(3.0);
  m(1, 1) = Jet::constant(1.0);
  CHECK_THROWS_AS(sqrt_spd(m, 0), SingularMetric);
}
