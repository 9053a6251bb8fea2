#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "maxlat/dispersion.hpp"
#include "maxlat/symbol.hpp"
#include "maxlat/trigpoly.hpp"
#include "support.hpp"

using namespace maxlat;
using namespace testing_support;

namespace {

GaussRational q(long num, long den = 1) { return GaussRational(Rational(num, den)); }

QPoly random_qpoly(std::mt19937_64& rng, int terms, int radius) {
  std::uniform_int_distribution<int> f(-radius, radius), c(-5, 5);
  QPoly::Map m;
  for (int k = 0; k < terms; ++k) {
    const Freq n{f(rng), f(rng), f(rng)};
    m[n] = GaussRational(Rational(c(rng), 1 + std::abs(c(rng))), Rational(c(rng)));
  }
  return QPoly(std::move(m));
}

CPoly random_cpoly(std::mt19937_64& rng, int terms, int radius) {
  std::uniform_int_distribution<int> f(-radius, radius);
  std::normal_distribution<double> g;
  CPoly::Map m;
  for (int k = 0; k < terms; ++k) m[Freq{f(rng), f(rng), f(rng)}] = Complex(g(rng), g(rng));
  return CPoly(std::move(m));
}

template <class R>
TrigMatrix<R> hd_poly(const Media& media) {
  TrigMatrix<R> h(6, 6);
  for (int j = 0; j < 3; ++j) {
    const TrigPoly<R> y = sin_poly<R>(j);
    const int a = (j + 1) % 3, b = (j + 2) % 3;
    h(b, 3 + a) = R(media.eps[b]) * y;
    h(a, 3 + b) = R(media.eps[a]) * (-y);
    h(3 + b, a) = R(media.mu[b]) * (-y);
    h(3 + a, b) = R(media.mu[a]) * y;
  }
  return h;
}

}  // namespace

TEST_CASE("products of sines") {
  const QPoly s1 = sin_poly<GaussRational>(0), s2 = sin_poly<GaussRational>(1);
  const QPoly z1 = s1 * s1;
  CHECK(z1.size() == 3);
  CHECK(z1.coeff({0, 0, 0}) == q(1, 2));
  CHECK(z1.coeff({2, 0, 0}) == q(-1, 4));
  CHECK(z1.coeff({-2, 0, 0}) == q(-1, 4));
  CHECK(z1 == sin2_poly<GaussRational>(0));
  CHECK(s1 * QPoly::constant(q(1)) == s1);

  const QPoly p = s1 * s2;
  CHECK(p.size() == 4);
  CHECK(p.coeff({1, 1, 0}) == q(-1, 4));
  CHECK(p.coeff({-1, -1, 0}) == q(-1, 4));
  CHECK(p.coeff({1, -1, 0}) == q(1, 4));
  CHECK(p.coeff({-1, 1, 0}) == q(1, 4));

  const Vec3 x{0.3, -1.2, 2.0};
  CHECK(to_complex(p).evaluate(x).real() == doctest::Approx(std::sin(0.3) * std::sin(-1.2)));
}

TEST_CASE("nmax") {
  const CPoly e1 = CPoly::monomial({1, 0, 0}, 1.0);
  CHECK(e1.nmax(Vec3{1, 0, 0}) == 1.0);
  CHECK(CPoly().nmax(Vec3{1, 0, 0}) == -INFINITY);
  CHECK_FALSE(QPoly().nmax_exact({Rational(1), Rational(0), Rational(0)}).has_value());
  const QPoly z1 = sin2_poly<GaussRational>(0);
  CHECK(*z1.nmax_exact({Rational(1), Rational(1, 2), Rational(1, 4)}) == 2);
  CHECK(z1.nmax(Direction{{1, 0.5, 0.25}}) == 2.0);

  CHECK(Direction{{1, 0.5, 0.25}}.in_g_star());
  CHECK_FALSE(Direction{{1, 1, 0}}.in_g_star());
  CHECK(Direction{{-1, 0.5, 0}}.in_g_star());
  CHECK(Direction{{-1, 0.5, 0}}.linf() == 1.0);
}

TEST_CASE("symmetrize") {
  const CPoly real = CPoly::monomial({1, 2, 0}, 3.0) + CPoly::constant(-1.0);
  CHECK(real.symmetrize() == real);
  const CPoly p = CPoly::monomial({1, 0, 0}, Complex(0, 1));
  CHECK(p.symmetrize().coeff({1, 0, 0}) == Complex(0, -1));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const CPoly r = random_cpoly(rng, 6, 3);
    const Vec3 xi{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    // direct max over the support as the oracle
    double best = -INFINITY;
    for (const auto& [n, c] : r.terms()) best = std::max(best, xi[0] * n[0] + xi[1] * n[1] + xi[2] * n[2]);
    CHECK(r.symmetrize().nmax(xi) == best);
    CHECK(r.nmax(xi) == best);
  }
}

TEST_CASE("nmax calculus on random exact polynomials") {
  std::mt19937_64 rng(4);
  const std::vector<RVec3> xis{{Rational(1), Rational(0), Rational(0)},
                               {Rational(1), Rational(1, 2), Rational(1, 4)},
                               {Rational(-1), Rational(1, 2), Rational(0)},
                               {Rational(2, 3), Rational(-1, 3), Rational(1, 5)}};
  for (int t = 0; t < 60; ++t) {
    const QPoly u = random_qpoly(rng, 5, 3), v = random_qpoly(rng, 5, 3);
    if (u.is_zero() || v.is_zero()) continue;
    const QPoly uv = u * v;
    for (const auto& xi : xis) {
      CHECK(*uv.nmax_exact(xi) == *u.nmax_exact(xi) + *v.nmax_exact(xi));
      CHECK(*(u * u.symmetrize()).nmax_exact(xi) == 2 * *u.nmax_exact(xi));
    }
    // matrix-valued: only the inequality survives
    QMatrix a(2, 2), b(2, 2);
    a(0, 0) = u;
    a(0, 1) = v;
    b(0, 0) = v;
    b(1, 0) = -u;
    const QMatrix ab = a * b;
    for (const auto& xi : xis) {
      const auto n = ab.nmax_exact(xi);
      if (n) CHECK(*n <= *a.nmax_exact(xi) + *b.nmax_exact(xi));
    }
  }
  // u v - v u cancels completely
  QMatrix a(1, 2), b(2, 1);
  a(0, 0) = sin_poly<GaussRational>(0);
  a(0, 1) = sin_poly<GaussRational>(1);
  b(0, 0) = sin_poly<GaussRational>(1);
  b(1, 0) = -sin_poly<GaussRational>(0);
  CHECK((a * b).is_zero());
}

TEST_CASE("ring laws, exact") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const QPoly a = random_qpoly(rng, 4, 2), b = random_qpoly(rng, 4, 2), c = random_qpoly(rng, 4, 2);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("float pruning keeps the canonical form") {
  CPoly p = CPoly::monomial({0, 0, 0}, 1.0) + CPoly::monomial({1, 0, 0}, 1e-17);
  CHECK(p.size() == 1);
  CPoly::Map m{{Freq{0, 0, 0}, Complex(1.0)}, {Freq{1, 0, 0}, Complex(1e-13)}};
  CHECK(CPoly(m).size() == 2);
  CHECK(CPoly(m, 1e-12).size() == 1);
}

TEST_CASE("determinant and adjugate") {
  const QMatrix id = QMatrix::identity(3);
  CHECK(adjugate(id) == id);
  CHECK(det(id) == QPoly::constant(q(1)));
  CHECK_THROWS_AS(det(QMatrix(2, 3)), ShapeError);
  CHECK_THROWS_AS(adjugate(QMatrix(3, 2)), ShapeError);
  CHECK_THROWS_AS(QMatrix(2, 3) * QMatrix(2, 3), ShapeError);

  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    CMatrix m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = random_cpoly(rng, 2, 1);
    const CMatrix adj = adjugate(m);
    const CPoly d = det(m);
    const CMatrix prod = m * adj;
    for (int k = 0; k < 5; ++k) {
      const Vec3 x = random_point(rng);
      const Complex dx = d.evaluate(x);
      Eigen::Matrix4cd mx, ax;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          mx(i, j) = m(i, j).evaluate(x);
          ax(i, j) = adj(i, j).evaluate(x);
          const Complex want = i == j ? dx : Complex(0);
          CHECK(std::abs(prod(i, j).evaluate(x) - want) <= 1e-9 * std::max(1.0, std::abs(dx)));
        }
      // pointwise determinant from Eigen as the oracle
      CHECK(std::abs(mx.determinant() - dx) <= 1e-9 * std::max(1.0, std::abs(dx)));
      CHECK((mx * ax - dx * Eigen::Matrix4cd::Identity()).norm() <= 1e-9 * std::max(1.0, std::abs(dx)));
    }
  }
}

TEST_CASE("det(H^D - lambda) factorizes through the dispersion relation") {
  std::mt19937_64 rng(7);
  for (const Media& media : {m2(), m3(), iso()}) {
    const CMatrix hd = hd_poly<Complex>(media);
    for (double lambda : {0.7, 1.0, 2.0}) {
      CMatrix shifted = hd;
      for (int i = 0; i < 6; ++i) shifted(i, i) -= CPoly::constant(lambda);
      const CPoly qpoly = det(shifted);
      const auto params = derive_params(media);
      for (int k = 0; k < 20; ++k) {
        const Vec3 x = random_point(rng);
        const Taus t = taus(params, z_of(x));
        const double l2 = lambda * lambda;
        const double want = l2 * (t.plus - l2) * (t.minus - l2);
        CHECK(std::abs(qpoly.evaluate(x) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST_CASE("adjugate of H^D vanishes at t = 0, exactly") {
  for (const Media& media : {m2(), m3()}) {
    const QMatrix hd = hd_poly<GaussRational>(media);
    CHECK(adjugate(hd).is_zero());
    CHECK(det(hd).is_zero());
  }
}

TEST_CASE("from_samples") {
  const CPoly s1 = sin_poly<Complex>(0);
  const CPoly got = from_samples(to_samples(s1, 8), 8);
  CHECK(got.size() == 2);
  CHECK(std::abs(got.coeff({1, 0, 0}) - Complex(0, -0.5)) < 1e-15);
  CHECK(std::abs(got.coeff({-1, 0, 0}) - Complex(0, 0.5)) < 1e-15);

  // direct sampling (no to_samples) of z1 z2 on 16^3
  std::vector<Complex> samples(16 * 16 * 16);
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b)
      for (int c = 0; c < 16; ++c) {
        const double x1 = 2 * M_PI * a / 16, x2 = 2 * M_PI * b / 16;
        samples[grid_index(16, a, b, c)] = std::pow(std::sin(x1), 2) * std::pow(std::sin(x2), 2);
      }
  const CPoly zz = from_samples(samples, 16, 2);
  const CPoly built = sin2_poly<Complex>(0) * sin2_poly<Complex>(1);
  CHECK(zz.size() == 9);
  CHECK(built.size() == 9);
  for (const auto& [n, c] : built.terms()) CHECK(std::abs(zz.coeff(n) - c) < 1e-14);

  // q(x; 1) for M2: samples of the pointwise determinant vs the symbolic determinant
  const Media media = m2();
  std::vector<Complex> qs(32 * 32 * 32);
  for (int a = 0; a < 32; ++a)
    for (int b = 0; b < 32; ++b)
      for (int c = 0; c < 32; ++c) {
        const Vec3 x{2 * M_PI * a / 32, 2 * M_PI * b / 32, 2 * M_PI * c / 32};
        qs[grid_index(32, a, b, c)] = (hd_symbol(media, x) - Mat6::Identity()).determinant();
      }
  CMatrix shifted = hd_poly<Complex>(media);
  for (int i = 0; i < 6; ++i) shifted(i, i) -= CPoly::constant(1.0);
  const CPoly symbolic = det(shifted);
  const CPoly sampled = from_samples(qs, 32, 4);
  CHECK(sampled.linf_radius() == 4);
  double worst = 0, scale = 0;
  for (const auto& [n, c] : symbolic.terms()) {
    scale = std::max(scale, std::abs(c));
    worst = std::max(worst, std::abs(sampled.coeff(n) - c));
  }
  for (const auto& [n, c] : sampled.terms()) worst = std::max(worst, std::abs(symbolic.coeff(n) - c));
  CHECK(worst <= 1e-12 * scale);

  CHECK_THROWS_AS(from_samples(qs, 32, 16), PreconditionError);
  CHECK_THROWS_AS(from_samples(std::vector<Complex>(27), 3), PreconditionError);
  CHECK_THROWS_AS(from_samples(std::vector<Complex>(10), 8), ShapeError);
}

TEST_CASE("JSON round trip") {
  std::mt19937_64 rng(8);
  const CPoly p = random_cpoly(rng, 7, 2);
  const auto j = to_json_value(p);
  CHECK(cpoly_from_json(j) == p);
  CMatrix m(2, 3);
  m(0, 1) = p;
  m(1, 2) = sin_poly<Complex>(2);
  CHECK(cmatrix_from_json(to_json_value(m), 2, 3) == m);
}
