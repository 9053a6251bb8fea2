#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "maxlat/dispersion.hpp"
#include "maxlat/symbol.hpp"
#include "support.hpp"

using namespace maxlat;
using namespace testing_support;

namespace {

std::vector<double> expected_spectrum(const Media& m, const Vec3& y) {
  const Vec3 z{y[0] * y[0], y[1] * y[1], y[2] * y[2]};
  const Taus t = taus(derive_params(m), z);
  std::vector<double> e{0.0, 0.0, std::sqrt(t.plus), -std::sqrt(t.plus), std::sqrt(t.minus),
                        -std::sqrt(t.minus)};
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_CASE("mtilde is the cross product") {
  CHECK(mtilde({0, 0, 0}).isZero());
  CHECK((mtilde({1, 0, 0}) * Eigen::Vector3d(0, 1, 0)).isApprox(Eigen::Vector3d(0, 0, 1)));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const Vec3 y{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const Eigen::Vector3d v(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    const Mat3 m = mtilde(y);
    CHECK((m + m.transpose()).isZero());
    CHECK((m * vec(y)).norm() < 1e-15);
    CHECK((m * v - vec(y).cross(v)).norm() < 1e-15);
  }
}

TEST_CASE("hd_symbol blocks") {
  CHECK(hd_symbol(m2(), {0, 0, 0}).isZero());
  std::mt19937_64 rng(2);
  const Media media = m2();
  for (int t = 0; t < 20; ++t) {
    const Vec3 x = random_point(rng);
    const Mat6 h = hd_symbol(media, x);
    const Mat3 mt = mtilde(sin_of(x));
    const Eigen::Vector3d e = vec(media.eps), u = vec(media.mu);
    CHECK(h.topLeftCorner<3, 3>().isZero());
    CHECK(h.bottomRightCorner<3, 3>().isZero());
    CHECK((h.topRightCorner<3, 3>() - e.asDiagonal() * mt).norm() < 1e-15);
    CHECK((h.bottomLeftCorner<3, 3>() + u.asDiagonal() * mt).norm() < 1e-15);
    const Mat6 h0 = h0_symbol(x);
    CHECK((h0 - h0.transpose()).norm() == 0.0);
    // kernel contains (y, 0) and (0, y)
    Eigen::Matrix<double, 6, 1> a = Eigen::Matrix<double, 6, 1>::Zero(), b = a;
    a.head<3>() = vec(sin_of(x));
    b.tail<3>() = vec(sin_of(x));
    CHECK((h * a).norm() < 1e-14);
    CHECK((h * b).norm() < 1e-14);
  }
}

TEST_CASE("isotropic spectrum at (pi/2, 0, 0)") {
  const auto ed = hd_eigen_decomp(iso(), {1, 0, 0});
  const std::vector<double> want{-1, -1, 0, 0, 1, 1};
  for (int i = 0; i < 6; ++i) CHECK(ed.eigenvalues[i] == doctest::Approx(want[i]).epsilon(1e-12));
  CHECK(ed.clusters.size() == 3);
  for (const auto& c : ed.clusters) CHECK(c.multiplicity == 2);
}

TEST_CASE("b_matrix") {
  CHECK(b_matrix(m3(), {0, 0, 0}).isZero());
  const Mat3 b = b_matrix(m3(), {M_PI / 2, M_PI / 2, 0});
  const auto ed = eigen_decomp(b);
  REQUIRE(ed.eigenvalues.size() == 3);
  CHECK(ed.eigenvalues[0] == doctest::Approx(0).epsilon(1e-12));
  CHECK(ed.eigenvalues[1] == doctest::Approx(2).epsilon(1e-12));
  CHECK(ed.eigenvalues[2] == doctest::Approx(3).epsilon(1e-12));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const Media media = random_media(rng, 0.5, 3);
    const Vec3 x = random_point(rng);
    const Mat3 bx = b_matrix(media, x);
    // y spans the kernel; also the numeric null vector is parallel to y
    CHECK((bx * vec(sin_of(x))).norm() <= 1e-12 * std::max(1.0, bx.norm()));
    const auto d = eigen_decomp(bx);
    const Eigen::MatrixXcd p0 = d.nearest(0.0).projector;
    const Eigen::Vector3cd col = p0 * vec(sin_of(x)).cast<Complex>();
    CHECK((col - vec(sin_of(x)).cast<Complex>()).norm() < 1e-8 * vec(sin_of(x)).norm());
    // eigenvalues against the dispersion module
    const Taus tau = taus(derive_params(media), z_of(x));
    std::vector<double> want{0.0, tau.minus, tau.plus};
    for (int i = 0; i < 3; ++i) CHECK(std::abs(d.eigenvalues[i] - want[i]) < 1e-9 * std::max(1.0, tau.plus));
    // resolution of identity, idempotence, commutation
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(3, 3);
    for (const auto& c : d.clusters) {
      sum += c.projector;
      CHECK((c.projector * c.projector - c.projector).norm() < 1e-10 * std::max(1.0, c.projector.norm()));
      CHECK((c.projector * bx.cast<Complex>() - bx.cast<Complex>() * c.projector).norm() < 1e-10 * std::max(1.0, bx.norm() * c.projector.norm()));
    }
    CHECK((sum - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-10 * std::max(1.0, bx.norm()));
  }
}

TEST_CASE("eigen_decomp basics") {
  const auto id = eigen_decomp(Eigen::MatrixXd::Identity(4, 4));
  REQUIRE(id.clusters.size() == 1);
  CHECK(id.clusters[0].multiplicity == 4);
  CHECK((id.clusters[0].projector - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);
  CHECK_FALSE(id.residual_flagged);

  const auto ed = hd_eigen_decomp(m3(), {1, 1, 0});
  const std::vector<double> want{-std::sqrt(3.0), -std::sqrt(2.0), 0, 0, std::sqrt(2.0), std::sqrt(3.0)};
  for (int i = 0; i < 6; ++i) CHECK(std::abs(ed.eigenvalues[i] - want[i]) < 1e-12);
}

TEST_CASE("h^D spectrum equals {0, 0, +-sqrt(tau+), +-sqrt(tau-)}") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 2000; ++t) {
    const Media media = (t % 3 == 0) ? random_b12(rng) : random_media(rng);
    const Vec3 y{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const auto ed = hd_eigen_decomp(media, y);
    const auto want = expected_spectrum(media, y);
    double scale = 1.0;
    for (double w : want) scale = std::max(scale, std::abs(w));
    for (int i = 0; i < 6; ++i) CHECK(std::abs(ed.eigenvalues[i] - want[i]) <= 1e-9 * scale);
  }
}

TEST_CASE("multiplicity rule at K0 = 0") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Media media = normalize_a0(random_b12(rng)).media;
    const double y2 = uniform(rng, 0.1, 1);
    const auto ed = hd_eigen_decomp(media, {0, y2, 0});
    const double v = std::sqrt(media.eps[2] * media.mu[0]) * y2;
    REQUIRE(ed.clusters.size() == 3);
    CHECK(ed.clusters[0].value == doctest::Approx(-v).epsilon(1e-10));
    CHECK(ed.clusters[2].value == doctest::Approx(v).epsilon(1e-10));
    for (const auto& c : ed.clusters) CHECK(c.multiplicity == 2);
    // generic point: nonzero eigenvalues simple
    const auto g = hd_eigen_decomp(media, {0.3, y2, 0.7});
    CHECK(g.clusters.size() == 5);
  }
}

TEST_CASE("det(h^D - lambda) factorizes") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 500; ++t) {
    const Media media = random_media(rng, 0.2, 5);
    const Vec3 x = random_point(rng);
    const double lambda = uniform(rng, -4, 4);
    const Taus tau = taus(derive_params(media), z_of(x));
    const double l2 = lambda * lambda;
    const double want = l2 * (tau.plus - l2) * (tau.minus - l2);
    const double got = (hd_symbol(media, x) - lambda * Mat6::Identity()).determinant();
    const double scale = std::max(1.0, l2 * (tau.plus + l2) * (tau.minus + l2));
    CHECK(std::abs(got - want) <= 1e-9 * scale);
  }
}

TEST_CASE("adjugate by cofactors") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(5, 5);
    const Eigen::MatrixXd adj = adjugate(m);
    CHECK((m * adj - m.determinant() * Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-12);
    const Mat3 m3x = Mat3::Random();
    CHECK((adjugate3(m3x) - m3x.determinant() * m3x.inverse()).norm() < 1e-10);
    CHECK((adjugate3(m3x) - Mat3(adjugate(Eigen::MatrixXd(m3x)))).norm() < 1e-14);
  }
}
