#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "maxlat/errors.hpp"
#include "maxlat/lattice.hpp"
#include "maxlat/symbol.hpp"
#include "support.hpp"

using namespace maxlat;
using namespace testing_support;

namespace {

const Complex I(0.0, 1.0);

LatticeField random_field(std::mt19937_64& rng, int radius, double density = 0.6) {
  LatticeField f;
  for (const Site& n : Box::cube(radius).sites()) {
    if (uniform(rng, 0, 1) > density) continue;
    Vec6c v;
    for (int k = 0; k < 6; ++k) v[k] = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    f.set(n, v);
  }
  return f;
}

// u(x) = sum_n u_hat(n) e^{-i n.x}, summed directly.
Vec6c eval_direct(const LatticeField& f, const Vec3& x) {
  Vec6c out = Vec6c::Zero();
  for (const auto& [n, v] : f.values())
    out += std::exp(-I * (n[0] * x[0] + n[1] * x[1] + n[2] * x[2])) * v;
  return out;
}

// Inverse of eval_direct on an N^3 grid by a plain DFT.
LatticeField invert_grid(const std::vector<Vec6c>& samples, int n_grid, int radius) {
  LatticeField out;
  const double h = 2 * M_PI / n_grid;
  for (const Site& n : Box::cube(radius).sites()) {
    Vec6c acc = Vec6c::Zero();
    std::size_t idx = 0;
    for (int a = 0; a < n_grid; ++a)
      for (int b = 0; b < n_grid; ++b)
        for (int c = 0; c < n_grid; ++c, ++idx)
          acc += std::exp(I * h * double(n[0] * a + n[1] * b + n[2] * c)) * samples[idx];
    acc /= double(n_grid) * n_grid * n_grid;
    for (int k = 0; k < 6; ++k)
      if (std::abs(acc[k]) < 1e-12) acc[k] = 0;
    out.set(n, acc);
  }
  return out;
}

double max_diff(const LatticeField& a, const LatticeField& b) {
  const LatticeField d = a - b;
  return d.is_zero() ? 0.0 : d.linf_coeff();
}

Vec6 diag_of(const Media& m) {
  Vec6 d;
  d << m.eps[0], m.eps[1], m.eps[2], m.mu[0], m.mu[1], m.mu[2];
  return d;
}

}  // namespace

TEST_CASE("apply_hd on a unit H3 at the origin, isotropic media") {
  const LatticeField out = apply_hd(LatticeField::delta({0, 0, 0}, 5), iso());
  auto e_block = [&](const Site& n) { return out.at(n).head<3>(); };
  CHECK(std::abs(e_block({0, -1, 0})[0] - (-I / 2.0)) < 1e-15);
  CHECK(std::abs(e_block({0, 1, 0})[0] - (I / 2.0)) < 1e-15);
  CHECK(std::abs(e_block({-1, 0, 0})[1] - (I / 2.0)) < 1e-15);
  CHECK(std::abs(e_block({1, 0, 0})[1] - (-I / 2.0)) < 1e-15);
  CHECK(out.size() == 4);
  for (const auto& [n, v] : out.values()) CHECK(v.tail<3>().norm() == 0.0);

  // Same thing through a 16^3 grid: symbol times samples, then inversion.
  const int ng = 16;
  std::vector<Vec6c> samples;
  const double h = 2 * M_PI / ng;
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b)
      for (int c = 0; c < ng; ++c) {
        const Vec3 x{a * h, b * h, c * h};
        samples.push_back(hd_symbol(iso(), x).cast<Complex>() *
                          eval_direct(LatticeField::delta({0, 0, 0}, 5), x));
      }
  CHECK(max_diff(out, invert_grid(samples, ng, 2)) < 1e-12);
}

TEST_CASE("apply_hd of zero is zero") {
  CHECK(apply_hd(LatticeField{}, m3()).is_zero());
  CHECK(apply_h0(LatticeField{}).is_zero());
}

TEST_CASE("stencil agrees with the symbol on random band-limited fields") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Media m = random_media(rng);
    const LatticeField f = random_field(rng, 2, 0.3);
    const LatticeField out = apply_hd(f, m);
    for (int s = 0; s < 5; ++s) {
      const Vec3 x = random_point(rng);
      const Vec6c lhs = eval_direct(out, x);
      const Vec6c rhs = hd_symbol(m, x).cast<Complex>() * eval_direct(f, x);
      CHECK((lhs - rhs).norm() <= 1e-9 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("support of apply_hd grows by at most one per axis") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const LatticeField f = random_field(rng, 3, 0.2);
    if (f.is_zero()) continue;
    const Box in = *f.bounding_box();
    const LatticeField out = apply_hd(f, random_media(rng));
    if (out.is_zero()) continue;
    const Box o = *out.bounding_box();
    for (int j = 0; j < 3; ++j) {
      CHECK(o.lo[j] >= in.lo[j] - 1);
      CHECK(o.hi[j] <= in.hi[j] + 1);
    }
  }
}

TEST_CASE("D^-1 H^D is symmetric for perturbed media") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    PerturbedMedia pm(random_media(rng));
    for (int s = 0; s < 3; ++s) {
      const Site n{int(rng() % 5) - 2, int(rng() % 5) - 2, int(rng() % 5) - 2};
      const Media loc = random_media(rng);
      pm.local[n] = LocalMedia{loc.eps, loc.mu};
    }
    const LatticeField u = random_field(rng, 2, 0.5);
    const LatticeField v = random_field(rng, 2, 0.5);
    auto dinv = [&](const LatticeField& f) {
      LatticeField out;
      for (const auto& [n, x] : f.values())
        out.set(n, x.cwiseQuotient(pm.d(n).cast<Complex>()));
      return out;
    };
    const Complex lhs = inner(dinv(apply_hd(u, pm)), v);
    const Complex rhs = inner(dinv(u), apply_hd(v, pm));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("perturbed apply_hd is D_p times H0 pointwise") {
  std::mt19937_64 rng(14);
  PerturbedMedia pm(m3());
  pm.local[{0, 0, 0}] = LocalMedia{{2, 3, 4}, {5, 6, 7}};
  pm.local[{1, 0, -1}] = LocalMedia{{0.5, 0.5, 0.5}, {1, 1, 1}};
  const LatticeField f = random_field(rng, 2);
  const LatticeField h0 = apply_h0(f);
  const LatticeField out = apply_hd(f, pm);
  for (const auto& [n, v] : h0.values()) {
    const Vec6c expect = pm.d(n).cast<Complex>().cwiseProduct(v);
    CHECK((out.at(n) - expect).norm() <= 1e-14 * std::max(1.0, expect.norm()));
  }
}

TEST_CASE("residual") {
  SUBCASE("minus lambda times the field at the origin") {
    const LatticeField r =
        residual(LatticeField::delta({0, 0, 0}, 0), PerturbedMedia(iso()), 1.0);
    CHECK(r.at({0, 0, 0})[0] == Complex(-1.0, 0.0));
  }
  SUBCASE("zero perturbation matches the background operator bitwise") {
    std::mt19937_64 rng(15);
    const LatticeField f = random_field(rng, 2);
    const double lambda = 1.7;
    LatticeField expect = apply_hd(f, m2());
    expect -= Complex(lambda) * f;
    CHECK(residual(f, PerturbedMedia(m2()), lambda) == expect);
  }
  SUBCASE("potential enters diagonally") {
    PerturbedMedia pm(iso());
    Vec6 pot = Vec6::Zero();
    pot[2] = 3.0;
    pm.potential[{0, 0, 0}] = pot;
    const LatticeField r = residual(LatticeField::delta({0, 0, 0}, 2), pm, 1.0);
    CHECK(std::abs(r.at({0, 0, 0})[2] - 2.0) < 1e-15);
  }
}

TEST_CASE("kernel multiplier") {
  CHECK(kernel_multiplier(PerturbedMedia(m3())).empty());
  CHECK(kernel_multiplier_exact(PerturbedMedia(m3())).empty());

  PerturbedMedia pm(iso());
  pm.local[{0, 0, 0}] = LocalMedia{{2, 2, 2}, {1, 1, 1}};
  const auto k = kernel_multiplier_exact(pm);
  REQUIRE(k.size() == 1);
  for (int i = 0; i < 3; ++i) CHECK(k.at({0, 0, 0})[i] == Rational(-1, 2));
  for (int i = 3; i < 6; ++i) CHECK(k.at({0, 0, 0})[i] == 0);

  std::mt19937_64 rng(16);
  PerturbedMedia rp(random_media(rng));
  for (int s = 0; s < 10; ++s) {
    const Media loc = random_media(rng);
    rp.local[{s, -s, 2 * s}] = LocalMedia{loc.eps, loc.mu};
  }
  const auto kx = kernel_multiplier_exact(rp);
  CHECK(kx.size() == rp.local.size());
  const RVec3 be = to_rational(rp.background.eps);
  const RVec3 bm = to_rational(rp.background.mu);
  for (const auto& [n, l] : rp.local) {
    const RVec3 e = to_rational(l.eps);
    const RVec3 m = to_rational(l.mu);
    for (int i = 0; i < 3; ++i) {
      CHECK((kx.at(n)[i] + 1) * e[i] == be[i]);
      CHECK((kx.at(n)[i + 3] + 1) * m[i] == bm[i]);
    }
  }
  const auto kd = kernel_multiplier(rp);
  for (const auto& [n, v] : kd)
    for (int i = 0; i < 6; ++i) CHECK(std::abs(v[i] - kx.at(n)[i].get_d()) < 1e-14);
}

TEST_CASE("Besov and shell profiles") {
  const LatticeField d = LatticeField::delta({0, 0, 0}, 3);
  for (const auto& [r, v] : besov_profile_l1(d, {1, 2, 5, 40})) CHECK(v == doctest::Approx(1.0 / r));
  CHECK_THROWS_AS(besov_profile_l1(d, {0}), PreconditionError);

  // l1 versus l-infinity: (1,1,0) has l1 norm 2 and sup norm 1.
  const LatticeField e = LatticeField::delta({1, 1, 0}, 0, 2.0);
  const auto b = besov_profile_l1(e, {2, 3});
  CHECK(b[0].second == 0.0);
  CHECK(b[1].second == doctest::Approx(4.0 / 3));
  const auto s = shell_profile_linf(e, 3);
  CHECK(s == std::vector<double>{0.0, 2.0, 0.0, 0.0});

  std::mt19937_64 rng(17);
  const LatticeField f = random_field(rng, 3);
  const auto p = besov_profile_l1(f, {10, 20, 40, 80});
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i].second < p[i - 1].second);
}

TEST_CASE("trig conversion and dense views") {
  std::mt19937_64 rng(18);
  const LatticeField f = random_field(rng, 2);
  CHECK(max_diff(from_trig(to_trig(f)), f) == 0.0);

  const Box box = Box::cube(2);
  CHECK(from_dense(to_dense(f, box), box) == f);
  CHECK(to_dense(f, box).size() == long(6 * box.count()));

  const auto samples = sample_field(f, 4);
  const double h = 2 * M_PI / 4;
  std::size_t idx = 0;
  for (int a = 0; a < 4; ++a)
    for (int bb = 0; bb < 4; ++bb)
      for (int c = 0; c < 4; ++c, ++idx)
        CHECK((samples[idx] - eval_direct(f, {a * h, bb * h, c * h})).norm() < 1e-12);
}

TEST_CASE("JSON round trips") {
  std::mt19937_64 rng(19);
  const LatticeField f = random_field(rng, 2);
  CHECK(field_from_json_lines(to_json_lines(f)) == f);

  PerturbedMedia pm(m3());
  pm.local[{1, 2, 3}] = LocalMedia{{0.5, 2, 3}, {1, 1.25, 8}};
  pm.local[{-1, 0, 0}] = LocalMedia{{1, 1, 1}, {2, 2, 2}};
  const PerturbedMedia back = perturbation_from_json(perturbation_to_json(pm), m3());
  CHECK(back.local == pm.local);
  CHECK(back.background == pm.background);

  nlohmann::json bad = {{"sites", {{{"n", {0, 0, 0}}, {"eps", {1, -1, 1}}, {"mu", {1, 1, 1}}}}}};
  CHECK_THROWS_AS(perturbation_from_json(bad, m3()), InvalidMedia);
}

TEST_CASE("box helpers") {
  const Box b = Box::cube(2);
  CHECK(b.count() == 125);
  CHECK(b.sites().size() == 125);
  CHECK(b.shrunk(1).count() == 27);
  CHECK(b.shrunk(3).empty());
  CHECK(b.contains({2, -2, 0}));
  CHECK_FALSE(b.contains({3, 0, 0}));
  const Vec6 d = PerturbedMedia(m3()).d({4, 4, 4});
  CHECK(d == diag_of(m3()));
}
