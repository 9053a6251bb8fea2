#include "maxlat/eigenmode.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "maxlat/dispersion.hpp"
#include "maxlat/errors.hpp"
#include "maxlat/parallel.hpp"
#include "maxlat/symbol.hpp"

namespace maxlat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_grid(int n) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw DomainError("grid must be a power of two >= 8, got " + std::to_string(n));
  }
}

Vec3 grid_point(int n, std::size_t index) {
  const std::size_t plane = static_cast<std::size_t>(n) * n;
  const double h = kTwoPi / n;
  return {static_cast<double>(index / plane) * h, static_cast<double>((index / n) % n) * h,
          static_cast<double>(index % n) * h};
}

// Coefficients of six sampled components; entries below rel * global max dropped.
std::array<CPoly, 6> invert_components(const std::vector<Vec6c>& samples, int n, double rel) {
  std::array<CPoly, 6> raw;
  std::vector<Complex> buf(samples.size());
  double largest = 0.0;
  for (int k = 0; k < 6; ++k) {
    for (std::size_t i = 0; i < samples.size(); ++i) buf[i] = samples[i][k];
    raw[k] = from_samples(buf, n, std::nullopt, 0.0);
    for (const auto& [f, c] : raw[k].terms()) largest = std::max(largest, std::abs(c));
  }
  if (rel <= 0.0) return raw;
  std::array<CPoly, 6> out;
  for (int k = 0; k < 6; ++k) {
    CPoly::Map m;
    for (const auto& [f, c] : raw[k].terms())
      if (std::abs(c) > rel * largest) m.emplace(f, c);
    out[k] = CPoly(std::move(m), 0.0);
  }
  return out;
}

QMatrix mtilde_poly() {
  QMatrix m(3, 3);
  for (int j = 0; j < 3; ++j) {
    const QPoly y = sin_poly<GaussRational>(j);
    const int a = (j + 1) % 3, b = (j + 2) % 3;
    m(b, a) = y;
    m(a, b) = -y;
  }
  return m;
}

QMatrix diag_poly(const RVec3& d) {
  QMatrix m(3, 3);
  for (int i = 0; i < 3; ++i) m(i, i) = QPoly::constant(GaussRational(d[i]));
  return m;
}

}  // namespace

Counterexample build_counterexample(const Media& media, double lambda, const Vec3& v_h,
                                    int grid) {
  check_grid(grid);
  const auto cls = derive_params(media).cls;
  if (cls != MediaClass::B12) {
    throw NotApplicable("the critical-window mode needs class B12, got " +
                        std::string(to_string(cls)));
  }
  const double lp = lambda_plus(media);
  const double lm = lambda_minus(media);
  if (!(std::abs(lambda) > lm && std::abs(lambda) < lp)) {
    throw DomainError("lambda must satisfy lambda- < |lambda| < lambda+ (" + std::to_string(lm) +
                      ", " + std::to_string(lp) + "), got " + std::to_string(lambda));
  }
  if (v_h[0] == 0.0 && v_h[1] == 0.0 && v_h[2] == 0.0) throw DomainError("v_H must be nonzero");

  Counterexample ce;
  ce.normalization = normalize_a0(media);
  ce.lambda = lambda;
  ce.v_h = v_h;
  ce.grid = grid;
  const Media& md = ce.normalization.media;
  const auto params = derive_params(md);
  const double l2 = lambda * lambda;
  const Eigen::Vector3d v(v_h[0], v_h[1], v_h[2]);
  const Eigen::Vector3d eps(md.eps[0], md.eps[1], md.eps[2]);

  const std::size_t total = static_cast<std::size_t>(grid) * grid * grid;
  std::vector<Vec6c> u(total);
  std::vector<double> den(total);
  parallel_for(static_cast<std::size_t>(grid), [&](std::size_t a) {
    const std::size_t plane = static_cast<std::size_t>(grid) * grid;
    for (std::size_t i = a * plane; i < (a + 1) * plane; ++i) {
      const Vec3 x = grid_point(grid, i);
      const Vec3 y = sin_of(x);
      const Mat3 shifted = b_from_y(md, y) - l2 * Mat3::Identity();
      const double d = taus(params, z_of(x)).minus - l2;
      const Eigen::Vector3d uh = adjugate3(shifted) * v / d;
      const Eigen::Vector3d ue = eps.asDiagonal() * (mtilde(y) * uh) / lambda;
      u[i] << ue[0], ue[1], ue[2], uh[0], uh[1], uh[2];
      den[i] = d;
    }
  });
  ce.denominator_min = *std::min_element(den.begin(), den.end());
  ce.denominator_max = *std::max_element(den.begin(), den.end());
  ce.u_hat = from_trig(invert_components(u, grid, 1e-14));

  // Path (a): exact algebra over the Gaussian rationals.
  const ExactParams ep = exact_params(md);
  const RVec3 qe = to_rational(md.eps);
  const RVec3 qm = to_rational(md.mu);
  const Rational ql = Rational(lambda);
  const GaussRational ql2(Rational(ql * ql));
  const QMatrix mt = mtilde_poly();
  const QMatrix b = QMatrix(3, 3) - diag_poly(qm) * mt * diag_poly(qe) * mt;
  const QMatrix shifted = b - QPoly::constant(ql2) * QMatrix::identity(3);
  const QPoly det_b = det(shifted);
  const auto tp = tau_polys(ep);
  if (!tp) throw InternalError("class B12 media without linear tau forms");
  const QPoly lp2 = tp->plus - QPoly::constant(ql2);
  const QPoly lm2 = tp->minus - QPoly::constant(ql2);
  ce.det_identity = det_b == QPoly::constant(-ql2) * lp2 * lm2;
  ce.adjugate_identity = shifted * adjugate(shifted) == det_b * QMatrix::identity(3);
  if (!ce.det_identity || !ce.adjugate_identity) {
    throw InternalError("exact determinant/adjugate identity failed for B(x) - lambda^2");
  }
  const RVec3 qv = to_rational(v_h);
  for (int j = 0; j < 3; ++j) {
    ce.residual_exact[j] = QPoly();
    ce.residual_exact[3 + j] = GaussRational(Rational(-ql * qv[j])) * lp2;
  }
  ce.residual_support_radius = -1;
  for (const auto& p : ce.residual_exact)
    ce.residual_support_radius = std::max(ce.residual_support_radius, p.linf_radius());

  // Path (b): resynthesise u from its coefficients and apply the symbol pointwise.
  const auto usamples = sample_field(ce.u_hat, grid);
  std::vector<Vec6c> r(total);
  parallel_for(static_cast<std::size_t>(grid), [&](std::size_t a) {
    const std::size_t plane = static_cast<std::size_t>(grid) * grid;
    for (std::size_t i = a * plane; i < (a + 1) * plane; ++i) {
      const Mat6 h = hd_symbol(md, grid_point(grid, i));
      r[i] = h.cast<Complex>() * usamples[i] - lambda * usamples[i];
    }
  });
  ce.residual_numeric = invert_components(r, grid, 0.0);

  double scale = 0.0, diff = 0.0;
  for (int k = 0; k < 6; ++k) {
    const CPoly exact = to_complex(ce.residual_exact[k]);
    for (const auto& [f, c] : exact.terms()) scale = std::max(scale, std::abs(c));
    const CPoly d = ce.residual_numeric[k] - exact;
    for (const auto& [f, c] : d.terms()) diff = std::max(diff, std::abs(c));
    for (const auto& [f, c] : ce.residual_numeric[k].terms())
      if (linf_norm(f) > 2) ce.numeric_outside = std::max(ce.numeric_outside, std::abs(c));
  }
  ce.two_path_error = scale > 0.0 ? diff / scale : diff;
  return ce;
}

bool passes_shell_test(const LatticeField& u_hat, int r_test, double floor) {
  const auto shells = shell_profile_linf(u_hat, r_test);
  double largest = 0.0;
  for (const auto& [n, v] : u_hat.values()) largest = std::max(largest, v.norm());
  if (largest == 0.0) return false;
  return std::all_of(shells.begin(), shells.end(),
                     [&](double s) { return s > floor * largest; });
}

VhChoice choose_vh(const Media& media, double lambda, int grid, std::uint64_t seed, int r_test) {
  VhChoice out;
  std::vector<Vec3> candidates = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 32; ++k) {
    Vec3 w{normal(rng), normal(rng), normal(rng)};
    const double len = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (len == 0.0) continue;
    for (double& c : w) c /= len;
    candidates.push_back(w);
  }
  for (const auto& c : candidates) {
    ++out.attempts;
    const auto ce = build_counterexample(media, lambda, c, grid);
    if (passes_shell_test(ce.u_hat, r_test)) {
      out.v_h = c;
      return out;
    }
    out.rejected.push_back(c);
  }
  throw InternalError("no v_H candidate produced a non-polynomial mode after " +
                      std::to_string(out.attempts) + " attempts");
}

TauReduction tau_minus_reduce(const std::vector<Vec6c>& samples, int grid, const Media& media,
                              double lambda, int radius) {
  check_grid(grid);
  if (samples.size() != static_cast<std::size_t>(grid) * grid * grid) {
    throw ShapeError("sample count does not match the grid");
  }
  if (!(std::abs(lambda) > lambda_minus(media))) {
    throw DomainError("tau^- reduction needs |lambda| > lambda-");
  }
  TauReduction out;
  out.radius = radius;
  for (const auto& s : samples) {
    if (!s.allFinite()) {
      out.note = "non-finite samples";
      return out;
    }
  }
  const auto params = derive_params(media);
  const double l2 = lambda * lambda;
  std::vector<Vec6c> prod(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = taus(params, z_of(grid_point(grid, i))).minus - l2;
    prod[i] = d * samples[i];
  }
  const auto coeffs = invert_components(prod, grid, 0.0);
  double total = 0.0, outside = 0.0;
  for (const auto& p : coeffs) {
    for (const auto& [f, c] : p.terms()) {
      total += std::norm(c);
      if (linf_norm(f) > radius) outside += std::norm(c);
    }
  }
  out.outside_ratio = total > 0.0 ? outside / total : 0.0;
  out.finite = out.outside_ratio < 1e-9;
  for (int k = 0; k < 6; ++k) {
    CPoly::Map m;
    for (const auto& [f, c] : coeffs[k].terms())
      if (!out.finite || linf_norm(f) <= radius) m.emplace(f, c);
    out.product[k] = CPoly(std::move(m), 1e-12);
  }
  out.note = out.finite ? "product supported in |n|_inf <= " + std::to_string(radius)
                        : "product is not a trigonometric polynomial at this radius";
  return out;
}

TauReduction tau_minus_reduce(const LatticeField& u_hat, const Media& media, double lambda,
                              int grid, int radius) {
  auto out = tau_minus_reduce(sample_field(u_hat, grid), grid, media, lambda, radius);
  if (out.finite) out.note += " (a band-limited input always reduces)";
  return out;
}

ShellReport shell_report(const LatticeField& u_hat, int r_max, int besov_max) {
  ShellReport out;
  out.shell = shell_profile_linf(u_hat, r_max);
  std::vector<int> radii;
  for (int r = 1; r <= besov_max; ++r) radii.push_back(r);
  out.besov = besov_profile_l1(u_hat, radii);
  return out;
}

Calibration calibrate_shell_bound(const Media& media, double lambda, const Vec3& v_h,
                                  int grid_lo, int grid_hi, double floor, double agree) {
  Calibration out;
  out.grid_lo = grid_lo;
  out.grid_hi = grid_hi;
  const int r_max = grid_lo / 2 - 1;
  const auto lo = build_counterexample(media, lambda, v_h, grid_lo);
  const auto hi = build_counterexample(media, lambda, v_h, grid_hi);
  out.shell_lo = shell_profile_linf(lo.u_hat, r_max);
  out.shell_hi = shell_profile_linf(hi.u_hat, r_max);
  double largest = 0.0;
  for (double s : out.shell_hi) largest = std::max(largest, s);
  for (int r = 0; r <= r_max; ++r) {
    const double a = out.shell_lo[r], b = out.shell_hi[r];
    if (!(b > floor * largest) || std::abs(a - b) > agree * b) break;
    out.r_star = r;
  }
  return out;
}

double adjugate_spectral_error(const Media& media, const Vec3& x, double t) {
  const Mat3 b = b_matrix(media, x);
  const auto ed = eigen_decomp(b);
  if (ed.clusters.size() != 3) throw DomainError("B(x) has a repeated eigenvalue at this x");
  const Taus tau = taus(derive_params(media), z_of(x));
  const Eigen::MatrixXcd p0 = ed.nearest(0.0).projector;
  const Eigen::MatrixXcd pp = ed.nearest(tau.plus).projector;
  const Eigen::MatrixXcd pm = ed.nearest(tau.minus).projector;
  const Eigen::MatrixXcd formula = -t * (tau.plus - t) * pm - t * (tau.minus - t) * pp +
                                   (tau.plus - t) * (tau.minus - t) * p0;
  const Mat3 adj = adjugate3(b - t * Mat3::Identity());
  const double scale = std::max(adj.norm(), std::numeric_limits<double>::min());
  return (adj.cast<Complex>() - formula).norm() / scale;
}

double adjugate_rank_ratio(const Media& media, const Vec3& x) {
  const Taus tau = taus(derive_params(media), z_of(x));
  const Mat3 adj = adjugate3(b_matrix(media, x) - tau.minus * Mat3::Identity());
  Eigen::JacobiSVD<Mat3> svd(adj);
  const auto s = svd.singularValues();
  return s[0] > 0.0 ? s[1] / s[0] : 0.0;
}

nlohmann::json to_json(const Counterexample& c, const ShellReport& shells) {
  std::vector<double> besov;
  for (const auto& [r, v] : shells.besov) besov.push_back(v);
  return {{"lambda", c.lambda},
          {"v_H", c.v_h},
          {"media", c.normalization.media},
          {"permutation", c.normalization.permutation},
          {"swapped", c.normalization.swapped},
          {"grid", c.grid},
          {"residual_support_radius", c.residual_support_radius},
          {"residual_outside_max", c.numeric_outside},
          {"two_path_residual_error", c.two_path_error},
          {"det_identity", c.det_identity},
          {"adjugate_identity", c.adjugate_identity},
          {"denominator_range", {c.denominator_min, c.denominator_max}},
          {"shell_profile", shells.shell},
          {"besov_profile", besov}};
}

std::vector<Regime> rellich_regimes(const Media& media) {
  const auto cls = derive_params(media).cls;
  const double lp = lambda_plus(media);
  const double lm = lambda_minus(media);
  const double inf = std::numeric_limits<double>::infinity();
  if (cls == MediaClass::B12) {
    return {{0.0, lm, "RT expected (class B12, 0 < |lambda| < lambda-)"},
            {lm, lp, "RT fails (class B12, |lambda| > lambda-), eigenmode built"},
            {lp, inf, "RT fails (class B12, |lambda| > lambda-), above the spectrum"}};
  }
  return {{0.0, lp, "RT expected (class " + std::string(to_string(cls)) + ", 0 < |lambda| < lambda+)"},
          {lp, inf, "not covered (above the spectrum)"}};
}

}  // namespace maxlat
