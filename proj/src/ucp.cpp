#include "maxlat/ucp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/SparseCholesky>

#include "maxlat/dispersion.hpp"
#include "maxlat/errors.hpp"
#include "maxlat/symbol.hpp"

namespace maxlat {

// ---------------------------------------------------------------- covers --

bool HalfSpace::contains(const Site& n) const {
  return xi[0] * n[0] + xi[1] * n[1] + xi[2] * n[2] <= l;
}

Vec3 HalfSpace::xi_double() const { return {xi[0].get_d(), xi[1].get_d(), xi[2].get_d()}; }

bool in_g_star(const RVec3& xi) {
  const RVec3 a{abs(xi[0]), abs(xi[1]), abs(xi[2])};
  for (int i = 0; i < 3; ++i)
    if (a[i] > a[(i + 1) % 3] && a[i] > a[(i + 2) % 3]) return true;
  return false;
}

namespace {

using IVec = std::array<long, 3>;
using Facet = std::pair<IVec, long>;

IVec to_ivec(const Site& s) { return {s[0], s[1], s[2]}; }
IVec sub(const IVec& a, const IVec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
IVec cross(const IVec& a, const IVec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
long dot(const IVec& a, const IVec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
bool is_zero(const IVec& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }
IVec neg(const IVec& a) { return {-a[0], -a[1], -a[2]}; }
IVec reduce(IVec a) {
  const long g = std::gcd(std::gcd(std::labs(a[0]), std::labs(a[1])), std::labs(a[2]));
  if (g > 1)
    for (auto& c : a) c /= g;
  return a;
}

struct SupportInfo {
  long max, min;
};
SupportInfo support(const IVec& nu, const std::vector<IVec>& pts) {
  SupportInfo s{dot(nu, pts[0]), dot(nu, pts[0])};
  for (const auto& p : pts) {
    const long v = dot(nu, p);
    s.max = std::max(s.max, v);
    s.min = std::min(s.min, v);
  }
  return s;
}

// Supporting half-spaces nu.n <= max and -nu.n <= -min.
void add_both(std::set<Facet>& out, const IVec& nu, const std::vector<IVec>& pts) {
  const IVec r = reduce(nu);
  const auto s = support(r, pts);
  out.insert({r, s.max});
  out.insert({neg(r), -s.min});
}

// True when the points on the plane nu.n = level are not collinear.
bool spans_plane(const IVec& nu, long level, const std::vector<IVec>& pts) {
  std::vector<IVec> on;
  for (const auto& p : pts)
    if (dot(nu, p) == level) on.push_back(p);
  for (std::size_t j = 1; j < on.size(); ++j)
    for (std::size_t k = j + 1; k < on.size(); ++k)
      if (!is_zero(cross(sub(on[j], on[0]), sub(on[k], on[0])))) return true;
  return false;
}

std::set<Facet> hull_facets(const std::vector<IVec>& pts) {
  std::set<Facet> facets;
  const IVec& a = pts[0];
  IVec d1{0, 0, 0}, normal{0, 0, 0};
  for (const auto& p : pts) {
    const IVec d = sub(p, a);
    if (is_zero(d1)) {
      if (!is_zero(d)) d1 = d;
    } else if (is_zero(normal) && !is_zero(cross(d1, d))) {
      normal = cross(d1, d);
    }
  }
  int dim = 0;
  if (!is_zero(d1)) dim = 1;
  if (!is_zero(normal)) {
    dim = 2;
    for (const auto& p : pts)
      if (dot(normal, sub(p, a)) != 0) dim = 3;
  }

  if (dim == 0) {
    for (int j = 0; j < 3; ++j) {
      IVec e{0, 0, 0};
      e[j] = 1;
      add_both(facets, e, pts);
    }
  } else if (dim == 1) {
    add_both(facets, d1, pts);
    for (int j = 0; j < 3; ++j) {
      IVec e{0, 0, 0};
      e[j] = 1;
      const IVec c = cross(d1, e);
      if (!is_zero(c)) add_both(facets, c, pts);
    }
  } else if (dim == 2) {
    add_both(facets, normal, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const IVec nu = reduce(cross(normal, sub(pts[j], pts[i])));
        if (is_zero(nu)) continue;
        const auto s = support(nu, pts);
        const long v = dot(nu, pts[i]);
        if (v == s.max) facets.insert({nu, s.max});
        if (v == s.min) facets.insert({neg(nu), -s.min});
      }
    }
  } else {
    std::set<IVec> seen;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const IVec dj = sub(pts[j], pts[i]);
        for (std::size_t k = j + 1; k < pts.size(); ++k) {
          IVec nu = cross(dj, sub(pts[k], pts[i]));
          if (is_zero(nu)) continue;
          nu = reduce(nu);
          const IVec canon = std::max(nu, neg(nu));
          if (!seen.insert(canon).second) continue;
          const auto s = support(canon, pts);
          if (spans_plane(canon, s.max, pts)) facets.insert({canon, s.max});
          if (spans_plane(canon, s.min, pts)) facets.insert({neg(canon), -s.min});
        }
      }
    }
  }
  return facets;
}

std::vector<HalfSpace> box_halfspaces(const Box& box) {
  std::vector<HalfSpace> out;
  for (int j = 0; j < 3; ++j) {
    RVec3 e{Rational(0), Rational(0), Rational(0)};
    e[j] = 1;
    out.push_back({e, Rational(box.hi[j])});
    e[j] = -1;
    out.push_back({e, Rational(-box.lo[j])});
  }
  return out;
}

HalfSpace perturbed(const IVec& nu, const Rational& delta, const std::vector<IVec>& pts) {
  RVec3 xi{Rational(nu[0]), Rational(nu[1]), Rational(nu[2])};
  if (!in_g_star(xi)) {
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::labs(nu[a]) > std::labs(nu[b]); });
    xi[order[1]] *= 1 - delta;
    xi[order[2]] *= 1 - 2 * delta;
  }
  Rational l = xi[0] * pts[0][0] + xi[1] * pts[0][1] + xi[2] * pts[0][2];
  for (const auto& p : pts) {
    Rational v = xi[0] * p[0] + xi[1] * p[1] + xi[2] * p[2];
    if (v > l) l = v;
  }
  return {xi, l};
}

}  // namespace

bool cover_is_valid(const Cover& cover, const std::vector<Site>& k_int, const Box& box) {
  const std::set<Site> k(k_int.begin(), k_int.end());
  for (const auto& h : cover.family)
    if (!in_g_star(h.xi)) return false;
  for (const auto& n : box.sites()) {
    const bool inside = std::all_of(cover.family.begin(), cover.family.end(),
                                    [&](const HalfSpace& h) { return h.contains(n); });
    if (inside != (k.count(n) > 0)) return false;
  }
  return true;
}

Cover halfspace_cover(const std::vector<Site>& k_int, const Box& box) {
  if (k_int.empty()) throw PreconditionError("K_int is empty");
  const std::set<Site> k(k_int.begin(), k_int.end());
  for (const auto& n : k)
    if (!box.contains(n)) throw PreconditionError("K_int leaves the bounding box");
  std::vector<IVec> pts;
  for (const auto& n : k) pts.push_back(to_ivec(n));

  const auto facets = hull_facets(pts);
  for (const auto& n : box.sites()) {
    if (k.count(n)) continue;
    const IVec v = to_ivec(n);
    const bool in_hull = std::all_of(facets.begin(), facets.end(),
                                     [&](const Facet& f) { return dot(f.first, v) <= f.second; });
    if (in_hull) {
      throw PreconditionError("K_int is not convex: lattice point (" + std::to_string(n[0]) + "," +
                              std::to_string(n[1]) + "," + std::to_string(n[2]) +
                              ") lies in its hull");
    }
  }

  Cover cover;
  cover.facets = static_cast<int>(facets.size());
  Rational delta(1);  // largest power of 1/2 first; enumeration rejects invalid ones
  for (int attempt = 0; attempt < 40; ++attempt, delta /= 2) {
    cover.family.clear();
    for (const auto& f : facets) cover.family.push_back(perturbed(f.first, delta, pts));
    for (auto& h : box_halfspaces(box)) cover.family.push_back(h);
    if (cover_is_valid(cover, k_int, box)) {
      cover.delta = delta;
      return cover;
    }
  }
  throw InternalError("no power-of-two perturbation keeps the cover valid");
}

// ------------------------------------------------------------ degrees --

namespace {

template <class R>
struct Scalar;

template <>
struct Scalar<GaussRational> {
  static GaussRational from(double v) { return GaussRational(Rational(v)); }
  static double magnitude(const GaussRational& c) { return std::abs(c.to_complex()); }
};

template <>
struct Scalar<Complex> {
  static Complex from(double v) { return Complex(v); }
  static double magnitude(const Complex& c) { return std::abs(c); }
};

template <class R>
double max_abs(const TrigMatrix<R>& m) {
  double out = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      for (const auto& [n, c] : m(i, j).terms()) out = std::max(out, Scalar<R>::magnitude(c));
  return out;
}

template <class R>
double max_abs(const TrigPoly<R>& p) {
  double out = 0.0;
  for (const auto& [n, c] : p.terms()) out = std::max(out, Scalar<R>::magnitude(c));
  return out;
}

// Drops coefficients at or below rel * (largest coefficient of the whole matrix).
template <class R>
TrigMatrix<R> support_pruned(const TrigMatrix<R>& m, double rel) {
  if (rel <= 0.0) return m;
  const double threshold = rel * max_abs(m);
  TrigMatrix<R> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      typename TrigPoly<R>::Map keep;
      for (const auto& [n, c] : m(i, j).terms())
        if (Scalar<R>::magnitude(c) > threshold) keep.emplace(n, c);
      out(i, j) = TrigPoly<R>(std::move(keep), 0.0);
    }
  }
  return out;
}

template <class R>
TrigPoly<R> support_pruned(const TrigPoly<R>& p, double rel) {
  TrigMatrix<R> m(1, 1);
  m(0, 0) = p;
  return support_pruned(m, rel)(0, 0);
}

template <class R>
bool negligible(const TrigMatrix<R>& m, double scale, double rel) {
  return rel <= 0.0 ? m.is_zero() : max_abs(m) <= rel * scale;
}

template <class R>
TrigMatrix<R> h0_poly() {
  TrigMatrix<R> h(6, 6);
  for (int j = 0; j < 3; ++j) {
    const TrigPoly<R> y = sin_poly<R>(j);
    const int a = (j + 1) % 3, b = (j + 2) % 3;
    // M~(y) entries (b, a) = y_j and (a, b) = -y_j
    h(b, 3 + a) = y;
    h(a, 3 + b) = -y;
    h(3 + b, a) = -y;
    h(3 + a, b) = y;
  }
  return h;
}

template <class R>
DegreeReport certify(const Media& media, double lambda, const std::vector<RVec3>& xis,
                     double rel) {
  DegreeReport rep;
  rep.media = media;
  rep.lambda = lambda;
  rep.exact = rel <= 0.0;

  const TrigMatrix<R> h0 = h0_poly<R>();
  TrigMatrix<R> d(6, 6);
  for (int i = 0; i < 3; ++i) {
    d(i, i) = TrigPoly<R>::constant(Scalar<R>::from(media.eps[i]));
    d(3 + i, 3 + i) = TrigPoly<R>::constant(Scalar<R>::from(media.mu[i]));
  }
  const TrigMatrix<R> hd = d * h0;

  using T = TPoly<R>;
  TrigMatrix<T> shifted = hd.map_coeffs([](const R& c) { return T(c); });
  const auto minus_t = TrigPoly<T>::constant(T(std::vector<R>{R(0), R(-1)}));
  for (int i = 0; i < 6; ++i) shifted(i, i) += minus_t;

  const TrigMatrix<T> l = adjugate(shifted);
  const TrigPoly<T> q = det(shifted);
  const R lam = Scalar<R>::from(lambda);

  const TrigMatrix<R> l0 = t_coefficient(l, 0);
  const TrigMatrix<R> b1 = support_pruned(t_coefficient(l, 1), rel);
  const TrigMatrix<R> b2 = support_pruned(
      l.map_coeffs([&lam](const T& p) { return p.shifted_down(2).evaluate(lam); }), rel);
  const TrigMatrix<R> l_lam = support_pruned(t_evaluate(l, lam), rel);
  const TrigPoly<R> q_lam = support_pruned(t_evaluate(q, lam), rel);

  const double hscale = max_abs(hd);
  const double bscale = std::max(max_abs(b1), 1e-300);
  rep.l0_zero = negligible(l0, max_abs(t_coefficient(l, 1)) + 1.0, rel);
  rep.b1_hd_zero = negligible(TrigMatrix<R>(b1 * hd), bscale * hscale, rel);
  rep.h0_b1_zero = negligible(TrigMatrix<R>(h0 * b1), bscale, rel);
  rep.b1_h0_zero = negligible(TrigMatrix<R>(b1 * h0), bscale, rel);
  rep.b1t_h0_zero = negligible(TrigMatrix<R>(b1.transpose() * h0), bscale, rel);

  // det(H^D - lambda) against lambda^2 (lambda^4 - 2 lambda^2 Psi0 + Psi0^2 - K0)
  const ExactParams ep = exact_params(media);
  const QPoly s = psi0_poly(ep);
  const Rational ql(lambda);
  const GaussRational l2(Rational(ql * ql));
  const QPoly p = QPoly::constant(l2) *
                  (QPoly::constant(l2 * l2) - QPoly::constant(GaussRational(2) * l2) * s + s * s -
                   k0_poly(ep));
  if constexpr (std::is_same_v<R, GaussRational>) {
    rep.q_matches_dispersion = q_lam == p;
  } else {
    const CPoly diff = q_lam - to_complex(p);
    rep.q_matches_dispersion = max_abs(diff) <= 1e-9 * std::max(1.0, max_abs(to_complex(p)));
  }

  auto fail = [&rep](bool ok, const std::string& what) {
    if (!ok) rep.failures.push_back(what);
  };
  fail(rep.l0_zero, "L_0 != 0");
  fail(rep.b1_hd_zero, "B1 H^D != 0");
  fail(rep.h0_b1_zero, "H0 B1 != 0");
  fail(rep.q_matches_dispersion, "det(H^D - lambda) != lambda^2 (tau+ - lambda^2)(tau- - lambda^2)");

  for (const auto& xi : xis) {
    DegreeEntry e;
    e.xi = xi;
    e.xi_linf = std::max({abs(xi[0]), abs(xi[1]), abs(xi[2])});
    e.n_q = q_lam.nmax_exact(xi);
    e.n_l = l_lam.nmax_exact(xi);
    e.n_b1 = b1.nmax_exact(xi);
    e.n_b2 = b2.nmax_exact(xi);
    const Rational four = 4 * e.xi_linf;
    const Rational three = 3 * e.xi_linf;
    e.ok = e.n_q && *e.n_q == four && e.n_l && *e.n_l == four && e.n_b1 && *e.n_b1 == four &&
           (!e.n_b2 || *e.n_b2 <= three);
    if (!in_g_star(xi)) rep.failures.push_back("xi outside G*: " + rational_string(xi[0]) + "," +
                                               rational_string(xi[1]) + "," +
                                               rational_string(xi[2]));
    fail(e.ok, "degree identities fail for xi = (" + rational_string(xi[0]) + "," +
                   rational_string(xi[1]) + "," + rational_string(xi[2]) + ")");
    rep.entries.push_back(std::move(e));
  }
  rep.valid = rep.failures.empty();
  return rep;
}

}  // namespace

DegreeReport degree_certificate(const Media& media, double lambda, const std::vector<RVec3>& xis,
                                bool exact) {
  validate(media);
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("lambda must be nonzero");
  return exact ? certify<GaussRational>(media, lambda, xis, 0.0)
               : certify<Complex>(media, lambda, xis, 1e-12);
}

// ------------------------------------------------------------- pairing --

PairingReport pairing_identity(const LatticeField& u, const PerturbedMedia& media,
                               const RVec3& xi) {
  if (u.is_zero()) throw PreconditionError("pairing needs a nonzero field");
  media.validate();
  PairingReport rep;
  auto exact = [](const Complex& c) { return GaussRational(Rational(c.real()), Rational(c.imag())); };

  QPoly::Map t;
  std::array<QPoly::Map, 6> plain, conj;
  for (const auto& [n, v] : u.values()) {
    const Rational dot = xi[0] * n[0] + xi[1] * n[1] + xi[2] * n[2];
    if (!rep.n_u || dot > *rep.n_u) rep.n_u = dot;
    const Vec6 d = media.d(n);
    Rational sum(0);
    for (int k = 0; k < 6; ++k) {
      const GaussRational c = exact(v[k]);
      sum += c.norm2() / Rational(d[k]);
      if (!c.is_zero()) {
        plain[k].emplace(n, c);
        conj[k].emplace(n, c.conj());
      }
    }
    if (sgn(sum) != 0) t.emplace(Freq{2 * n[0], 2 * n[1], 2 * n[2]}, GaussRational(sum));
  }
  const QPoly tp(std::move(t));
  rep.n_t = tp.nmax_exact(xi);
  rep.t = to_complex(tp);

  const Vec6 bg = PerturbedMedia(media.background).d({0, 0, 0});
  QPoly bilinear;
  for (int k = 0; k < 6; ++k) {
    bilinear += GaussRational(1 / Rational(bg[k])) * (QPoly(conj[k]) * QPoly(plain[k]));
  }
  rep.n_bilinear = bilinear.nmax_exact(xi);
  rep.holds = rep.n_u && rep.n_t && rep.n_bilinear && *rep.n_t == 2 * *rep.n_u &&
              *rep.n_bilinear == 2 * *rep.n_u;
  return rep;
}

// ----------------------------------------------------------- null test --

std::string to_string(NullVariant v) {
  return v == NullVariant::Anywhere ? "anywhere" : "exterior";
}

NullOperator assemble_null_operator(const PerturbedMedia& media, double lambda,
                                    const std::vector<Site>& k_int, const Box& box,
                                    NullVariant variant) {
  const std::set<Site> k(k_int.begin(), k_int.end());
  NullOperator op;
  std::map<Site, int> col;
  for (const auto& n : box.shrunk(1).sites()) {
    if (variant == NullVariant::Exterior && k.count(n)) continue;
    col.emplace(n, static_cast<int>(op.columns.size()));
    op.columns.push_back(n);
  }
  for (const auto& n : box.sites())
    if (!k.count(n)) op.rows.push_back(n);

  std::array<Mat6, 3> units;
  for (int j = 0; j < 3; ++j) {
    Vec3 e{0, 0, 0};
    e[j] = 1.0;
    units[j] = h0_from_y(e);
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t r = 0; r < op.rows.size(); ++r) {
    const Site& m = op.rows[r];
    const Vec6 d = media.d(m);
    const int row0 = static_cast<int>(r) * 6;
    for (int j = 0; j < 3; ++j) {
      const Mat6 block = 0.5 * (d.asDiagonal() * units[j]);
      for (int s : {-1, 1}) {
        Site n = m;
        n[j] += s;
        auto it = col.find(n);
        if (it == col.end()) continue;
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b)
            if (block(a, b) != 0.0) trip.emplace_back(row0 + a, it->second * 6 + b, block(a, b));
      }
    }
    auto it = col.find(m);
    if (it != col.end()) {
      Vec6 diag = Vec6::Constant(-lambda);
      auto pot = media.potential.find(m);
      if (pot != media.potential.end()) diag += pot->second;
      for (int a = 0; a < 6; ++a)
        if (diag[a] != 0.0) trip.emplace_back(row0 + a, it->second * 6 + a, diag[a]);
    }
  }
  op.a.resize(static_cast<Eigen::Index>(op.rows.size() * 6),
               static_cast<Eigen::Index>(op.columns.size() * 6));
  op.a.setFromTriplets(trip.begin(), trip.end());
  return op;
}

NullTestReport finite_box_null_test(const PerturbedMedia& media, double lambda,
                                    const std::vector<Site>& k_int, const Box& box,
                                    NullVariant variant, const NullTestOptions& options) {
  if (lambda == 0.0) {
    throw DomainError(
        "lambda = 0 rejected: phi+(x) = (sin x, 0) is a trigonometric-polynomial kernel element "
        "of H0, so unique continuation fails at 0");
  }
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  media.validate();
  if (k_int.empty()) throw PreconditionError("K_int is empty");
  const Box margin = box.shrunk(3);
  for (const auto& n : k_int)
    if (margin.empty() || !margin.contains(n))
      throw PreconditionError("box too small: K_int needs a margin of at least 3 sites");

  const NullOperator op = assemble_null_operator(media, lambda, k_int, box, variant);
  const Eigen::SparseMatrix<double>& a = op.a;
  NullTestReport rep;
  rep.box = box;
  rep.variant = variant;
  rep.unknowns = static_cast<std::size_t>(a.cols());
  rep.equations = static_cast<std::size_t>(a.rows());
  rep.kernel_tol = options.kernel_tol;

  Eigen::SparseMatrix<double> normal = Eigen::SparseMatrix<double>(a.transpose()) * a;
  double diag_max = 0.0;
  for (Eigen::Index i = 0; i < normal.rows(); ++i) diag_max = std::max(diag_max, normal.coeff(i, i));
  Eigen::SparseMatrix<double> id(normal.rows(), normal.cols());
  id.setIdentity();
  normal += (1e-14 * std::max(diag_max, 1.0)) * id;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(normal);
  if (ldlt.info() != Eigen::Success) throw InternalError("sparse factorization failed");

  const Eigen::Index n = a.cols();
  const Eigen::Index k = std::min<Eigen::Index>(options.vectors, n);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal_dist;
  Eigen::MatrixXd v(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) v(i, j) = normal_dist(rng);

  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(k), previous = Eigen::VectorXd::Constant(k, -1.0);
  for (int it = 0; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd w = ldlt.solve(v);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(w).householderQ() *
                              Eigen::MatrixXd::Identity(n, k);
    const Eigen::MatrixXd aq = a * q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(aq.transpose() * aq);
    v = q * rr.eigenvectors();
    for (Eigen::Index j = 0; j < k; ++j) sigma[j] = (a * v.col(j)).norm();
    const Eigen::Index watch = std::min<Eigen::Index>(4, k);
    bool converged = it > 0;
    for (Eigen::Index j = 0; j < watch; ++j)
      converged = converged && std::abs(sigma[j] - previous[j]) <= 1e-6 * sigma[j] + 1e-15;
    previous = sigma;
    if (converged) break;
  }

  std::vector<Eigen::Index> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return sigma[x] < sigma[y]; });
  const std::set<Site> kset(k_int.begin(), k_int.end());
  rep.verdict = "consistent-with-UCP";
  for (Eigen::Index j : order) {
    rep.singular_values.push_back(sigma[j]);
    if (sigma[j] >= options.kernel_tol) continue;
    ++rep.kernel_candidates;
    const Eigen::VectorXd w = v.col(j).normalized();
    double ext = 0.0;
    LatticeField::Map values;
    for (std::size_t c = 0; c < op.columns.size(); ++c) {
      const Site& site = op.columns[c];
      const Eigen::Matrix<double, 6, 1> block = w.segment<6>(static_cast<Eigen::Index>(c * 6));
      if (!kset.count(site)) ext += block.squaredNorm();
      const int s = ((site[0] + site[1] + site[2]) % 4 + 4) % 4;
      const Complex phase = std::pow(Complex(0.0, 1.0), s);
      if (!block.isZero(0.0)) values.emplace(site, phase * block.cast<Complex>());
    }
    const double ratio = std::sqrt(ext);
    rep.max_exterior_ratio = std::max(rep.max_exterior_ratio, ratio);
    if (ratio >= options.restriction_tol) rep.verdict = "violation";
    rep.kernel_vectors.emplace_back(std::move(values));
  }
  rep.sigma_min = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
  return rep;
}

PlantedViolation planted_violation(double lambda) {
  PlantedViolation out;
  out.media = PerturbedMedia(Media{});
  for (int j = 0; j < 3; ++j) {
    for (int s : {-1, 1}) {
      Site n{0, 0, 0};
      n[j] = s;
      out.media.potential[n] = Vec6::Constant(lambda);
      // sin x_j = (i/2) e^{-i x_j} - (i/2) e^{i x_j}: u(e_j) = i/2, u(-e_j) = -i/2
      Vec6c v = Vec6c::Zero();
      v[j] = Complex(0.0, 0.5 * s);
      out.phi.set(n, v);
    }
  }
  return out;
}

bool UcpCertificate::valid() const {
  bool ok = degree.valid;
  if (nulltest) ok = ok && nulltest->verdict == "consistent-with-UCP";
  return ok;
}

// ----------------------------------------------------------------- json --

std::string rational_string(const Rational& q) { return q.get_str(); }

std::optional<double> as_double(const std::optional<Rational>& q) {
  if (!q) return std::nullopt;
  return q->get_d();
}

namespace {

nlohmann::json rvec(const RVec3& v) {
  return {rational_string(v[0]), rational_string(v[1]), rational_string(v[2])};
}

nlohmann::json opt(const std::optional<Rational>& q) {
  if (!q) return "-inf";
  return rational_string(*q);
}

}  // namespace

nlohmann::json to_json(const HalfSpace& h) {
  return {{"xi", rvec(h.xi)}, {"l", rational_string(h.l)}, {"in_g_star", in_g_star(h.xi)}};
}

nlohmann::json to_json(const Cover& c) {
  auto fam = nlohmann::json::array();
  for (const auto& h : c.family) fam.push_back(to_json(h));
  return {{"facets", c.facets}, {"delta", rational_string(c.delta)}, {"family", fam}};
}

nlohmann::json to_json(const DegreeReport& r) {
  auto entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"xi", rvec(e.xi)},
                       {"xi_linf", rational_string(e.xi_linf)},
                       {"N_q", opt(e.n_q)},
                       {"N_L", opt(e.n_l)},
                       {"N_B1", opt(e.n_b1)},
                       {"N_B2", opt(e.n_b2)},
                       {"ok", e.ok}});
  }
  return {{"media", r.media},
          {"lambda", r.lambda},
          {"mode", r.exact ? "exact" : "float"},
          {"L0_zero", r.l0_zero},
          {"B1_HD_zero", r.b1_hd_zero},
          {"H0_B1_zero", r.h0_b1_zero},
          {"B1_H0_zero_literal", r.b1_h0_zero},
          {"B1T_H0_zero", r.b1t_h0_zero},
          {"det_matches_dispersion", r.q_matches_dispersion},
          {"entries", entries},
          {"failures", r.failures},
          {"valid", r.valid}};
}

nlohmann::json to_json(const PairingReport& r) {
  return {{"N_u", opt(r.n_u)},
          {"N_T", opt(r.n_t)},
          {"N_bilinear", opt(r.n_bilinear)},
          {"holds", r.holds},
          {"T", to_json_value(r.t)}};
}

nlohmann::json to_json(const NullTestReport& r) {
  return {{"box", {{"lo", r.box.lo}, {"hi", r.box.hi}}},
          {"variant", to_string(r.variant)},
          {"unknowns", r.unknowns},
          {"equations", r.equations},
          {"singular_values", r.singular_values},
          {"sigma_min", r.sigma_min},
          {"threshold", r.kernel_tol},
          {"kernel_candidates", r.kernel_candidates},
          {"max_exterior_ratio", r.max_exterior_ratio},
          {"verdict", r.verdict}};
}

nlohmann::json to_json(const UcpCertificate& c) {
  nlohmann::json j{{"media", c.media},
                   {"lambda", c.lambda},
                   {"degree_report", to_json(c.degree)},
                   {"valid", c.valid()}};
  if (c.cover) j["cover"] = to_json(*c.cover);
  if (c.nulltest) j["nulltest"] = to_json(*c.nulltest);
  return j;
}

}  // namespace maxlat
