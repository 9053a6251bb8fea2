#pragma once

// Sparse trigonometric (Laurent) polynomials on the 3-torus.
//
// A TrigPoly<R> is a finite map n -> c_n, n in Z^3, representing
//   p(x) = sum_n c_n e^{i n.x}.
// The coefficient ring R is Complex (floating), GaussRational (exact) or
// TPoly<...> (coefficients polynomial in a formal parameter t). Matrix-valued
// polynomials are TrigMatrix<R>, a dense matrix of scalar TrigPoly entries.

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxlat/errors.hpp"
#include "maxlat/media.hpp"
#include "maxlat/rings.hpp"

namespace maxlat {

using Freq = std::array<std::int32_t, 3>;

inline Freq operator+(const Freq& a, const Freq& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Freq operator-(const Freq& a) { return {-a[0], -a[1], -a[2]}; }

inline int linf_norm(const Freq& n) {
  return std::max({std::abs(n[0]), std::abs(n[1]), std::abs(n[2])});
}
inline int l1_norm(const Freq& n) {
  return std::abs(n[0]) + std::abs(n[1]) + std::abs(n[2]);
}

/// Default relative pruning threshold for floating coefficients.
inline constexpr double kPruneRelative = 1e-15;

/// A nonzero direction xi. Membership in G* means one coordinate is strictly
/// dominant in absolute value.
struct Direction {
  Vec3 xi{1.0, 0.0, 0.0};

  bool in_g_star() const;
  double linf() const;
};

bool in_g_star(const Vec3& xi);

template <class R>
class TrigPoly {
 public:
  using Map = std::map<Freq, R>;

  TrigPoly() = default;
  explicit TrigPoly(Map terms, double prune = kPruneRelative) : terms_(std::move(terms)) {
    this->prune(prune);
  }

  static TrigPoly constant(const R& c) { return monomial({0, 0, 0}, c); }
  static TrigPoly monomial(const Freq& n, const R& c) {
    Map m;
    m.emplace(n, c);
    return TrigPoly(std::move(m));
  }

  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  R coeff(const Freq& n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? R(0) : it->second;
  }

  /// Drops zero coefficients; for floating rings also every coefficient whose
  /// magnitude is at most `relative` times the largest one.
  TrigPoly& prune(double relative = kPruneRelative) {
    double threshold = 0.0;
    if constexpr (!Ring<R>::exact) {
      double largest = 0.0;
      for (const auto& [n, c] : terms_) largest = std::max(largest, Ring<R>::magnitude(c));
      threshold = relative * largest;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      bool drop = Ring<R>::is_zero(it->second);
      if constexpr (!Ring<R>::exact) drop = drop || Ring<R>::magnitude(it->second) <= threshold;
      it = drop ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  /// Support radius in the max norm; -1 for the zero polynomial.
  int linf_radius() const {
    int r = -1;
    for (const auto& [n, c] : terms_) r = std::max(r, linf_norm(n));
    return r;
  }

  TrigPoly& operator+=(const TrigPoly& o) {
    for (const auto& [n, c] : o.terms_) {
      auto [it, inserted] = terms_.try_emplace(n, c);
      if (!inserted) it->second += c;
    }
    return prune();
  }
  TrigPoly& operator-=(const TrigPoly& o) {
    for (const auto& [n, c] : o.terms_) {
      auto [it, inserted] = terms_.try_emplace(n, -c);
      if (!inserted) it->second -= c;
    }
    return prune();
  }
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator-(const TrigPoly& a) {
    TrigPoly out = a;
    for (auto& [n, c] : out.terms_) c = -c;
    return out;
  }
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) { return multiply(a, b); }
  TrigPoly& operator*=(const TrigPoly& o) { return *this = multiply(*this, o); }

  friend TrigPoly operator*(const R& s, const TrigPoly& a) {
    Map m;
    for (const auto& [n, c] : a.terms_) m.emplace(n, s * c);
    return TrigPoly(std::move(m));
  }

  static TrigPoly multiply(const TrigPoly& a, const TrigPoly& b,
                           double prune = kPruneRelative) {
    Map m;
    for (const auto& [na, ca] : a.terms_) {
      for (const auto& [nb, cb] : b.terms_) {
        R prod = ca * cb;
        auto [it, inserted] = m.try_emplace(na + nb, prod);
        if (!inserted) it->second += prod;
      }
    }
    return TrigPoly(std::move(m), prune);
  }

  friend bool operator==(const TrigPoly& a, const TrigPoly& b) { return a.terms_ == b.terms_; }

  /// Coefficient-wise complex conjugation at the same frequency.
  TrigPoly symmetrize() const {
    Map m;
    for (const auto& [n, c] : terms_) m.emplace(n, Ring<R>::conj(c));
    return TrigPoly(std::move(m));
  }

  template <class Fn>
  auto map_coeffs(Fn&& fn) const {
    using S = std::decay_t<decltype(fn(std::declval<const R&>()))>;
    typename TrigPoly<S>::Map m;
    for (const auto& [n, c] : terms_) m.emplace(n, fn(c));
    return TrigPoly<S>(std::move(m));
  }

  /// max { xi.n : c_n != 0 }, or -infinity for the zero polynomial.
  double nmax(const Vec3& xi) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [n, c] : terms_) {
      best = std::max(best, xi[0] * n[0] + xi[1] * n[1] + xi[2] * n[2]);
    }
    return best;
  }
  double nmax(const Direction& d) const { return nmax(d.xi); }

  /// Exact variant for rational directions; empty optional encodes -infinity.
  std::optional<Rational> nmax_exact(const RVec3& xi) const {
    std::optional<Rational> best;
    for (const auto& [n, c] : terms_) {
      Rational v = xi[0] * n[0] + xi[1] * n[1] + xi[2] * n[2];
      if (!best || v > *best) best = v;
    }
    return best;
  }

  Complex evaluate(const Vec3& x) const {
    Complex acc = 0.0;
    for (const auto& [n, c] : terms_) {
      const double phase = n[0] * x[0] + n[1] * x[1] + n[2] * x[2];
      acc += Ring<R>::to_complex(c) * Complex(std::cos(phase), std::sin(phase));
    }
    return acc;
  }

 private:
  Map terms_;
};

using CPoly = TrigPoly<Complex>;
using QPoly = TrigPoly<GaussRational>;

/// Dense rows x cols matrix whose entries are scalar TrigPoly values.
template <class R>
class TrigMatrix {
 public:
  using Poly = TrigPoly<R>;

  TrigMatrix() = default;
  TrigMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

  static TrigMatrix identity(int n) {
    TrigMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Poly::constant(R(1));
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Poly& operator()(int i, int j) { return e_[i * cols_ + j]; }
  const Poly& operator()(int i, int j) const { return e_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& p : e_)
      if (!p.is_zero()) return false;
    return true;
  }

  double nmax(const Vec3& xi) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : e_) best = std::max(best, p.nmax(xi));
    return best;
  }
  std::optional<Rational> nmax_exact(const RVec3& xi) const {
    std::optional<Rational> best;
    for (const auto& p : e_) {
      auto v = p.nmax_exact(xi);
      if (v && (!best || *v > *best)) best = v;
    }
    return best;
  }
  int linf_radius() const {
    int r = -1;
    for (const auto& p : e_) r = std::max(r, p.linf_radius());
    return r;
  }

  TrigMatrix transpose() const {
    TrigMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  TrigMatrix symmetrize() const {
    TrigMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k].symmetrize();
    return out;
  }
  template <class Fn>
  auto map_coeffs(Fn&& fn) const {
    using S = std::decay_t<decltype(fn(std::declval<const R&>()))>;
    TrigMatrix<S> out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).map_coeffs(fn);
    return out;
  }

  friend TrigMatrix operator+(const TrigMatrix& a, const TrigMatrix& b) {
    check_same_shape(a, b);
    TrigMatrix out = a;
    for (std::size_t k = 0; k < out.e_.size(); ++k) out.e_[k] += b.e_[k];
    return out;
  }
  friend TrigMatrix operator-(const TrigMatrix& a, const TrigMatrix& b) {
    check_same_shape(a, b);
    TrigMatrix out = a;
    for (std::size_t k = 0; k < out.e_.size(); ++k) out.e_[k] -= b.e_[k];
    return out;
  }
  friend TrigMatrix operator*(const TrigMatrix& a, const TrigMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw ShapeError("matrix product shape mismatch: " + std::to_string(a.rows_) + "x" +
                       std::to_string(a.cols_) + " * " + std::to_string(b.rows_) + "x" +
                       std::to_string(b.cols_));
    }
    TrigMatrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int j = 0; j < b.cols_; ++j) {
        Poly acc;
        for (int k = 0; k < a.cols_; ++k) {
          if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
          acc += a(i, k) * b(k, j);
        }
        out(i, j) = std::move(acc);
      }
    }
    return out;
  }
  friend TrigMatrix operator*(const Poly& s, const TrigMatrix& a) {
    TrigMatrix out(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.e_.size(); ++k) out.e_[k] = s * a.e_[k];
    return out;
  }
  friend bool operator==(const TrigMatrix& a, const TrigMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

 private:
  static void check_same_shape(const TrigMatrix& a, const TrigMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ShapeError("matrix shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Poly> e_;
};

using CMatrix = TrigMatrix<Complex>;
using QMatrix = TrigMatrix<GaussRational>;

namespace detail {

// Determinants of every square minor built from `rows` (in order) and a
// column subset, by Laplace expansion along the last row with memoisation on
// column bitmasks. Returns the table indexed by column mask; entries are only
// meaningful for masks with popcount == rows.size() or fewer.
template <class R>
std::vector<TrigPoly<R>> minor_table(const TrigMatrix<R>& m, const std::vector<int>& rows) {
  const int n = m.cols();
  const int depth = static_cast<int>(rows.size());
  std::vector<TrigPoly<R>> table(std::size_t{1} << n);
  table[0] = TrigPoly<R>::constant(R(1));
  for (int level = 1; level <= depth; ++level) {
    const int row = rows[level - 1];
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != level) continue;
      TrigPoly<R> acc;
      int position = 0;
      for (int c = 0; c < n; ++c) {
        if (!(mask & (1u << c))) continue;
        const auto& entry = m(row, c);
        const auto& sub = table[mask & ~(1u << c)];
        if (!entry.is_zero() && !sub.is_zero()) {
          auto term = entry * sub;
          if ((level - 1 + position) % 2 == 0) {
            acc += term;
          } else {
            acc -= term;
          }
        }
        ++position;
      }
      table[mask] = std::move(acc);
    }
  }
  return table;
}

}  // namespace detail

template <class R>
TrigPoly<R> det(const TrigMatrix<R>& m) {
  if (m.rows() != m.cols()) throw ShapeError("determinant of a non-square matrix");
  if (m.rows() > 16) throw ShapeError("determinant: matrix too large for cofactor expansion");
  std::vector<int> rows(m.rows());
  for (int i = 0; i < m.rows(); ++i) rows[i] = i;
  return detail::minor_table(m, rows)[(1u << m.cols()) - 1];
}

/// Adjugate (transposed cofactor matrix): m * adjugate(m) = det(m) * I.
template <class R>
TrigMatrix<R> adjugate(const TrigMatrix<R>& m) {
  if (m.rows() != m.cols()) throw ShapeError("adjugate of a non-square matrix");
  const int n = m.rows();
  if (n > 16) throw ShapeError("adjugate: matrix too large for cofactor expansion");
  TrigMatrix<R> adj(n, n);
  if (n == 1) {
    adj(0, 0) = TrigPoly<R>::constant(R(1));
    return adj;
  }
  const unsigned full = (1u << n) - 1;
  for (int i = 0; i < n; ++i) {
    std::vector<int> rows;
    for (int r = 0; r < n; ++r)
      if (r != i) rows.push_back(r);
    const auto table = detail::minor_table(m, rows);
    for (int j = 0; j < n; ++j) {
      const auto& minor = table[full & ~(1u << j)];
      adj(j, i) = ((i + j) % 2 == 0) ? minor : -minor;
    }
  }
  return adj;
}

/// Coefficient at t^k of a matrix whose entries are polynomial in t.
template <class R>
TrigMatrix<R> t_coefficient(const TrigMatrix<TPoly<R>>& m, int k) {
  return m.map_coeffs([k](const TPoly<R>& p) { return p.coeff(k); });
}

template <class R>
TrigMatrix<R> t_evaluate(const TrigMatrix<TPoly<R>>& m, const R& t) {
  return m.map_coeffs([&t](const TPoly<R>& p) { return p.evaluate(t); });
}

template <class R>
TrigPoly<R> t_evaluate(const TrigPoly<TPoly<R>>& p, const R& t) {
  return p.map_coeffs([&t](const TPoly<R>& q) { return q.evaluate(t); });
}

CPoly to_complex(const QPoly& p);
CMatrix to_complex(const QMatrix& m);

// --- building blocks for the symbols -------------------------------------

/// sin x_j as a trigonometric polynomial: (e^{i x_j} - e^{-i x_j}) / (2i).
template <class R>
TrigPoly<R> sin_poly(int axis);

/// z_j = sin^2 x_j = (2 - e^{2i x_j} - e^{-2i x_j}) / 4.
template <class R>
TrigPoly<R> sin2_poly(int axis);

extern template QPoly sin_poly<GaussRational>(int);
extern template CPoly sin_poly<Complex>(int);
extern template QPoly sin2_poly<GaussRational>(int);
extern template CPoly sin2_poly<Complex>(int);

// --- samples <-> coefficients ----------------------------------------------

/// Index of grid point (i1, i2, i3) in a flattened N^3 sample array; the
/// point is x = 2 pi (i1, i2, i3) / N.
inline std::size_t grid_index(int n, int i1, int i2, int i3) {
  return (static_cast<std::size_t>(i1) * n + i2) * n + i3;
}

/// Coefficients of the trigonometric interpolant of N^3 samples. Exact for
/// inputs whose frequencies satisfy |n_j| < N/2; higher frequencies alias
/// onto n mod N. Throws PreconditionError when N is not a power of two, when
/// the sample count is not N^3, or when `bandwidth_hint` is given and
/// N < 2 * bandwidth_hint + 2.
CPoly from_samples(std::span<const Complex> samples, int n,
                   std::optional<int> bandwidth_hint = std::nullopt,
                   double prune_relative = 1e-12);

/// Values of p on the N^3 grid (inverse of from_samples for band-limited p).
std::vector<Complex> to_samples(const CPoly& p, int n);

// --- JSON --------------------------------------------------------------------

nlohmann::json to_json_value(const CPoly& p);
CPoly cpoly_from_json(const nlohmann::json& j);
nlohmann::json to_json_value(const CMatrix& m);
CMatrix cmatrix_from_json(const nlohmann::json& j, int rows, int cols);

}  // namespace maxlat
