#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <gmpxx.h>

namespace maxlat {

using Complex = std::complex<double>;

/// Exact complex rational a + ib.
class GaussRational {
 public:
  GaussRational() = default;
  // mpq_class(num, den) is not reduced on construction; equality needs canonical form.
  GaussRational(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT: implicit by intent
  GaussRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  GaussRational(int re) : re_(re) {}  // NOLINT

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  GaussRational conj() const { return {re_, -im_}; }
  mpq_class norm2() const { return mpq_class(re_ * re_ + im_ * im_); }
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Univariate polynomial in a formal parameter t; coeffs()[k] multiplies t^k.
/// Trailing zero coefficients are always trimmed.
template <class R>
class TPoly {
 public:
  TPoly() = default;
  TPoly(R constant) : c_{std::move(constant)} { trim(); }  // NOLINT
  explicit TPoly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

  static TPoly t() { return TPoly(std::vector<R>{R(0), R(1)}); }

  const std::vector<R>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  R coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : R(0);
  }
  /// Sum_{k>=shift} c_k t^(k-shift).
  TPoly shifted_down(int shift) const {
    if (shift >= static_cast<int>(c_.size())) return {};
    return TPoly(std::vector<R>(c_.begin() + shift, c_.end()));
  }
  R evaluate(const R& t) const {
    R acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  TPoly& operator+=(const TPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  TPoly& operator-=(const TPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend TPoly operator*(const TPoly& a, const TPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<R> out(a.c_.size() + b.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return TPoly(std::move(out));
  }
  TPoly& operator*=(const TPoly& o) { return *this = *this * o; }
  friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
  friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }
  friend TPoly operator-(const TPoly& a) {
    TPoly out = a;
    for (auto& c : out.c_) c = -c;
    return out;
  }
  friend bool operator==(const TPoly& a, const TPoly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<R> c_;
};

/// Per-ring operations used by the sparse containers. `exact` rings prune
/// exact zeros only; inexact rings prune relative to the largest magnitude.
template <class R>
struct Ring;

template <>
struct Ring<Complex> {
  static constexpr bool exact = false;
  static bool is_zero(const Complex& c) { return c == Complex(0.0, 0.0); }
  static double magnitude(const Complex& c) { return std::abs(c); }
  static Complex conj(const Complex& c) { return std::conj(c); }
  static Complex to_complex(const Complex& c) { return c; }
};

template <>
struct Ring<GaussRational> {
  static constexpr bool exact = true;
  static bool is_zero(const GaussRational& c) { return c.is_zero(); }
  static double magnitude(const GaussRational& c) { return std::abs(c.to_complex()); }
  static GaussRational conj(const GaussRational& c) { return c.conj(); }
  static Complex to_complex(const GaussRational& c) { return c.to_complex(); }
};

template <class R>
struct Ring<TPoly<R>> {
  static constexpr bool exact = Ring<R>::exact;
  static bool is_zero(const TPoly<R>& p) { return p.is_zero(); }
  static double magnitude(const TPoly<R>& p) {
    double m = 0.0;
    for (const auto& c : p.coeffs()) m = std::max(m, Ring<R>::magnitude(c));
    return m;
  }
  static TPoly<R> conj(const TPoly<R>& p) {
    std::vector<R> out;
    out.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) out.push_back(Ring<R>::conj(c));
    return TPoly<R>(std::move(out));
  }
};

template <class R>
void TPoly<R>::trim() {
  while (!c_.empty() && Ring<R>::is_zero(c_.back())) c_.pop_back();
}

}  // namespace maxlat
