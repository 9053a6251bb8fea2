#include "maxlat/trigpoly.hpp"

#include <set>

#include "maxlat/grid_fft.hpp"

namespace maxlat {

bool in_g_star(const Vec3& xi) {
  const Vec3 a{std::abs(xi[0]), std::abs(xi[1]), std::abs(xi[2])};
  for (int i = 0; i < 3; ++i) {
    if (a[i] > a[(i + 1) % 3] && a[i] > a[(i + 2) % 3]) return true;
  }
  return false;
}

bool Direction::in_g_star() const { return maxlat::in_g_star(xi); }

double Direction::linf() const {
  return std::max({std::abs(xi[0]), std::abs(xi[1]), std::abs(xi[2])});
}

CPoly to_complex(const QPoly& p) {
  return p.map_coeffs([](const GaussRational& c) { return c.to_complex(); });
}

CMatrix to_complex(const QMatrix& m) {
  return m.map_coeffs([](const GaussRational& c) { return c.to_complex(); });
}

namespace {

template <class R>
R half_imaginary(int sign);

template <>
GaussRational half_imaginary<GaussRational>(int sign) {
  return GaussRational(mpq_class(0), mpq_class(sign, 2));
}
template <>
Complex half_imaginary<Complex>(int sign) {
  return Complex(0.0, 0.5 * sign);
}

template <class R>
R quarter(int sign);

template <>
GaussRational quarter<GaussRational>(int sign) {
  return GaussRational(mpq_class(sign, 4));
}
template <>
Complex quarter<Complex>(int sign) {
  return Complex(0.25 * sign, 0.0);
}

Freq unit(int axis, int scale) {
  Freq n{0, 0, 0};
  n[axis] = scale;
  return n;
}

void check_axis(int axis) {
  if (axis < 0 || axis > 2) throw ShapeError("axis must be 0, 1 or 2");
}

}  // namespace

template <class R>
TrigPoly<R> sin_poly(int axis) {
  check_axis(axis);
  typename TrigPoly<R>::Map m;
  m.emplace(unit(axis, 1), half_imaginary<R>(-1));
  m.emplace(unit(axis, -1), half_imaginary<R>(1));
  return TrigPoly<R>(std::move(m));
}

template <class R>
TrigPoly<R> sin2_poly(int axis) {
  check_axis(axis);
  typename TrigPoly<R>::Map m;
  m.emplace(Freq{0, 0, 0}, quarter<R>(2));
  m.emplace(unit(axis, 2), quarter<R>(-1));
  m.emplace(unit(axis, -2), quarter<R>(-1));
  return TrigPoly<R>(std::move(m));
}

template QPoly sin_poly<GaussRational>(int);
template CPoly sin_poly<Complex>(int);
template QPoly sin2_poly<GaussRational>(int);
template CPoly sin2_poly<Complex>(int);

CPoly from_samples(std::span<const Complex> samples, int n, std::optional<int> bandwidth_hint,
                   double prune_relative) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw PreconditionError("grid size must be a power of two >= 2, got " + std::to_string(n));
  }
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  if (samples.size() != total) {
    throw ShapeError("expected " + std::to_string(total) + " samples, got " +
                     std::to_string(samples.size()));
  }
  if (bandwidth_hint && n < 2 * *bandwidth_hint + 2) {
    throw PreconditionError("grid size " + std::to_string(n) + " too small for bandwidth " +
                            std::to_string(*bandwidth_hint) + " (need N >= 2*bandwidth+2)");
  }
  std::vector<Complex> data(samples.begin(), samples.end());
  fft3_forward(data, n);
  const double scale = 1.0 / static_cast<double>(total);
  auto freq = [n](int k) { return k < n / 2 ? k : k - n; };
  CPoly::Map m;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Complex v = data[grid_index(n, a, b, c)] * scale;
        if (v != Complex(0.0, 0.0)) m.emplace(Freq{freq(a), freq(b), freq(c)}, v);
      }
  return CPoly(std::move(m), prune_relative);
}

std::vector<Complex> to_samples(const CPoly& p, int n) {
  if (n < 1) throw PreconditionError("grid size must be positive");
  std::vector<Complex> data(static_cast<std::size_t>(n) * n * n);
  auto wrap = [n](int k) { return ((k % n) + n) % n; };
  for (const auto& [f, c] : p.terms()) data[grid_index(n, wrap(f[0]), wrap(f[1]), wrap(f[2]))] += c;
  fft3_backward(data, n);
  return data;
}

nlohmann::json to_json_value(const CPoly& p) {
  auto out = nlohmann::json::array();
  for (const auto& [n, c] : p.terms()) {
    out.push_back({{"n", n}, {"re", c.real()}, {"im", c.imag()}});
  }
  return out;
}

CPoly cpoly_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ShapeError("trigonometric polynomial JSON must be a list");
  CPoly::Map m;
  for (const auto& t : j) {
    const Freq n = t.at("n").get<Freq>();
    Complex c(t.at("re").get<double>(), t.at("im").get<double>());
    auto [it, inserted] = m.try_emplace(n, c);
    if (!inserted) it->second += c;
  }
  return CPoly(std::move(m), 0.0);
}

nlohmann::json to_json_value(const CMatrix& m) {
  std::set<Freq> support;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      for (const auto& [n, c] : m(i, j).terms()) support.insert(n);
  auto out = nlohmann::json::array();
  for (const auto& n : support) {
    std::vector<double> re, im;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) {
        const Complex c = m(i, j).coeff(n);
        re.push_back(c.real());
        im.push_back(c.imag());
      }
    out.push_back({{"n", n}, {"re", re}, {"im", im}});
  }
  return out;
}

CMatrix cmatrix_from_json(const nlohmann::json& j, int rows, int cols) {
  if (!j.is_array()) throw ShapeError("matrix polynomial JSON must be a list");
  std::vector<CPoly::Map> entries(static_cast<std::size_t>(rows) * cols);
  for (const auto& t : j) {
    const Freq n = t.at("n").get<Freq>();
    const auto re = t.at("re").get<std::vector<double>>();
    const auto im = t.at("im").get<std::vector<double>>();
    if (re.size() != entries.size() || im.size() != entries.size()) {
      throw ShapeError("matrix coefficient has wrong number of entries");
    }
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const Complex c(re[k], im[k]);
      if (c == Complex(0.0, 0.0)) continue;
      auto [it, inserted] = entries[k].try_emplace(n, c);
      if (!inserted) it->second += c;
    }
  }
  CMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int jj = 0; jj < cols; ++jj) out(i, jj) = CPoly(std::move(entries[i * cols + jj]), 0.0);
  return out;
}

}  // namespace maxlat
