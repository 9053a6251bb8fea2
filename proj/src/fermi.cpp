#include "maxlat/fermi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "maxlat/errors.hpp"
#include "maxlat/parallel.hpp"
#include "maxlat/symbol.hpp"

namespace maxlat {

std::string to_string(Sheet s) {
  switch (s) {
    case Sheet::Plus:
      return "plus";
    case Sheet::Minus:
      return "minus";
    case Sheet::Degenerate:
      return "degenerate";
  }
  return "?";
}

long FermiSample::count(Sheet s) const {
  return std::count_if(points.begin(), points.end(),
                       [s](const FermiPoint& p) { return p.sheet == s; });
}

bool FermiSample::empty(Sheet s) const { return count(s) == 0; }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Evaluator {
  DerivedParams params;
  double l2;
  double beta_scale;

  double gap(const Vec3& x, bool plus) const {
    const Taus t = taus(params, z_of(x));
    return (plus ? t.plus : t.minus) - l2;
  }
  Sheet tag(const Vec3& x, bool plus) const {
    const Vec3 z = z_of(x);
    const double zz = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    if (k0(params, z) <= 1e-10 * (1.0 + zz) * beta_scale) return Sheet::Degenerate;
    return plus ? Sheet::Plus : Sheet::Minus;
  }
  double residual(const Vec3& x, double lambda) const {
    const Vec3 z = z_of(x);
    const double s = psi0(params, z);
    const double k = k0(params, z);
    const double scale = l2 * (l2 * l2 + 2.0 * l2 * std::abs(s) + s * s + std::abs(k));
    return std::abs(p_value(params, z, lambda)) / scale;
  }
};

// Root of fn on [a, b] given a sign change, by bisection down to tol.
template <class Fn>
double bisect(Fn&& fn, double a, double b, double fa, double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

FermiSample sample_surface(const Media& media, double lambda, int grid,
                           const FermiOptions& options) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("lambda must be nonzero");
  if (grid < 2) throw PreconditionError("grid must be at least 2");
  FermiSample out;
  out.lambda = lambda;
  out.grid = grid;
  out.quadric_case = to_string(quadric_model(media, lambda).kind);

  Evaluator ev{derive_params(media), lambda * lambda, 0.0};
  for (double b : ev.params.beta) ev.beta_scale = std::max(ev.beta_scale, b * b);
  const double zero_tol = 1e-13 * std::max(1.0, ev.l2);
  const double step = kTwoPi / grid;

  struct Row {
    std::vector<FermiPoint> points;
    double gap_plus = std::numeric_limits<double>::infinity();
    double gap_minus = std::numeric_limits<double>::infinity();
  };
  std::vector<Row> rows(grid);
  parallel_for(grid, [&](std::size_t a) {
    Row& row = rows[a];
    std::vector<double> f(grid + 1);
    for (int b = 0; b < grid; ++b) {
      const double x1 = a * step;
      const double x2 = b * step;
      std::vector<FermiPoint> found;
      for (bool plus : {true, false}) {
        for (int c = 0; c < grid; ++c) f[c] = ev.gap({x1, x2, c * step}, plus);
        f[grid] = f[0];
        double& gap = plus ? row.gap_plus : row.gap_minus;
        for (int c = 0; c < grid; ++c) gap = std::min(gap, std::abs(f[c]));
        auto fn = [&](double x3) { return ev.gap({x1, x2, x3}, plus); };
        for (int c = 0; c < grid; ++c) {
          double x3;
          if (std::abs(f[c]) <= zero_tol) {
            x3 = c * step;
          } else if (std::abs(f[c + 1]) > zero_tol && (f[c] < 0) != (f[c + 1] < 0)) {
            x3 = bisect(fn, c * step, (c + 1) * step, f[c], options.tol);
          } else {
            continue;
          }
          const Vec3 x{x1, x2, x3};
          found.push_back({x, ev.tag(x, plus), ev.residual(x, lambda), false});
        }
      }
      // A degenerate root shows up on both sheets; keep one copy.
      std::vector<FermiPoint> kept;
      for (const auto& p : found) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const FermiPoint& q) {
          return p.sheet == Sheet::Degenerate && q.sheet == Sheet::Degenerate &&
                 std::abs(p.x[2] - q.x[2]) <= 1e3 * options.tol;
        });
        if (!dup) kept.push_back(p);
      }
      std::sort(kept.begin(), kept.end(),
                [](const FermiPoint& p, const FermiPoint& q) { return p.x[2] < q.x[2]; });
      for (auto& p : kept)
        if (p.residual < options.point_tol) row.points.push_back(p);
    }
  });

  out.min_gap_plus = std::numeric_limits<double>::infinity();
  out.min_gap_minus = std::numeric_limits<double>::infinity();
  for (auto& row : rows) {
    out.min_gap_plus = std::min(out.min_gap_plus, row.gap_plus);
    out.min_gap_minus = std::min(out.min_gap_minus, row.gap_minus);
    for (auto& p : row.points) {
      out.fiber_count[static_cast<int>(p.sheet)] += 1;
      out.points.push_back(p);
    }
  }

  if (options.diagonal) {
    const int samples = std::max(64, grid);
    const double h = 0.5 * std::numbers::pi / samples;
    for (bool plus : {true, false}) {
      auto fn = [&](double s) { return ev.gap({s, s, s}, plus); };
      double prev = fn(0.0);
      for (int k = 1; k <= samples; ++k) {
        const double cur = fn(k * h);
        double s;
        if (std::abs(prev) <= zero_tol && k == 1) {
          s = 0.0;
        } else if (std::abs(cur) <= zero_tol) {
          s = k * h;
        } else if (std::abs(prev) > zero_tol && (prev < 0) != (cur < 0)) {
          s = bisect(fn, (k - 1) * h, k * h, prev, options.tol);
        } else {
          prev = cur;
          continue;
        }
        const Vec3 x{s, s, s};
        FermiPoint p{x, ev.tag(x, plus), ev.residual(x, lambda), true};
        if (p.residual < options.point_tol) out.points.push_back(p);
        prev = cur;
      }
    }
  }

  for (const auto& p : out.points) out.max_residual = std::max(out.max_residual, p.residual);
  return out;
}

namespace {

// All x in [0, 2 pi) with sin^2 x = t, t in [0, 1].
std::vector<double> arcsin2_branches(double t) {
  const double a = std::asin(std::sqrt(std::clamp(t, 0.0, 1.0)));
  std::vector<double> out;
  for (double v : {a, std::numbers::pi - a, std::numbers::pi + a, kTwoPi - a}) {
    v = std::fmod(v, kTwoPi);
    if (std::none_of(out.begin(), out.end(), [v](double w) { return std::abs(v - w) < 1e-12; }))
      out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SingularSet singular_points(const Media& media, double lambda, int grid) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("lambda must be nonzero");
  const auto params = derive_params(media);
  const double l2 = lambda * lambda;
  SingularSet out;
  switch (params.cls) {
    case MediaClass::B3:
      out.tag = "empty";
      out.note = "class B3: b is not in the image of A, so the singular set is empty";
      return out;
    case MediaClass::B12: {
      int k = 0;
      while (params.beta[k] != 0.0) ++k;
      const double t = l2 / params.alpha[k];
      if (t > 1.0) {
        out.tag = "empty";
        out.note = "lambda^2/alpha_k = " + std::to_string(t) + " > 1: z0 lies outside [0,1]^3";
        return out;
      }
      out.tag = "points";
      const std::vector<double> zero = {0.0, std::numbers::pi};
      const auto branch = arcsin2_branches(t);
      for (double u : (k == 0 ? branch : zero))
        for (double v : (k == 1 ? branch : zero))
          for (double w : (k == 2 ? branch : zero)) out.points.push_back({u, v, w});
      return out;
    }
    case MediaClass::B0: {
      if (grid < 2) throw PreconditionError("grid must be at least 2");
      out.tag = "singular-plane";
      const double h = 0.5 * std::numbers::pi / (grid - 1);
      for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
          const double z1 = std::pow(std::sin(a * h), 2);
          const double z2 = std::pow(std::sin(b * h), 2);
          const double z3 = (l2 - params.alpha[0] * z1 - params.alpha[1] * z2) / params.alpha[2];
          if (z3 < 0.0 || z3 > 1.0) continue;
          out.points.push_back({a * h, b * h, std::asin(std::sqrt(z3))});
        }
      }
      if (out.points.empty()) out.note = "plane alpha.z = lambda^2 misses [0,1]^3";
      return out;
    }
  }
  return out;
}

std::string to_csv(const FermiSample& s) {
  std::ostringstream os;
  os.precision(17);
  os << "x1,x2,x3,sheet,residual\n";
  for (const auto& p : s.points) {
    os << p.x[0] << ',' << p.x[1] << ',' << p.x[2] << ',' << to_string(p.sheet) << ','
       << p.residual << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const FermiSample& s) {
  return {{"lambda", s.lambda},
          {"grid", s.grid},
          {"quadric_case", s.quadric_case},
          {"counts",
           {{"plus", s.count(Sheet::Plus)},
            {"minus", s.count(Sheet::Minus)},
            {"degenerate", s.count(Sheet::Degenerate)}}},
          {"fiber_counts",
           {{"plus", s.fiber_count[0]}, {"minus", s.fiber_count[1]}, {"degenerate", s.fiber_count[2]}}},
          {"empty",
           {{"plus", s.empty(Sheet::Plus)},
            {"minus", s.empty(Sheet::Minus)},
            {"all", s.points.empty()}}},
          {"min_gap_plus", s.min_gap_plus},
          {"min_gap_minus", s.min_gap_minus},
          {"max_residual", s.max_residual}};
}

nlohmann::json to_json(const SingularSet& s) {
  nlohmann::json j{{"tag", s.tag}, {"count", s.points.size()}, {"points", s.points}};
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

}  // namespace maxlat
