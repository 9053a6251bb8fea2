#include "maxlat/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxlat/errors.hpp"
#include "maxlat/parallel.hpp"
#include "maxlat/symbol.hpp"

namespace maxlat {

Taus taus(const ParamsT<double>& p, const Vec3& z) {
  for (double v : z) {
    if (!(v >= 0.0)) throw DomainError("tau is defined on z >= 0 only");
  }
  const double s = psi0(p, z);
  const double k = std::max(0.0, k0(p, z));  // K0 >= 0 on the cone; clip rounding
  const double r = std::sqrt(k);
  return {s + r, s - r};
}

Taus taus(const ParamsT<double>& p, const CVec3& z) {
  Vec3 real{};
  for (int i = 0; i < 3; ++i) {
    if (z[i].imag() != 0.0) throw DomainError("tau requested at complex z");
    real[i] = z[i].real();
  }
  return taus(p, real);
}

FormValues eval_forms(const ParamsT<double>& p, const CVec3& z, double lambda) {
  FormValues out;
  out.psi0 = psi0(p, z);
  out.k0 = k0(p, z);
  out.p = p_value(p, z, Complex(lambda));
  const bool real_cone = std::all_of(z.begin(), z.end(), [](const Complex& v) {
    return v.imag() == 0.0 && v.real() >= 0.0;
  });
  if (real_cone) out.tau = taus(p, z);
  return out;
}

std::optional<LinearTaus> linear_taus(const ExactParams& p) {
  if (classify(p.beta) == MediaClass::B3) return std::nullopt;
  LinearTaus out;
  for (int i = 0; i < 3; ++i) {
    const Rational half = abs(p.beta[i]) / 2;
    out.plus[i] = p.alpha[i] + half;
    out.minus[i] = p.alpha[i] - half;
  }
  return out;
}

double lambda_plus(const Media& media) {
  const auto params = derive_params(media);
  if (params.cls == MediaClass::B0) return std::sqrt(psi0(params, Vec3{1, 1, 1}));
  const auto norm = derive_params(normalize_a0(media).media);
  return std::sqrt(taus(norm, Vec3{1, 1, 1}).plus);
}

double lambda_minus(const Media& media) {
  const auto params = derive_params(media);
  if (params.cls == MediaClass::B0) return std::sqrt(psi0(params, Vec3{1, 1, 1}));
  const auto norm = derive_params(normalize_a0(media).media);
  return std::sqrt(std::max(taus(norm, Vec3{1, 1, 1}).minus, taus(norm, Vec3{1, 1, 0}).minus));
}

LambdaExtrema lambda_extrema(const Media& media, int grid, double tol) {
  LambdaExtrema out;
  out.lambda_plus = lambda_plus(media);
  out.lambda_minus = lambda_minus(media);
  out.grid = grid;
  if (grid <= 0) return out;
  if (grid < 2) throw PreconditionError("grid needs at least two points per axis");

  const auto params = derive_params(media);
  struct Best {
    double plus = -1.0, minus = -1.0;
    Vec3 at_plus{}, at_minus{};
  };
  std::vector<Best> slots(grid);
  const double h = 1.0 / (grid - 1);
  parallel_for(grid, [&](std::size_t a) {
    Best best;
    for (int b = 0; b < grid; ++b) {
      for (int c = 0; c < grid; ++c) {
        const Vec3 z{a * h, b * h, c * h};
        const Taus t = taus(params, z);
        if (t.plus > best.plus) best.plus = t.plus, best.at_plus = z;
        if (t.minus > best.minus) best.minus = t.minus, best.at_minus = z;
      }
    }
    slots[a] = best;
  });
  Best best;
  for (const auto& s : slots) {
    if (s.plus > best.plus) best.plus = s.plus, best.at_plus = s.at_plus;
    if (s.minus > best.minus) best.minus = s.minus, best.at_minus = s.at_minus;
  }
  out.grid_plus = std::sqrt(best.plus);
  out.grid_minus = std::sqrt(best.minus);
  out.argmax_plus = best.at_plus;
  out.argmax_minus = best.at_minus;
  const bool ok_plus = std::abs(out.grid_plus - out.lambda_plus) <= tol * out.lambda_plus;
  const bool ok_minus = std::abs(out.grid_minus - out.lambda_minus) <= tol * out.lambda_minus;
  out.agree = ok_plus && ok_minus;
  if (!ok_plus) {
    out.note += "grid lambda+ " + std::to_string(out.grid_plus) + " differs from closed form " +
                std::to_string(out.lambda_plus) + "; ";
  }
  if (!ok_minus) {
    out.note += "grid lambda- " + std::to_string(out.grid_minus) + " differs from closed form " +
                std::to_string(out.lambda_minus) + "; ";
  }
  return out;
}

std::string to_string(QuadricCase c) {
  switch (c) {
    case QuadricCase::SingularPlane:
      return "singular-plane";
    case QuadricCase::RegularConnected:
      return "regular-connected";
    case QuadricCase::TwoSheetsRegular:
      return "two-sheets-regular";
    case QuadricCase::TwoSheetsSingularLine:
      return "two-sheets-singular-line";
  }
  return "?";
}

Eigen::Matrix3d quadric_matrix(const ParamsT<double>& p) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      a(i, j) = p.alpha[i] * p.alpha[j] + (i == j ? -1.0 : 1.0) * p.beta[i] * p.beta[j] / 4.0;
  return a;
}

std::array<RVec3, 3> quadric_matrix_exact(const ExactParams& p) {
  std::array<RVec3, 3> a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      a[i][j] = p.alpha[i] * p.alpha[j] + (i == j ? -1 : 1) * p.beta[i] * p.beta[j] / 4;
  return a;
}

std::optional<RVec3> z_star_exact(const ExactParams& p) {
  if (classify(p.beta) != MediaClass::B12) return std::nullopt;
  RVec3 z{Rational(0), Rational(0), Rational(0)};
  for (int k = 0; k < 3; ++k) {
    if (sgn(p.beta[k]) == 0) z[k] = 1 / p.alpha[k];
  }
  return z;
}

QuadricModel quadric_model(const Media& media, double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw DomainError("quadric model needs a finite nonzero lambda");
  }
  const auto params = derive_params(media);
  const Eigen::Vector3d alpha(params.alpha[0], params.alpha[1], params.alpha[2]);
  const double l2 = lambda * lambda;
  QuadricModel q;
  q.A = quadric_matrix(params);
  q.b = -2.0 * l2 * alpha;
  q.c = l2 * l2;

  switch (params.cls) {
    case MediaClass::B0:
      q.rank = 1;
      q.signature = 1;
      q.b_in_image = true;
      q.z_star = alpha / alpha.squaredNorm();
      break;
    case MediaClass::B3:
      q.rank = 2;
      q.signature = 1;
      q.b_in_image = false;
      break;
    case MediaClass::B12: {
      q.rank = 2;
      q.signature = 1;
      q.b_in_image = true;
      Eigen::Vector3d zs = Eigen::Vector3d::Zero();
      for (int k = 0; k < 3; ++k)
        if (params.beta[k] == 0.0) zs[k] = 1.0 / params.alpha[k];
      q.z_star = zs;
      break;
    }
  }
  if (q.z_star) {
    q.z0 = l2 * *q.z_star;
    q.c_star = q.z0->dot(q.A * *q.z0);
  }
  if (params.cls == MediaClass::B0) {
    q.kind = QuadricCase::SingularPlane;
  } else if (!q.b_in_image) {
    q.kind = QuadricCase::RegularConnected;
  } else {
    const bool equal = std::abs(*q.c_star - q.c) <= 1e-12 * std::abs(q.c);
    q.kind = equal ? QuadricCase::TwoSheetsSingularLine : QuadricCase::TwoSheetsRegular;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(q.A);
  const auto ev = solver.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(ev[i]) > 1e-10 * scale) {
      ++q.numeric_rank;
      if (ev[i] > 0) ++q.numeric_signature;
    }
  }
  q.det_relative = std::abs(q.A.determinant()) / std::pow(scale, 3);
  q.numeric_consistent = q.numeric_rank == q.rank && q.numeric_signature == q.signature;
  if (q.z0) {
    const double res = (q.A * *q.z0 + q.b / 2.0).norm();
    q.numeric_consistent = q.numeric_consistent && res <= 1e-10 * q.b.norm();
  }
  return q;
}

SpectrumSummary spectrum_summary(const Media& media, int grid, int bins) {
  if (grid < 16) throw PreconditionError("spectrum summary needs grid >= 16");
  if (bins < 1) throw PreconditionError("histogram needs at least one bin");
  validate(media);
  SpectrumSummary out;
  out.grid = grid;
  out.lambda_plus = lambda_plus(media);

  Eigen::Matrix<double, 6, 1> sq;
  for (int i = 0; i < 3; ++i) {
    sq[i] = std::sqrt(media.eps[i]);
    sq[i + 3] = std::sqrt(media.mu[i]);
  }
  const std::size_t plane = static_cast<std::size_t>(grid) * grid;
  std::vector<double> all(static_cast<std::size_t>(grid) * plane * 6);
  std::vector<char> zero_ok(grid, 1);
  const double step = 2.0 * std::numbers::pi / grid;
  parallel_for(grid, [&](std::size_t a) {
    Eigen::SelfAdjointEigenSolver<Mat6> solver;
    for (int b = 0; b < grid; ++b) {
      for (int c = 0; c < grid; ++c) {
        const Vec3 x{a * step, b * step, c * step};
        solver.compute(sq.asDiagonal() * h0_symbol(x) * sq.asDiagonal(), Eigen::EigenvaluesOnly);
        const auto ev = solver.eigenvalues();
        const double radius = ev.cwiseAbs().maxCoeff();
        int zeros = 0;
        for (int k = 0; k < 6; ++k) {
          all[(a * plane + b * grid + c) * 6 + k] = ev[k];
          zeros += std::abs(ev[k]) <= 1e-9 * std::max(1.0, radius);
        }
        if (zeros < 2) zero_ok[a] = 0;
      }
    }
  });
  out.double_zero_everywhere = std::all_of(zero_ok.begin(), zero_ok.end(), [](char v) { return v; });
  std::sort(all.begin(), all.end());
  out.min_eigenvalue = all.front();
  out.max_eigenvalue = all.back();

  const double lp = out.lambda_plus;
  double prev = -lp;
  for (double v : all) {
    if (v < -lp || v > lp) continue;
    out.max_gap = std::max(out.max_gap, v - prev);
    prev = v;
  }
  out.max_gap = std::max(out.max_gap, lp - prev);

  out.histogram.assign(bins, 0);
  for (int k = 0; k <= bins; ++k) out.bin_edges.push_back(-lp + 2.0 * lp * k / bins);
  for (double v : all) {
    int k = static_cast<int>(std::floor((v + lp) / (2.0 * lp) * bins));
    out.histogram[std::clamp(k, 0, bins - 1)] += 1;
  }
  return out;
}

nlohmann::json to_json(const LambdaExtrema& e) {
  nlohmann::json j{{"lambda_plus", e.lambda_plus}, {"lambda_minus", e.lambda_minus}};
  if (e.grid > 0) {
    j["grid"] = e.grid;
    j["grid_lambda_plus"] = e.grid_plus;
    j["grid_lambda_minus"] = e.grid_minus;
    j["argmax_plus"] = e.argmax_plus;
    j["argmax_minus"] = e.argmax_minus;
    j["agree"] = e.agree;
    if (!e.note.empty()) j["note"] = e.note;
  }
  return j;
}

namespace {

std::vector<double> vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

}  // namespace

nlohmann::json to_json(const QuadricModel& q) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) a.push_back({q.A(i, 0), q.A(i, 1), q.A(i, 2)});
  nlohmann::json j{{"A", a},
                   {"b", vec(q.b)},
                   {"c", q.c},
                   {"rank", q.rank},
                   {"signature", q.signature},
                   {"b_in_image", q.b_in_image},
                   {"quadric_case", to_string(q.kind)},
                   {"numeric_consistent", q.numeric_consistent}};
  if (q.z_star) j["z_star"] = vec(*q.z_star);
  if (q.z0) j["z0"] = vec(*q.z0);
  if (q.c_star) j["c_star"] = *q.c_star;
  return j;
}

nlohmann::json to_json(const SpectrumSummary& s) {
  return {{"grid", s.grid},
          {"min_eigenvalue", s.min_eigenvalue},
          {"max_eigenvalue", s.max_eigenvalue},
          {"lambda_plus", s.lambda_plus},
          {"max_gap", s.max_gap},
          {"double_zero_everywhere", s.double_zero_everywhere},
          {"bin_edges", s.bin_edges},
          {"histogram", s.histogram}};
}

std::optional<TauPolys> tau_polys(const ExactParams& p) {
  const auto lin = linear_taus(p);
  if (!lin) return std::nullopt;
  TauPolys out;
  for (int i = 0; i < 3; ++i) {
    out.plus += GaussRational(lin->plus[i]) * sin2_poly<GaussRational>(i);
    out.minus += GaussRational(lin->minus[i]) * sin2_poly<GaussRational>(i);
  }
  return out;
}

QPoly psi0_poly(const ExactParams& p) {
  QPoly out;
  for (int i = 0; i < 3; ++i) out += GaussRational(p.alpha[i]) * sin2_poly<GaussRational>(i);
  return out;
}

QPoly k0_poly(const ExactParams& p) {
  std::array<QPoly, 3> w;
  for (int i = 0; i < 3; ++i) w[i] = GaussRational(p.beta[i]) * sin2_poly<GaussRational>(i);
  const QPoly squares = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  const QPoly cross = w[0] * w[1] + w[0] * w[2] + w[1] * w[2];
  return GaussRational(Rational(1, 4)) * squares - GaussRational(Rational(1, 2)) * cross;
}

}  // namespace maxlat
