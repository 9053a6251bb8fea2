#pragma once

// Closed-form dispersion quantities, extremal levels and the quadric model.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "maxlat/media.hpp"
#include "maxlat/trigpoly.hpp"

namespace maxlat {

using CVec3 = std::array<Complex, 3>;

/// Psi0 = alpha . z
template <class T, class P>
T psi0(const ParamsT<P>& p, const std::array<T, 3>& z) {
  return T(p.alpha[0]) * z[0] + T(p.alpha[1]) * z[1] + T(p.alpha[2]) * z[2];
}

/// K0 = 1/4 sum (beta_i z_i)^2 - 1/2 sum_{i<j} beta_i beta_j z_i z_j
template <class T, class P>
T k0(const ParamsT<P>& p, const std::array<T, 3>& z) {
  std::array<T, 3> w{T(p.beta[0]) * z[0], T(p.beta[1]) * z[1], T(p.beta[2]) * z[2]};
  T squares = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  T cross = w[0] * w[1] + w[0] * w[2] + w[1] * w[2];
  return squares / T(4) - cross / T(2);
}

/// p(z; lambda) = lambda^2 (lambda^4 - 2 lambda^2 Psi0 + Psi0^2 - K0); no square roots.
template <class T, class P>
T p_value(const ParamsT<P>& p, const std::array<T, 3>& z, const T& lambda) {
  const T l2 = lambda * lambda;
  const T s = psi0(p, z);
  return l2 * (l2 * l2 - T(2) * l2 * s + s * s - k0(p, z));
}

struct Taus {
  double plus = 0.0;
  double minus = 0.0;
};

/// tau^(+-) = Psi0 +- sqrt(K0) at real z >= 0. DomainError for negative z.
Taus taus(const ParamsT<double>& p, const Vec3& z);

/// Same at complex z; DomainError unless z is real and nonnegative.
Taus taus(const ParamsT<double>& p, const CVec3& z);

struct FormValues {
  Complex psi0;
  Complex k0;
  Complex p;
  std::optional<Taus> tau;  // only for real nonnegative z
};

FormValues eval_forms(const ParamsT<double>& p, const CVec3& z, double lambda);

/// For classes B0 and B12 the square root of K0 is linear on the cone z >= 0
/// and tau^(+-) = sum (alpha_i +- |beta_i|/2) z_i. Empty for class B3.
struct LinearTaus {
  RVec3 plus;
  RVec3 minus;
};
std::optional<LinearTaus> linear_taus(const ExactParams& p);

struct LambdaExtrema {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double grid_plus = 0.0;
  double grid_minus = 0.0;
  Vec3 argmax_plus{};   // grid maximiser, in the caller's axes
  Vec3 argmax_minus{};
  int grid = 0;
  bool agree = true;
  std::string note;
};

/// Closed forms lambda+ = sqrt(tau+(1,1,1)) and
/// lambda- = max(sqrt(tau-(1,1,1)), sqrt(tau-(1,1,0))) evaluated in the (A0)
/// frame, compared with a uniform grid maximum over [0,1]^3. grid = 0 skips
/// the comparison. On disagreement beyond tol * value the grid value is
/// reported and the discrepancy noted.
LambdaExtrema lambda_extrema(const Media& media, int grid = 201, double tol = 5e-3);

/// Closed forms only (no grid).
double lambda_plus(const Media& media);
double lambda_minus(const Media& media);

enum class QuadricCase {
  SingularPlane,          // rank one, P = (alpha.z - lambda^2)^2
  RegularConnected,       // b outside Im A
  TwoSheetsRegular,       // b in Im A, c* != c
  TwoSheetsSingularLine,  // b in Im A, c* == c
};
std::string to_string(QuadricCase c);

struct QuadricModel {
  Eigen::Matrix3d A;
  Eigen::Vector3d b;
  double c = 0.0;
  int rank = 0;
  int signature = 0;  // positive inertia index
  bool b_in_image = false;
  std::optional<Eigen::Vector3d> z_star;  // A z* = alpha, z* in Im A
  std::optional<Eigen::Vector3d> z0;
  std::optional<double> c_star;
  QuadricCase kind = QuadricCase::RegularConnected;
  // numeric cross-check of the structural rank and signature
  int numeric_rank = 0;
  int numeric_signature = 0;
  double det_relative = 0.0;
  bool numeric_consistent = true;
};

/// A_ij = alpha_i alpha_j + beta_i beta_j / 4 (diagonal gamma_i).
Eigen::Matrix3d quadric_matrix(const ParamsT<double>& p);
std::array<RVec3, 3> quadric_matrix_exact(const ExactParams& p);

/// z* = e_k / alpha_k where beta_k = 0 (class B12); empty otherwise.
std::optional<RVec3> z_star_exact(const ExactParams& p);

QuadricModel quadric_model(const Media& media, double lambda);

struct SpectrumSummary {
  int grid = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double lambda_plus = 0.0;
  double max_gap = 0.0;  // largest gap in the sorted grid spectrum over [-lambda+, lambda+]
  bool double_zero_everywhere = true;
  std::vector<double> bin_edges;
  std::vector<long> histogram;
};

SpectrumSummary spectrum_summary(const Media& media, int grid, int bins = 64);

nlohmann::json to_json(const LambdaExtrema& e);
nlohmann::json to_json(const QuadricModel& q);
nlohmann::json to_json(const SpectrumSummary& s);

/// tau^(+-)(z(x)) as exact trigonometric polynomials (classes B0, B12).
struct TauPolys {
  QPoly plus;
  QPoly minus;
};
std::optional<TauPolys> tau_polys(const ExactParams& p);

/// Psi0(z(x)) and K0(z(x)) as exact trigonometric polynomials.
QPoly psi0_poly(const ExactParams& p);
QPoly k0_poly(const ExactParams& p);

}  // namespace maxlat
