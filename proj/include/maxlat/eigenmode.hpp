#pragma once

// The explicit critical-window mode u = (u_E, u_H) with
//   u_H = adj(B(x) - lambda^2) v_H / (tau^-(z) - lambda^2),
//   u_E = lambda^{-1} eps M~(y) u_H,
// whose residual (H^D - lambda) u is the trigonometric polynomial
//   (0, -lambda (tau^+(z) - lambda^2) v_H).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxlat/lattice.hpp"
#include "maxlat/media.hpp"
#include "maxlat/trigpoly.hpp"

namespace maxlat {

struct Counterexample {
  NormalizedMedia normalization;  // construction happens in the (A0) frame
  double lambda = 0.0;
  Vec3 v_h{};
  int grid = 0;
  LatticeField u_hat;  // Fourier coefficients of u, coefficients < 1e-14 max dropped

  std::array<QPoly, 6> residual_exact;    // exact trigonometric residual
  std::array<CPoly, 6> residual_numeric;  // (H^D(x) - lambda) u(x) on the grid, inverted
  int residual_support_radius = -1;       // exact path, l-infinity
  double numeric_outside = 0.0;           // max |coeff| of numeric residual beyond |n|_inf > 2
  double two_path_error = 0.0;            // max coeff difference / max exact coeff
  bool det_identity = false;       // det(B - l^2) == -l^2 (tau+ - l^2)(tau- - l^2), exact
  bool adjugate_identity = false;  // (B - l^2) adj(B - l^2) == det I, exact
  double denominator_min = 0.0;    // range of tau^-(z) - lambda^2 on the grid
  double denominator_max = 0.0;
};

/// Throws DomainError for lambda outside (lambda-, lambda+), v_H = 0 or a
/// grid that is not a power of two >= 8; NotApplicable unless class B12.
/// The mode is built for the (A0)-normalized media; v_H is read in that frame.
Counterexample build_counterexample(const Media& media, double lambda, const Vec3& v_h,
                                    int grid = 64);

struct VhChoice {
  Vec3 v_h{};
  int attempts = 0;
  std::vector<Vec3> rejected;
};

/// e1, e2, e3, then seeded random unit vectors (at most 32 draws). A candidate
/// is accepted when every l-infinity shell R <= r_test of u_hat carries a
/// coefficient above 1e-14 of the largest one. Throws InternalError when no
/// candidate passes.
VhChoice choose_vh(const Media& media, double lambda, int grid = 64, std::uint64_t seed = 0,
                   int r_test = 8);

/// True when every shell R <= r_test carries a coefficient above floor * max.
bool passes_shell_test(const LatticeField& u_hat, int r_test, double floor = 1e-14);

struct TauReduction {
  bool finite = false;
  double outside_ratio = 0.0;  // l2 mass beyond |n|_inf <= radius over total
  int radius = 6;
  std::array<CPoly, 6> product;  // coefficients of (tau^- - lambda^2) u
  std::string note;
};

/// Multiplies by tau^-(z) - lambda^2 on the N^3 grid and tests whether the
/// product is a trigonometric polynomial supported in |n|_inf <= radius
/// (outside mass below 1e-9 of the total). Requires |lambda| > lambda-.
TauReduction tau_minus_reduce(const LatticeField& u_hat, const Media& media, double lambda,
                              int grid = 64, int radius = 6);
TauReduction tau_minus_reduce(const std::vector<Vec6c>& samples, int grid, const Media& media,
                              double lambda, int radius = 6);

struct ShellReport {
  std::vector<double> shell;                     // l-infinity shells 0..r_max
  std::vector<std::pair<int, double>> besov;     // (R, (1/R) sum_{|n|_1 < R} |u|^2)
};
ShellReport shell_report(const LatticeField& u_hat, int r_max, int besov_max);

struct Calibration {
  int r_star = -1;
  int grid_lo = 0;
  int grid_hi = 0;
  std::vector<double> shell_lo;
  std::vector<double> shell_hi;
};

/// Largest R such that for every R' <= R the shell value of the grid_hi run
/// exceeds floor * max and agrees with the grid_lo run to `agree` relative.
Calibration calibrate_shell_bound(const Media& media, double lambda, const Vec3& v_h,
                                  int grid_lo = 64, int grid_hi = 128, double floor = 1e-14,
                                  double agree = 1e-2);

/// |adj(B - t) - (-t(tau+ - t) P- - t(tau- - t) P+ + (tau+ - t)(tau- - t) P0)| / |adj(B - t)|
/// with numeric spectral projectors of B(x).
double adjugate_spectral_error(const Media& media, const Vec3& x, double t);

/// sigma_2 / sigma_1 of adj(B(x) - tau^-(z)).
double adjugate_rank_ratio(const Media& media, const Vec3& x);

nlohmann::json to_json(const Counterexample& c, const ShellReport& shells);

struct Regime {
  double lo = 0.0;
  double hi = 0.0;  // +infinity encoded as a negative value in JSON
  std::string verdict;
};

/// Rellich regimes on |lambda| > 0 for the given media.
std::vector<Regime> rellich_regimes(const Media& media);

}  // namespace maxlat
