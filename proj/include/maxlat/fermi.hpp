#pragma once

// Real slices of the Fermi variety {x : q(x; lambda) = 0} on the torus.

#include <string>
#include <vector>

#include <json.hpp>

#include "maxlat/dispersion.hpp"
#include "maxlat/media.hpp"

namespace maxlat {

enum class Sheet { Plus, Minus, Degenerate };
std::string to_string(Sheet s);

struct FermiPoint {
  Vec3 x{};
  Sheet sheet = Sheet::Plus;
  // |p(z(x); lambda)| over lambda^2 (lambda^4 + 2 lambda^2 |Psi0| + Psi0^2 + |K0|),
  // so the bound does not depend on the scale of the media.
  double residual = 0.0;
  bool diagonal = false;  // found on the diagonal x = (s, s, s), not on a fiber
};

struct FermiSample {
  double lambda = 0.0;
  int grid = 0;
  std::string quadric_case;
  std::vector<FermiPoint> points;
  long fiber_count[3] = {0, 0, 0};  // plus, minus, degenerate (fiber points only)
  // min over the sample grid of |tau^(+-)(z) - lambda^2|
  double min_gap_plus = 0.0;
  double min_gap_minus = 0.0;
  double max_residual = 0.0;

  long count(Sheet s) const;
  long fiber_total() const { return fiber_count[0] + fiber_count[1] + fiber_count[2]; }
  bool empty(Sheet s) const;
};

struct FermiOptions {
  double tol = 1e-12;        // bisection tolerance in x3
  double point_tol = 1e-8;   // residual bound every emitted point must meet
  bool diagonal = true;      // also solve along x = (s, s, s)
};

/// Fibers over the N^2 grid in (x1, x2); along x3 (N samples), sign changes of
/// tau^(+-)(z(x)) - lambda^2 are refined by bisection. Grid samples where the
/// difference is zero to rounding count as roots.
FermiSample sample_surface(const Media& media, double lambda, int grid,
                           const FermiOptions& options = {});

struct SingularSet {
  std::string tag;  // "points", "singular-plane" or "empty"
  std::vector<Vec3> points;
  std::string note;
};

SingularSet singular_points(const Media& media, double lambda, int grid);

std::string to_csv(const FermiSample& s);
nlohmann::json to_json(const FermiSample& s);
nlohmann::json to_json(const SingularSet& s);

}  // namespace maxlat
