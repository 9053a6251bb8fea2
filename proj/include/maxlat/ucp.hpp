#pragma once

// Unique-continuation machinery: half-space covers of convex lattice sets,
// degree certificates for the adjugate expansion, the pairing T(x) and a
// finite-box numeric null test.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <json.hpp>

#include "maxlat/lattice.hpp"
#include "maxlat/media.hpp"
#include "maxlat/trigpoly.hpp"

namespace maxlat {

/// {n in Z^3 : xi . n <= l}
struct HalfSpace {
  RVec3 xi;
  Rational l;

  bool contains(const Site& n) const;
  Vec3 xi_double() const;
};

struct Cover {
  std::vector<HalfSpace> family;  // perturbed facets followed by the six box half-spaces
  Rational delta;                 // perturbation used to push normals into G*
  int facets = 0;                 // facet count before perturbation
};

bool in_g_star(const RVec3& xi);

/// Throws PreconditionError when K_int is empty, leaves the box, or is not
/// the set of lattice points of its convex hull inside the box.
Cover halfspace_cover(const std::vector<Site>& k_int, const Box& box);

/// Exhaustive check: the family cuts exactly K_int out of the box.
bool cover_is_valid(const Cover& cover, const std::vector<Site>& k_int, const Box& box);

struct DegreeEntry {
  RVec3 xi;
  Rational xi_linf;
  std::optional<Rational> n_q, n_l, n_b1, n_b2;  // empty = -infinity
  bool ok = false;
};

struct DegreeReport {
  Media media;
  double lambda = 0.0;
  bool exact = true;
  bool l0_zero = false;          // L at t = 0 vanishes
  bool b1_hd_zero = false;       // B1 H^D = 0
  bool h0_b1_zero = false;       // H0 B1 = 0
  bool b1_h0_zero = false;       // B1 H0 = 0 read literally (adjugate convention)
  bool b1t_h0_zero = false;      // B1^T H0 = 0 (cofactor convention)
  bool q_matches_dispersion = false;  // det(H^D - lambda) == lambda^2 (tau+ - l^2)(tau- - l^2)
  std::vector<DegreeEntry> entries;
  std::vector<std::string> failures;
  bool valid = false;
};

/// L_t = adj(H^D(x) - t) with t formal. In exact mode all arithmetic is over
/// the Gaussian rationals (every finite double is a dyadic rational); float
/// mode uses complex doubles and decides supports after pruning at 1e-12.
/// Validity requires L_0 = 0, B1 H^D = 0, H0 B1 = 0, the determinant
/// identity and, for every xi, N(q) = N(L) = N(B1) = 4|xi|_inf and
/// N(B2) <= 3|xi|_inf. The literal product B1 H0 is reported separately.
DegreeReport degree_certificate(const Media& media, double lambda, const std::vector<RVec3>& xis,
                                bool exact = true);

struct PairingReport {
  std::optional<Rational> n_u, n_t, n_bilinear;
  bool holds = false;  // N(T) == 2 N(u) and N(bilinear) == 2 N(u)
  CPoly t;             // T as a trigonometric polynomial (frequencies 2n)
};

/// T(x) = sum_n sum_k D_p^{-1}(n)_kk |u_k(n)|^2 e^{2 i n.x}; the bilinear
/// pairing uses the background weights: sum_k D^{-1}_kk (u_k)_S u_k.
PairingReport pairing_identity(const LatticeField& u, const PerturbedMedia& media,
                               const RVec3& xi);

enum class NullVariant { Anywhere, Exterior };
std::string to_string(NullVariant v);

struct NullTestOptions {
  double kernel_tol = 1e-10;
  double restriction_tol = 1e-8;
  int vectors = 12;
  int max_iterations = 40;
  std::uint64_t seed = 0;
};

/// Real matrix of (H^{D_p} + V - lambda) in the gauge u(n) = i^{n1+n2+n3} w(n).
/// Columns: sites of the box minus a width-1 skin (minus K_int for the
/// exterior variant); rows: every site of the box outside K_int.
struct NullOperator {
  Eigen::SparseMatrix<double> a;
  std::vector<Site> columns;
  std::vector<Site> rows;
};
NullOperator assemble_null_operator(const PerturbedMedia& media, double lambda,
                                    const std::vector<Site>& k_int, const Box& box,
                                    NullVariant variant);

struct NullTestReport {
  Box box;
  NullVariant variant = NullVariant::Anywhere;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::vector<double> singular_values;  // smallest few, ascending
  double sigma_min = 0.0;
  int kernel_candidates = 0;
  double max_exterior_ratio = 0.0;  // over kernel candidates: |w on K_ext| / |w|
  std::vector<LatticeField> kernel_vectors;
  double kernel_tol = 0.0;
  std::string verdict;  // "consistent-with-UCP" or "violation"
};

/// Throws DomainError for lambda = 0 and PreconditionError unless K_int sits
/// inside the box with margin >= 3.
NullTestReport finite_box_null_test(const PerturbedMedia& media, double lambda,
                                    const std::vector<Site>& k_int, const Box& box,
                                    NullVariant variant = NullVariant::Anywhere,
                                    const NullTestOptions& options = {});

/// Isotropic unit background with V = lambda I at the sites +-e_j, and the
/// lattice coefficients of phi+(x) = (sin x, 0): a planted kernel element.
struct PlantedViolation {
  PerturbedMedia media;
  LatticeField phi;
};
PlantedViolation planted_violation(double lambda);

struct UcpCertificate {
  Media media;
  double lambda = 0.0;
  DegreeReport degree;
  std::optional<Cover> cover;
  std::optional<NullTestReport> nulltest;
  bool valid() const;
};

nlohmann::json to_json(const HalfSpace& h);
nlohmann::json to_json(const Cover& c);
nlohmann::json to_json(const DegreeReport& r);
nlohmann::json to_json(const PairingReport& r);
nlohmann::json to_json(const NullTestReport& r);
nlohmann::json to_json(const UcpCertificate& c);

std::string rational_string(const Rational& q);
std::optional<double> as_double(const std::optional<Rational>& q);

}  // namespace maxlat
