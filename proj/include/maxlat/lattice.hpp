#pragma once

// Finitely supported fields Z^3 -> C^6 and the nearest-neighbour stencils of
// the lattice operators.
//
// Coefficient convention: a field u_hat is tied to the torus function
//   u(x) = sum_n u_hat(n) e^{-i n.x},
// so u_hat(n) is the TrigPoly coefficient at frequency -n. Multiplication by
// sin x_j becomes (u_hat(n + e_j) - u_hat(n - e_j)) / (2i).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "maxlat/media.hpp"
#include "maxlat/trigpoly.hpp"

namespace maxlat {

using Site = Freq;
using Vec6c = Eigen::Matrix<Complex, 6, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

struct Box {
  Site lo{0, 0, 0};
  Site hi{0, 0, 0};

  static Box cube(int radius) { return {{-radius, -radius, -radius}, {radius, radius, radius}}; }
  bool contains(const Site& n) const;
  bool empty() const;
  std::size_t count() const;
  Box shrunk(int width) const;
  /// Sites in lexicographic order.
  std::vector<Site> sites() const;
};

class LatticeField {
 public:
  using Map = std::map<Site, Vec6c>;

  LatticeField() = default;
  explicit LatticeField(Map values);

  static LatticeField delta(const Site& n, int component, Complex value = 1.0);

  const Map& values() const { return values_; }
  bool is_zero() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }

  Vec6c at(const Site& n) const;
  void set(const Site& n, const Vec6c& v);  // zero vectors erase the site
  void add(const Site& n, const Vec6c& v);

  std::optional<Box> bounding_box() const;
  double norm2() const;
  double linf_coeff() const;  // max |component|

  LatticeField& operator+=(const LatticeField& o);
  LatticeField& operator-=(const LatticeField& o);
  LatticeField& operator*=(Complex s);
  friend LatticeField operator+(LatticeField a, const LatticeField& b) { return a += b; }
  friend LatticeField operator-(LatticeField a, const LatticeField& b) { return a -= b; }
  friend LatticeField operator*(Complex s, LatticeField a) { return a *= s; }

  /// Sites with |n|_inf <= radius only.
  LatticeField truncated(int radius) const;
  /// Drops sites whose largest component is <= relative * linf_coeff().
  LatticeField pruned(double relative) const;

  friend bool operator==(const LatticeField&, const LatticeField&) = default;

 private:
  Map values_;
};

/// <u, v> = sum_n sum_k u_k(n) conj(v_k(n)), optionally weighted per site.
Complex inner(const LatticeField& u, const LatticeField& v);

struct LocalMedia {
  Vec3 eps{1, 1, 1};
  Vec3 mu{1, 1, 1};
  bool operator==(const LocalMedia&) const = default;
};

/// Background media with a finitely supported modification D_p(n), and an
/// optional finitely supported diagonal potential V(n) added to the operator.
struct PerturbedMedia {
  Media background;
  std::map<Site, LocalMedia> local;
  std::map<Site, Vec6> potential;

  PerturbedMedia() = default;
  explicit PerturbedMedia(Media bg) : background(bg) {}

  /// Diagonal of D_p(n).
  Vec6 d(const Site& n) const;
  void validate() const;
};

/// Stencil of H0: sum_j H0(e_j) S_j.
LatticeField apply_h0(const LatticeField& field);
LatticeField apply_hd(const LatticeField& field, const Media& media);
/// D_p(n) (H0 u)(n) + V(n) u(n).
LatticeField apply_hd(const LatticeField& field, const PerturbedMedia& media);

/// (H^{D_p} + V - lambda) u.
LatticeField residual(const LatticeField& field, const PerturbedMedia& media, double lambda);

/// K(n) = D(n) D_p(n)^{-1} - I on the perturbation support.
std::map<Site, Vec6> kernel_multiplier(const PerturbedMedia& media);
std::map<Site, std::array<Rational, 6>> kernel_multiplier_exact(const PerturbedMedia& media);

/// (R, (1/R) sum_{|n|_1 < R} |u(n)|^2) for each R (l1 lattice norm).
std::vector<std::pair<int, double>> besov_profile_l1(const LatticeField& field,
                                                     const std::vector<int>& radii);

/// max |u(n)| (Euclidean norm in C^6) over the l-infinity shell |n|_inf = R,
/// for R = 0..r_max.
std::vector<double> shell_profile_linf(const LatticeField& field, int r_max);

/// Six component polynomials c_k with c_k(-n) = u_hat_k(n), and back.
std::array<CPoly, 6> to_trig(const LatticeField& field);
LatticeField from_trig(const std::array<CPoly, 6>& components);

/// Field values u(x) on the N^3 torus grid (row-major, 6 complex per point).
std::vector<Vec6c> sample_field(const LatticeField& field, int n);

/// Dense column vector over a box, 6 entries per site in lexicographic order.
Eigen::VectorXcd to_dense(const LatticeField& field, const Box& box);
LatticeField from_dense(const Eigen::VectorXcd& v, const Box& box);

/// JSON lines {"n":[..], "v":[re0, im0, ..., re5, im5]}.
std::string to_json_lines(const LatticeField& field);
LatticeField field_from_json_lines(const std::string& text);

/// {"sites":[{"n":[..], "eps":[..], "mu":[..]}]} on top of a background.
PerturbedMedia perturbation_from_json(const nlohmann::json& j, const Media& background);
nlohmann::json perturbation_to_json(const PerturbedMedia& media);

}  // namespace maxlat
