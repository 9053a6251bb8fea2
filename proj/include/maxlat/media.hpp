#pragma once

#include <array>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <json.hpp>

namespace maxlat {

using Vec3 = std::array<double, 3>;
using Rational = mpq_class;
using RVec3 = std::array<Rational, 3>;

/// Constant diagonal permittivity and permeability of the background.
struct Media {
  Vec3 eps{1.0, 1.0, 1.0};
  Vec3 mu{1.0, 1.0, 1.0};

  bool operator==(const Media&) const = default;
};

/// Throws InvalidMedia unless every component is finite and strictly positive.
void validate(const Media& media);

enum class MediaClass { B0, B3, B12 };

std::string_view to_string(MediaClass cls);
MediaClass media_class_from_string(std::string_view name);

/// beta = eps x mu, alpha_i = (eps_j mu_k + eps_k mu_j)/2,
/// gamma_i = eps_j eps_k mu_j mu_k, g_i = eps_i mu_i beta_i, for (i,j,k)
/// cyclic. Templated so the same formulas serve double and exact rational
/// arithmetic.
template <class T>
struct ParamsT {
  std::array<T, 3> beta;
  std::array<T, 3> alpha;
  std::array<T, 3> gamma;
  std::array<T, 3> g;
};

template <class T>
ParamsT<T> cyclic_params(const std::array<T, 3>& eps,
                         const std::array<T, 3>& mu) {
  ParamsT<T> p;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    p.beta[i] = eps[j] * mu[k] - eps[k] * mu[j];
    p.alpha[i] = (eps[j] * mu[k] + eps[k] * mu[j]) / T(2);
    p.gamma[i] = eps[j] * eps[k] * mu[j] * mu[k];
  }
  for (int i = 0; i < 3; ++i) p.g[i] = eps[i] * mu[i] * p.beta[i];
  return p;
}

struct DerivedParams : ParamsT<double> {
  MediaClass cls = MediaClass::B0;
};

using ExactParams = ParamsT<Rational>;

/// Relative threshold under which beta components are snapped to zero.
inline constexpr double kBetaSnap = 1e-14;

/// Zeroes components below kBetaSnap * max|beta|.
Vec3 snap_beta(const Vec3& beta);

MediaClass classify(const Vec3& beta);
MediaClass classify(const std::array<Rational, 3>& beta);

DerivedParams derive_params(const Media& media);

/// Exact rational image of the (binary) doubles in media.
RVec3 to_rational(const Vec3& v);
ExactParams exact_params(const Media& media);

/// (A0): beta1 >= beta2 > 0 > beta3, or beta1 > beta2 = 0 > beta3.
bool satisfies_a0(const Vec3& beta);

struct NormalizedMedia {
  Media media;
  /// media.eps[i] = source.eps[permutation[i]] (before the optional swap).
  std::array<int, 3> permutation{0, 1, 2};
  bool swapped = false;
};

Media transform_media(const Media& media, const std::array<int, 3>& permutation,
                      bool swapped);

/// Brings a non-isotropic-class medium into (A0) by an axis permutation and an
/// optional eps <-> mu exchange. Throws NotApplicable for class B0.
NormalizedMedia normalize_a0(const Media& media);

void to_json(nlohmann::json& j, const Media& media);
void from_json(const nlohmann::json& j, Media& media);
void to_json(nlohmann::json& j, const DerivedParams& params);

}  // namespace maxlat
