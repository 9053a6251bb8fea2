#include "maxlat/media.hpp"

#include <algorithm>
#include <cmath>

#include "maxlat/errors.hpp"

namespace maxlat {

void validate(const Media& media) {
  for (int i = 0; i < 3; ++i) {
    for (double v : {media.eps[i], media.mu[i]}) {
      if (!std::isfinite(v) || v <= 0.0) {
        throw InvalidMedia("media components must be finite and positive, got " +
                           std::to_string(v));
      }
    }
  }
}

std::string_view to_string(MediaClass cls) {
  switch (cls) {
    case MediaClass::B0:
      return "B0";
    case MediaClass::B3:
      return "B3";
    case MediaClass::B12:
      return "B12";
  }
  return "?";
}

MediaClass media_class_from_string(std::string_view name) {
  if (name == "B0") return MediaClass::B0;
  if (name == "B3") return MediaClass::B3;
  if (name == "B12") return MediaClass::B12;
  throw Error("unknown media class '" + std::string(name) + "'");
}

Vec3 snap_beta(const Vec3& beta) {
  const double scale =
      std::max({std::abs(beta[0]), std::abs(beta[1]), std::abs(beta[2])});
  Vec3 out = beta;
  for (double& b : out) {
    if (std::abs(b) <= kBetaSnap * scale) b = 0.0;
  }
  return out;
}

MediaClass classify(const Vec3& beta) {
  const int zeros = static_cast<int>(std::count(beta.begin(), beta.end(), 0.0));
  if (zeros == 3) return MediaClass::B0;
  if (zeros == 0) return MediaClass::B3;
  return MediaClass::B12;
}

MediaClass classify(const std::array<Rational, 3>& beta) {
  int zeros = 0;
  for (const auto& b : beta) zeros += (sgn(b) == 0);
  if (zeros == 3) return MediaClass::B0;
  if (zeros == 0) return MediaClass::B3;
  return MediaClass::B12;
}

DerivedParams derive_params(const Media& media) {
  validate(media);
  DerivedParams out;
  static_cast<ParamsT<double>&>(out) = cyclic_params<double>(media.eps, media.mu);
  out.beta = snap_beta(out.beta);
  for (int i = 0; i < 3; ++i) out.g[i] = media.eps[i] * media.mu[i] * out.beta[i];
  out.cls = classify(out.beta);
  return out;
}

RVec3 to_rational(const Vec3& v) {
  RVec3 out;
  for (int i = 0; i < 3; ++i) out[i] = Rational(v[i]);  // exact for binary doubles
  return out;
}

ExactParams exact_params(const Media& media) {
  validate(media);
  return cyclic_params<Rational>(to_rational(media.eps), to_rational(media.mu));
}

bool satisfies_a0(const Vec3& beta) {
  const bool first = beta[0] >= beta[1] && beta[1] > 0.0 && beta[2] < 0.0;
  const bool second = beta[0] > beta[1] && beta[1] == 0.0 && beta[2] < 0.0;
  return first || second;
}

Media transform_media(const Media& media, const std::array<int, 3>& permutation,
                      bool swapped) {
  Media out;
  for (int i = 0; i < 3; ++i) {
    out.eps[i] = media.eps[permutation[i]];
    out.mu[i] = media.mu[permutation[i]];
  }
  if (swapped) std::swap(out.eps, out.mu);
  return out;
}

NormalizedMedia normalize_a0(const Media& media) {
  if (derive_params(media).cls == MediaClass::B0) {
    throw NotApplicable("(A0) normalization needs beta != 0 (class B0 given)");
  }
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (bool swapped : {false, true}) {
      const Media candidate = transform_media(media, perm, swapped);
      if (satisfies_a0(derive_params(candidate).beta)) {
        return {candidate, perm, swapped};
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  throw InternalError("no axis permutation / eps-mu exchange reaches (A0)");
}

void to_json(nlohmann::json& j, const Media& media) {
  j = nlohmann::json{{"epsilon", media.eps}, {"mu", media.mu}};
}

void from_json(const nlohmann::json& j, Media& media) {
  if (!j.is_object() || !j.contains("epsilon") || !j.contains("mu")) {
    throw InvalidMedia("media JSON needs \"epsilon\" and \"mu\" arrays");
  }
  const auto& e = j.at("epsilon");
  const auto& m = j.at("mu");
  if (!e.is_array() || !m.is_array() || e.size() != 3 || m.size() != 3) {
    throw InvalidMedia("\"epsilon\" and \"mu\" must hold three numbers each");
  }
  for (int i = 0; i < 3; ++i) {
    if (!e[i].is_number() || !m[i].is_number()) {
      throw InvalidMedia("media components must be numbers");
    }
    media.eps[i] = e[i].get<double>();
    media.mu[i] = m[i].get<double>();
  }
  validate(media);
}

void to_json(nlohmann::json& j, const DerivedParams& params) {
  j = nlohmann::json{{"beta", params.beta},   {"alpha", params.alpha},
                     {"gamma", params.gamma}, {"g", params.g},
                     {"class", std::string(to_string(params.cls))}};
}

}  // namespace maxlat
