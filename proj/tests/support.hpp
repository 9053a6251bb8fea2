#pragma once

// Shared fixtures for the test binaries: reference media and random draws.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "maxlat/media.hpp"

namespace testing_support {

using maxlat::Media;

inline Media iso() { return Media{{1, 1, 1}, {1, 1, 1}}; }
inline Media m2() { return Media{{1, 2, 3}, {1, 1, 1}}; }
inline Media m3() { return Media{{1, 2, 1}, {1, 1, 1}}; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Media random_media(std::mt19937_64& rng, double lo = 0.1, double hi = 10.0) {
  Media m;
  for (int i = 0; i < 3; ++i) {
    m.eps[i] = uniform(rng, lo, hi);
    m.mu[i] = uniform(rng, lo, hi);
  }
  return m;
}

/// beta_2 = eps_3 mu_1 - eps_1 mu_3 vanishes when eps_3 = eps_1 mu_3 / mu_1.
/// Dyadic values keep beta_2 exactly zero in double arithmetic.
inline Media random_b12(std::mt19937_64& rng) {
  auto dyadic = [&] { return std::ldexp(std::floor(uniform(rng, 1.0, 64.0)), -3); };
  for (;;) {
    Media m;
    m.eps = {dyadic(), dyadic(), 0.0};
    m.mu = {1.0, dyadic(), dyadic()};
    m.eps[2] = m.eps[0] * m.mu[2];
    if (maxlat::derive_params(m).cls == maxlat::MediaClass::B12) return m;
  }
}

inline Eigen::Vector3d vec(const maxlat::Vec3& v) { return {v[0], v[1], v[2]}; }

inline maxlat::Vec3 random_point(std::mt19937_64& rng) {
  return {uniform(rng, 0, 2 * M_PI), uniform(rng, 0, 2 * M_PI), uniform(rng, 0, 2 * M_PI)};
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing_support
