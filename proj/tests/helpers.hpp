#pragma once

// Shared generators for randomized tests.  Everything is seeded, so failures
// reproduce.

#include <cmath>
#include <complex>
#include <random>

#include "qsl/mat2.hpp"
#include "qsl/state.hpp"

namespace qsltest {

using Rng = std::mt19937_64;

inline qsl::BlochVector random_bloch_in_ball(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  qsl::BlochVector v{normal(rng), normal(rng), normal(rng)};
  const double n = v.norm();
  if (n == 0.0) return {0.0, 0.0, 0.0};
  const double r = std::cbrt(uni(rng));
  return {v.x / n * r, v.y / n * r, v.z / n * r};
}

inline qsl::BlochVector random_bloch_on_sphere(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  qsl::BlochVector v{normal(rng), normal(rng), normal(rng)};
  const double n = v.norm();
  return {v.x / n, v.y / n, v.z / n};
}

inline qsl::DensityMatrix random_density(Rng& rng) {
  return qsl::bloch_to_density(random_bloch_in_ball(rng));
}

inline qsl::cplx random_cplx(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return {normal(rng), normal(rng)};
}

inline qsl::Mat2 random_matrix(Rng& rng) {
  return {random_cplx(rng), random_cplx(rng), random_cplx(rng), random_cplx(rng)};
}

inline qsl::Mat2 random_hermitian_traceless(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double c = normal(rng);
  const qsl::cplx w = random_cplx(rng);
  return {qsl::cplx(c, 0.0), w, std::conj(w), qsl::cplx(-c, 0.0)};
}

}  // namespace qsltest
