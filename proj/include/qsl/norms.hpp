#pragma once

// The three matrix norms entering the speed-limit quadrature, defined through
// singular values: operator (largest), trace (sum), Hilbert-Schmidt
// (root-sum-square).

#include <cmath>

#include "qsl/mat2.hpp"

namespace qsl {

struct NormTriple {
  double op{}, tr{}, hs{};
};

/// Singular values via the Gram matrix M^dag M and the stable Hermitian
/// eigenvalue form.  The split s1 - s2 comes from directly computed small
/// differences, not from cancelling squared sums, so nearly degenerate pairs
/// (every Hermitian traceless matrix) keep full precision.
inline NormTriple norm_triple(const Mat2& m) {
  const double a00 = std::norm(m.m00) + std::norm(m.m10);
  const double a11 = std::norm(m.m01) + std::norm(m.m11);
  const cplx a01 = std::conj(m.m00) * m.m01 + std::conj(m.m10) * m.m11;
  const double mean = 0.5 * (a00 + a11);
  const double r = std::hypot(0.5 * (a00 - a11), std::abs(a01));
  const double s1 = std::sqrt(mean + r);
  const double s2 = std::sqrt(std::max(mean - r, 0.0));
  return {s1, s1 + s2, std::sqrt(a00 + a11)};
}

}  // namespace qsl
