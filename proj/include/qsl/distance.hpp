#pragma once

// State distances: trace distance, fidelity with a pure reference state, and
// the Bures angle.

#include <algorithm>
#include <cmath>

#include "qsl/mat2.hpp"
#include "qsl/state.hpp"

namespace qsl {

/// D(rho1, rho2) = tr|rho1 - rho2| / 2, via the closed-form eigenvalues of
/// the Hermitian difference.  For a qubit this equals |r1 - r2|/2 in Bloch
/// coordinates; that identity is kept as a cross-check in the tests.
inline double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const auto [lo, hi] = hermitian_eigenvalues(rho1.matrix() - rho2.matrix());
  const double d = 0.5 * (std::abs(lo) + std::abs(hi));
  return std::clamp(d, 0.0, 1.0);
}

struct FidelityBures {
  double fidelity{};  // F = <psi0|rho|psi0>
  double bures{};     // arccos(sqrt F)
};

inline FidelityBures fidelity_and_bures(const PureState& psi0, const DensityMatrix& rho) {
  const cplx p0 = psi0.amp_excited();
  const cplx p1 = psi0.amp_ground();
  const Mat2& m = rho.matrix();
  const cplx f = std::conj(p0) * (m.m00 * p0 + m.m01 * p1) +
                 std::conj(p1) * (m.m10 * p0 + m.m11 * p1);
  const double fid = std::clamp(f.real(), 0.0, 1.0);
  return {fid, std::acos(std::sqrt(fid))};
}

}  // namespace qsl
