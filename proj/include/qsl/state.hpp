#pragma once

// Qubit state representations and conversions.
//
// Basis convention, fixed once for the whole library:
//   * basis index 0 is the excited level |1>, basis index 1 the ground
//     level |0>;
//   * the Bloch z component is +1 for the excited state, so the excited
//     population is rho(0,0) = (1+z)/2;
//   * sigma_plus = |1><0| raises, sigma_minus = |0><1| lowers.

#include <cmath>
#include <complex>

#include "qsl/constants.hpp"
#include "qsl/errors.hpp"
#include "qsl/mat2.hpp"

namespace qsl {

struct BlochVector {
  double x{}, y{}, z{};

  double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }

  BlochVector& operator+=(const BlochVector& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  BlochVector& operator-=(const BlochVector& o) {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  BlochVector& operator*=(double s) {
    x *= s; y *= s; z *= s;
    return *this;
  }
};

inline BlochVector operator+(BlochVector a, const BlochVector& b) { return a += b; }
inline BlochVector operator-(BlochVector a, const BlochVector& b) { return a -= b; }
inline BlochVector operator*(double s, BlochVector a) { return a *= s; }
inline BlochVector operator-(const BlochVector& a) { return {-a.x, -a.y, -a.z}; }

/// A physical qubit density matrix: Hermitian, unit trace, positive
/// semidefinite (within the construction tolerances).
class DensityMatrix {
 public:
  /// Validating constructor.
  explicit DensityMatrix(const Mat2& m) : m_(m) {
    if (hermiticity_defect(m) > tol::construction)
      throw PhysicsError("density matrix is not Hermitian");
    if (std::abs(m.trace() - cplx(1.0, 0.0)) > tol::construction)
      throw PhysicsError("density matrix does not have unit trace");
    if (hermitian_eigenvalues(m).first < -tol::psd)
      throw PhysicsError("density matrix is not positive semidefinite");
  }

  static DensityMatrix maximally_mixed() {
    return DensityMatrix(Mat2{0.5, 0.0, 0.0, 0.5}, unchecked{});
  }

  const Mat2& matrix() const { return m_; }
  double excited_population() const { return m_.m00.real(); }
  cplx coherence() const { return m_.m01; }
  std::pair<double, double> eigenvalues() const { return hermitian_eigenvalues(m_); }

 private:
  struct unchecked {};
  DensityMatrix(const Mat2& m, unchecked) : m_(m) {}

  Mat2 m_;

  friend DensityMatrix bloch_to_density(const BlochVector&);
  friend DensityMatrix density_from_bloch_unchecked(const BlochVector&);
};

inline Mat2 density_matrix_of_bloch(const BlochVector& r) {
  return {cplx(0.5 * (1.0 + r.z), 0.0), 0.5 * cplx(r.x, -r.y),
          0.5 * cplx(r.x, r.y), cplx(0.5 * (1.0 - r.z), 0.0)};
}

/// rho = (I + r.sigma)/2.  Rejects vectors outside the Bloch ball beyond the
/// drift tolerance.
inline DensityMatrix bloch_to_density(const BlochVector& r) {
  const double n = r.norm();
  if (!(n <= 1.0 + tol::drift))
    throw PhysicsError("Bloch vector lies outside the Bloch ball");
  return DensityMatrix(density_matrix_of_bloch(r), DensityMatrix::unchecked{});
}

/// Conversion without the ball check, for trusted inner loops.
inline DensityMatrix density_from_bloch_unchecked(const BlochVector& r) {
  return DensityMatrix(density_matrix_of_bloch(r), DensityMatrix::unchecked{});
}

inline BlochVector density_to_bloch(const DensityMatrix& rho) {
  const Mat2& m = rho.matrix();
  return {2.0 * m.m01.real(), -2.0 * m.m01.imag(), (m.m00 - m.m11).real()};
}

/// Pure initial state |psi> = sqrt(a)|1> + e^{i theta} sqrt(1-a)|0>, with a
/// the excited-state population and theta the relative phase.
class PureState {
 public:
  explicit PureState(double a, double theta = 0.0) : a_(a), theta_(theta) {
    if (!(a >= 0.0 && a <= 1.0))
      throw ConfigError("pure-state population a must lie in [0,1]");
    if (!std::isfinite(theta)) throw ConfigError("pure-state phase must be finite");
    constexpr double two_pi = 6.283185307179586476925286766559;
    theta_ = std::fmod(theta_, two_pi);
    if (theta_ < 0.0) theta_ += two_pi;
  }

  double excited_weight() const { return a_; }
  double phase() const { return theta_; }

  cplx amp_excited() const { return {std::sqrt(a_), 0.0}; }
  cplx amp_ground() const { return std::polar(std::sqrt(1.0 - a_), theta_); }

  // Orthogonal partner sqrt(1-a)|1> - e^{i theta} sqrt(a)|0>, global phase
  // fixed by this choice.
  cplx perp_amp_excited() const { return {std::sqrt(1.0 - a_), 0.0}; }
  cplx perp_amp_ground() const { return -std::polar(std::sqrt(a_), theta_); }

  BlochVector bloch() const {
    const double s = 2.0 * std::sqrt(a_ * (1.0 - a_));
    return {s * std::cos(theta_), s * std::sin(theta_), 2.0 * a_ - 1.0};
  }
  DensityMatrix density() const { return bloch_to_density(bloch()); }

 private:
  double a_;
  double theta_;
};

}  // namespace qsl
