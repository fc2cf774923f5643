#pragma once

// Exact 2x2 complex linear algebra.  Everything here is closed-form; no
// iterative solvers are involved at this matrix size.

#include <cmath>
#include <complex>
#include <utility>

namespace qsl {

using cplx = std::complex<double>;

struct Mat2 {
  cplx m00{}, m01{}, m10{}, m11{};

  Mat2 adjoint() const {
    return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
  }
  cplx trace() const { return m00 + m11; }
  cplx det() const { return m00 * m11 - m01 * m10; }
  double frobenius_sq() const {
    return std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
  }

  Mat2& operator+=(const Mat2& o) {
    m00 += o.m00; m01 += o.m01; m10 += o.m10; m11 += o.m11;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    m00 -= o.m00; m01 -= o.m01; m10 -= o.m10; m11 -= o.m11;
    return *this;
  }
  Mat2& operator*=(cplx s) {
    m00 *= s; m01 *= s; m10 *= s; m11 *= s;
    return *this;
  }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator*(cplx s, Mat2 a) { return a *= s; }
inline Mat2 operator*(double s, Mat2 a) { return a *= cplx(s, 0.0); }
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }
inline Mat2 anticommutator(const Mat2& a, const Mat2& b) { return a * b + b * a; }

inline Mat2 mat2_identity() { return {1.0, 0.0, 0.0, 1.0}; }
inline Mat2 mat2_zero() { return {}; }

// Pauli matrices in the basis where index 0 is the excited level |1> and
// index 1 the ground level |0>; see state.hpp for the full convention.
inline Mat2 sigma_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 sigma_y() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
inline Mat2 sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }
inline Mat2 sigma_plus() { return {0.0, 1.0, 0.0, 0.0}; }   // |1><0|, raising
inline Mat2 sigma_minus() { return {0.0, 0.0, 1.0, 0.0}; }  // |0><1|, lowering

/// Largest deviation of m from being Hermitian.
inline double hermiticity_defect(const Mat2& m) {
  double d = std::abs(m.m01 - std::conj(m.m10));
  d = std::max(d, std::abs(m.m00.imag()));
  d = std::max(d, std::abs(m.m11.imag()));
  return d;
}

/// Eigenvalues of a Hermitian matrix, ascending.  Uses the real parts of the
/// diagonal; callers must have checked hermiticity beforehand.
inline std::pair<double, double> hermitian_eigenvalues(const Mat2& m) {
  const double a = m.m00.real();
  const double d = m.m11.real();
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), std::abs(m.m01));
  return {mean - r, mean + r};
}

/// Singular values, descending, from the Gram matrix M^dag M through the
/// stable Hermitian eigenvalue form; near-degenerate pairs keep full
/// precision because no squared sums are cancelled against each other.
inline std::pair<double, double> singular_values(const Mat2& m) {
  const double a00 = std::norm(m.m00) + std::norm(m.m10);
  const double a11 = std::norm(m.m01) + std::norm(m.m11);
  const cplx a01 = std::conj(m.m00) * m.m01 + std::conj(m.m10) * m.m11;
  const double mean = 0.5 * (a00 + a11);
  const double r = std::hypot(0.5 * (a00 - a11), std::abs(a01));
  return {std::sqrt(mean + r), std::sqrt(std::max(mean - r, 0.0))};
}

}  // namespace qsl
