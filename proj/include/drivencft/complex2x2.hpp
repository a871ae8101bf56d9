#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "drivencft/errors.hpp"

namespace drivencft {

using cplx = std::complex<double>;

// Row-major 2x2 complex matrix [[a, b], [c, d]]. Value type: cheap to copy,
// safe to share across threads.
struct Mat2 {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};
  cplx c{0.0, 0.0};
  cplx d{1.0, 0.0};

  static Mat2 identity() { return Mat2{}; }
  static Mat2 zero() { return Mat2{0.0, 0.0, 0.0, 0.0}; }
  static Mat2 diag(cplx x, cplx y) { return Mat2{x, 0.0, 0.0, y}; }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
  return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
              x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Mat2 operator+(const Mat2& x, const Mat2& y) {
  return Mat2{x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

inline Mat2 operator-(const Mat2& x, const Mat2& y) {
  return Mat2{x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

inline Mat2 operator*(cplx s, const Mat2& m) {
  return Mat2{s * m.a, s * m.b, s * m.c, s * m.d};
}

inline Mat2 operator*(double s, const Mat2& m) { return cplx(s, 0.0) * m; }

inline cplx tr(const Mat2& m) { return m.a + m.d; }

inline cplx det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

inline double frobeniusNorm(const Mat2& m) {
  return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) +
                   std::norm(m.d));
}

inline double maxAbsDiff(const Mat2& x, const Mat2& y) {
  return std::max(std::max(std::abs(x.a - y.a), std::abs(x.b - y.b)),
                  std::max(std::abs(x.c - y.c), std::abs(x.d - y.d)));
}

inline bool allFinite(const Mat2& m) {
  auto ok = [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  };
  return ok(m.a) && ok(m.b) && ok(m.c) && ok(m.d);
}

// Inverse assuming det == 1 (unimodular fast path).
inline Mat2 inverseUnimodular(const Mat2& m) {
  return Mat2{m.d, -m.b, -m.c, m.a};
}

inline Mat2 inverse(const Mat2& m) {
  cplx dt = det(m);
  if (std::abs(dt) == 0.0) throw NumericError("singular 2x2 inverse");
  cplx inv = 1.0 / dt;
  return Mat2{inv * m.d, -inv * m.b, -inv * m.c, inv * m.a};
}

inline Mat2 conjugateEntries(const Mat2& m) {
  return Mat2{std::conj(m.a), std::conj(m.b), std::conj(m.c), std::conj(m.d)};
}

// sigma_x * conj(M) * sigma_x
inline Mat2 sigmaXConjugate(const Mat2& m) {
  return Mat2{std::conj(m.d), std::conj(m.c), std::conj(m.b), std::conj(m.a)};
}

// sigma_z * conj(M) * sigma_z
inline Mat2 sigmaZConjugate(const Mat2& m) {
  return Mat2{std::conj(m.a), -std::conj(m.b), -std::conj(m.c),
              std::conj(m.d)};
}

// exp(M) for traceless M = [[m0, mp], [mm, -m0]]: with mu^2 = m0^2 + mp*mm,
// exp(M) = cosh(mu) I + sinhc(mu) M. Small-|mu| branch uses the power series
// to avoid 0/0.
inline Mat2 expTraceless(const Mat2& m) {
  cplx mu2 = m.a * m.a + m.b * m.c;
  cplx mu = std::sqrt(mu2);
  cplx ch, shc;
  if (std::abs(mu) < 1e-8) {
    ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0;
    shc = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0;
  } else {
    ch = std::cosh(mu);
    shc = std::sinh(mu) / mu;
  }
  return Mat2{ch + shc * m.a, shc * m.b, shc * m.c, ch + shc * m.d};
}

// Eigenvalues of a general 2x2 matrix via the quadratic formula.
inline std::pair<cplx, cplx> eigenvalues2(const Mat2& m) {
  cplx half = tr(m) / 2.0;
  cplx disc = std::sqrt(half * half - det(m));
  return {half + disc, half - disc};
}

// Principal logarithm of an elliptic unimodular matrix (real trace in
// (-2, 2)): V = cos(theta) I + (sin(theta)/theta) X with X traceless, so
// X = theta/sin(theta) * (V - cos(theta) I). Rotation angle theta in (0, pi).
struct EllipticLog {
  Mat2 X;
  double theta;
};

inline EllipticLog logElliptic(const Mat2& v, double imagTraceTol = 1e-8) {
  cplx t = tr(v);
  if (std::abs(t.imag()) > imagTraceTol)
    throw ClassError("elliptic log requires a real trace");
  double x = t.real() / 2.0;
  if (x <= -1.0 || x >= 1.0)
    throw ClassError("elliptic log requires |tr|/2 < 1");
  double theta = std::acos(x);
  double factor = theta / std::sin(theta);
  Mat2 X = factor * (v - Mat2::diag(x, x));
  return EllipticLog{X, theta};
}

}  // namespace drivencft
