#include "drivencft/mobius.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace drivencft {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite_duration(double T, double l) {
  if (!std::isfinite(T)) throw InvalidParameter("duration must be finite");
  if (!(l > 0.0) || !std::isfinite(l))
    throw InvalidParameter("circle length must be positive and finite");
}

}  // namespace

Mat2 build_u0(double T, double L) {
  require_finite_duration(T, L);
  double phi = kPi * T / L;
  return Mat2::diag(std::polar(1.0, phi), std::polar(1.0, -phi));
}

Mat2 build_u1(double T, double l) {
  require_finite_duration(T, l);
  double b = kPi * T / l;
  cplx ib(0.0, b);
  return Mat2{1.0 + ib, -ib, ib, 1.0 - ib};
}

Mat2 build_u2(double T, double l) {
  require_finite_duration(T, l);
  double x = kPi * T / l;
  double ch = std::cosh(x), sh = std::sinh(x);
  return Mat2{ch, cplx(0.0, sh), cplx(0.0, -sh), ch};
}

Mat2 build_u3(double T, double l, double Gamma, Chirality chi) {
  require_finite_duration(T, l);
  if (!std::isfinite(Gamma))
    throw InvalidParameter("Gamma must be finite");
  double th = kPi * T / l;
  double ct = std::cos(th), st = std::sin(th);
  cplx diag(ct, std::cos(Gamma) * st);
  double off = st * std::sin(Gamma);
  if (chi == Chirality::holomorphic)
    return Mat2{diag, -off, off, std::conj(diag)};
  return Mat2{diag, off, -off, std::conj(diag)};
}

Mat2 deformation_generator(const DeformationParams& dp) {
  if (dp.r < 1) throw InvalidParameter("wavenumber r must be >= 1");
  if (!(dp.L > 0.0) || !std::isfinite(dp.L))
    throw InvalidParameter("circle length must be positive and finite");
  auto finite = [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  };
  if (!finite(dp.sigma0) || !finite(dp.sigmaPlus) || !finite(dp.sigmaMinus))
    throw InvalidParameter("deformation coefficients must be finite");
  cplx scale(0.0, kPi / dp.ell());
  cplx upper = dp.sigmaMinus - std::conj(dp.sigmaPlus);
  cplx lower = std::conj(dp.sigmaPlus) - dp.sigmaMinus;
  return scale * Mat2{dp.sigma0, upper, lower, -dp.sigma0};
}

Mat2 build_from_deformation(const DeformationParams& dp, double T) {
  if (!std::isfinite(T)) throw InvalidParameter("duration must be finite");
  return expTraceless(T * cplx(1.0, 0.0) * deformation_generator(dp));
}

MobiusClass classify_group(const Mat2& m, double tol) {
  if (!allFinite(m)) throw InvalidParameter("matrix entries must be finite");
  if (std::abs(det(m) - cplx(1.0, 0.0)) > 1e-6)
    throw InvalidParameter("classification requires det = 1");
  // SU(1,1): a = conj(d), b = conj(c).
  double su11 = std::max(std::abs(m.a - std::conj(m.d)),
                         std::abs(m.b - std::conj(m.c)));
  if (su11 <= tol) return MobiusClass::SU11;
  // SU(2): a = conj(d), b = -conj(c).
  double su2 = std::max(std::abs(m.a - std::conj(m.d)),
                        std::abs(m.b + std::conj(m.c)));
  if (su2 <= tol) return MobiusClass::SU2;
  // SL(2,R): all entries real.
  double sl2r = std::max(std::max(std::abs(m.a.imag()), std::abs(m.b.imag())),
                         std::max(std::abs(m.c.imag()), std::abs(m.d.imag())));
  if (sl2r <= tol) return MobiusClass::SL2R;
  return MobiusClass::SL2C;
}

cplx mobius_apply(const Mat2& m, cplx z) {
  if (is_point_at_infinity(z)) {
    if (std::abs(m.c) == 0.0)
      return cplx(std::numeric_limits<double>::infinity(), 0.0);
    return m.a / m.c;
  }
  cplx denom = m.c * z + m.d;
  if (std::abs(denom) == 0.0)
    return cplx(std::numeric_limits<double>::infinity(), 0.0);
  return (m.a * z + m.b) / denom;
}

bool is_point_at_infinity(cplx z) {
  return std::isinf(z.real()) || std::isinf(z.imag());
}

}  // namespace drivencft
