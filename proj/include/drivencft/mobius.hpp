#pragma once

#include <complex>

#include "drivencft/complex2x2.hpp"
#include "drivencft/errors.hpp"

namespace drivencft {

// Which chiral sector a single-step matrix acts on. The antiholomorphic
// partner of a step matrix U is sigma_x * conj(U) * sigma_x.
enum class Chirality { holomorphic, antiholomorphic };

// Conjugacy class of a unimodular 2x2 matrix acting as a Mobius map.
enum class MobiusClass { SU11, SU2, SL2R, SL2C };

enum class BoundaryCondition { periodic, open };

// Smooth deformation of the uniform Hamiltonian: profile
//   f(x) = sigma0 + sigmaPlus * e^{i 2 pi r x / L} + sigmaMinus * e^{-i 2 pi r x / L}
// restricted to the sl(2) subalgebra indexed by wavenumber r. The effective
// circle length for the subalgebra is ell = L / r.
struct DeformationParams {
  cplx sigma0{1.0, 0.0};
  cplx sigmaPlus{0.0, 0.0};
  cplx sigmaMinus{0.0, 0.0};
  int r = 1;
  double L = 1.0;
  BoundaryCondition boundary = BoundaryCondition::periodic;

  double ell() const { return L / static_cast<double>(r); }
};

// Uniform evolution for duration T on a circle of length L:
// diag(e^{i pi T / l}, e^{-i pi T / l}) with l = L (r = 1 sector).
Mat2 build_u0(double T, double L);

// Parabolic step (sigma0 = sigmaPlus = 1, sigmaMinus = 0) for duration T on
// effective length l: [[1 + i b, -i b], [i b, 1 - i b]], b = pi T / l.
Mat2 build_u1(double T, double l);

// Hyperbolic step (sigma0 = sigmaPlus = 0, sigmaMinus = 1) for duration T on
// effective length l: [[cosh x, i sinh x], [-i sinh x, cosh x]], x = pi T / l.
Mat2 build_u2(double T, double l);

// Elliptic step with a complex profile (sigma0 = cos Gamma real part plus an
// imaginary chiral-asymmetric piece): with theta = pi T / l,
//   holomorphic:     [[cos t + i cos G sin t, -sin t sin G],
//                     [ sin t sin G,           cos t - i cos G sin t]]
//   antiholomorphic: same with both off-diagonal signs flipped.
Mat2 build_u3(double T, double l, double Gamma, Chirality chi);

// The traceless generator K such that U(T) = exp(T K) for the deformation:
//   K = i (pi / ell) [[sigma0, sigmaMinus - conj(sigmaPlus)],
//                     [conj(sigmaPlus) - sigmaMinus, -sigma0]]
Mat2 deformation_generator(const DeformationParams& dp);

// exp(T * deformation_generator(dp)).
Mat2 build_from_deformation(const DeformationParams& dp, double T);

// Classify a unimodular matrix by its conjugacy class. Ties resolve to the
// lowest-numbered class in the order SU11, SU2, SL2R, SL2C.
MobiusClass classify_group(const Mat2& m, double tol = 1e-9);

// Apply the Mobius map z -> (a z + b) / (c z + d). A pole maps to the point
// at infinity, encoded as cplx(inf, 0).
cplx mobius_apply(const Mat2& m, cplx z);

bool is_point_at_infinity(cplx z);

// Antiholomorphic partner: sigma_x * conj(U) * sigma_x.
inline Mat2 antiholomorphic_partner(const Mat2& u) { return sigmaXConjugate(u); }

}  // namespace drivencft
