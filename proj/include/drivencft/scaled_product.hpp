#pragma once

#include <cmath>

#include "drivencft/complex2x2.hpp"
#include "drivencft/errors.hpp"

namespace drivencft {

// A 2x2 matrix product kept in the factored form e^{logScale} * unit with
// ||unit||_F = sqrt(2), so products of thousands of steps never overflow.
// For a unimodular represented matrix, det(unit) = e^{-2 logScale}.
struct ScaledProduct {
  Mat2 unit{};            // Frobenius norm sqrt(2)
  double logScale = 0.0;  // natural-log magnitude factor

  static ScaledProduct identity() { return ScaledProduct{}; }

  static ScaledProduct of(const Mat2& m) {
    ScaledProduct sp;
    sp.unit = m;
    sp.logScale = 0.0;
    sp.renormalize();
    return sp;
  }

  // May overflow for large logScale; callers needing magnitudes should work
  // with logScale directly.
  Mat2 represented() const { return std::exp(logScale) * unit; }

  ScaledProduct times(const ScaledProduct& rhs) const {
    ScaledProduct out;
    out.unit = unit * rhs.unit;
    out.logScale = logScale + rhs.logScale;
    out.renormalize();
    return out;
  }

  void multiplyRight(const Mat2& m) {
    unit = unit * m;
    renormalize();
  }

  void multiplyLeft(const Mat2& m) {
    unit = m * unit;
    renormalize();
  }

  void renormalize() {
    if (!allFinite(unit))
      throw NumericError("scaled product became non-finite");
    double n = frobeniusNorm(unit);
    if (!(n > 0.0)) throw NumericError("scaled product collapsed to zero");
    double root2 = std::sqrt(2.0);
    unit = cplx(root2 / n, 0.0) * unit;
    logScale += std::log(n / root2);
    if (!std::isfinite(logScale))
      throw NumericError("scaled product logScale overflowed");
  }
};

}  // namespace drivencft
