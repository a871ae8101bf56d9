#include "drivencft/entropy.hpp"

#include <cmath>

namespace drivencft {

void evolve_product(EvolutionState& state, const Mat2& stepHolo,
                    const Mat2& stepAnti, Ordering ordering,
                    double durationOverL) {
  if (!allFinite(stepHolo) || !allFinite(stepAnti))
    throw InvalidParameter("step matrices must be finite");
  if (ordering == Ordering::paper) {
    state.chiral.multiplyRight(stepHolo);
    state.antichiral.multiplyRight(stepAnti);
  } else {
    state.chiral.multiplyLeft(stepHolo);
    state.antichiral.multiplyLeft(stepAnti);
  }
  state.steps += 1;
  state.physTime += durationOverL;
}

namespace {

cplx twist_factor(const Mat2& u, double z) {
  return (u.a * z + u.b) * (u.c * z + u.d) / z;
}

}  // namespace

EntropyValue entanglement_delta(const EvolutionState& state, double c,
                                EntropyBoundary boundary, double renyiM,
                                std::optional<double> twistZ) {
  if (!(renyiM > 0.0)) throw InvalidParameter("Renyi index must be positive");
  if (!std::isfinite(c)) throw InvalidParameter("central charge must be finite");
  double z = twistZ.value_or(
      boundary == EntropyBoundary::periodicTwoInterval ? -1.0 : 1.0);
  if (z == 0.0 || !std::isfinite(z))
    throw InvalidParameter("twist insertion point must be finite, nonzero");

  cplx combined =
      twist_factor(state.chiral.unit, z) * twist_factor(state.antichiral.unit, z);
  double mag = std::abs(combined);
  if (!(mag > 0.0))
    throw SingularConfiguration("entropy twist factor vanished");

  double pref = c * (1.0 + renyiM) / (12.0 * renyiM);
  if (boundary == EntropyBoundary::openHalfChain) pref *= 0.5;

  EntropyValue out;
  out.value = pref * (std::log(mag) +
                      2.0 * (state.chiral.logScale + state.antichiral.logScale));
  out.imagResidual = std::abs(std::arg(combined));
  return out;
}

EntropyValue pseudo_entropy_delta(const EvolutionState& state, double c) {
  return entanglement_delta(state, c, EntropyBoundary::periodicTwoInterval,
                            1.0, -1.0);
}

double lyapunov_estimate(const Protocol& protocol, std::uint64_t steps) {
  if (steps == 0) throw InvalidParameter("steps must be >= 1");
  ScaledProduct prod = ScaledProduct::identity();
  for (std::uint64_t i = 0; i < steps; ++i) {
    const StepSpec& st =
        protocol_letter(protocol.law, i) == 0 ? protocol.step0 : protocol.step1;
    if (protocol.ordering == Ordering::paper)
      prod.multiplyRight(st.holo);
    else
      prod.multiplyLeft(st.holo);
  }
  double logNorm = prod.logScale +
                   std::log(frobeniusNorm(prod.unit) / std::sqrt(2.0)) +
                   0.5 * std::log(2.0);
  return logNorm / static_cast<double>(steps);
}

EntropySeries tm_entropy_series(const Mat2& m0Holo, const Mat2& m0Anti,
                                const Mat2& n0Holo, const Mat2& n0Anti,
                                int n_max, double c, EntropyBoundary boundary,
                                double t0OverL, double t1OverL, double renyiM,
                                std::optional<double> twistZ) {
  if (n_max < 0 || n_max > 60)
    throw CapacityError("stroboscopic order supports 0 <= n_max <= 60");

  EntropySeries series;
  series.c = c;
  series.boundary = boundary;
  series.renyiM = renyiM;

  ScaledProduct mh = ScaledProduct::of(m0Holo);
  ScaledProduct ma = ScaledProduct::of(m0Anti);
  ScaledProduct nh = ScaledProduct::of(n0Holo);
  ScaledProduct na = ScaledProduct::of(n0Anti);
  double timeM = t0OverL;
  double timeN = t1OverL;

  for (int n = 0; n <= n_max; ++n) {
    EvolutionState st;
    st.chiral = mh;
    st.antichiral = ma;
    st.steps = std::uint64_t{1} << n;
    st.physTime = timeM;
    EntropyValue v = entanglement_delta(st, c, boundary, renyiM, twistZ);
    series.samples.push_back(
        EntropySample{static_cast<double>(n), timeM, v.value, v.imagResidual});
    if (n == n_max) break;
    ScaledProduct mh2 = mh.times(nh);
    ScaledProduct ma2 = ma.times(na);
    ScaledProduct nh2 = nh.times(mh);
    ScaledProduct na2 = na.times(ma);
    mh = mh2;
    ma = ma2;
    nh = nh2;
    na = na2;
    double t = timeM + timeN;
    timeM = t;
    timeN = t;
  }
  return series;
}

}  // namespace drivencft
