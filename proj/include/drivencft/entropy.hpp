#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "drivencft/complex2x2.hpp"
#include "drivencft/drive.hpp"
#include "drivencft/errors.hpp"
#include "drivencft/scaled_product.hpp"

namespace drivencft {

// Which entanglement cut the entropy formula models: the symmetric
// two-interval cut of a periodic system, or the half-chain cut of an open
// system (half the periodic value, twist factor evaluated at z = +1 by
// default).
enum class EntropyBoundary { periodicTwoInterval, openHalfChain };

// Accumulated chiral / antichiral step products of a drive run.
struct EvolutionState {
  ScaledProduct chiral = ScaledProduct::identity();
  ScaledProduct antichiral = ScaledProduct::identity();
  std::uint64_t steps = 0;
  double physTime = 0.0;  // accumulated duration in units of L
};

// Multiply one elementary step into both products, renormalizing and
// accumulating log-scales. "paper" ordering appends the new step on the
// right (first step leftmost).
void evolve_product(EvolutionState& state, const Mat2& stepHolo,
                    const Mat2& stepAnti, Ordering ordering,
                    double durationOverL);

// Entropy change carrying the principal-branch imaginary residual of the
// log argument (reported, never silently dropped).
struct EntropyValue {
  double value = 0.0;
  double imagResidual = 0.0;
};

// Entanglement-entropy change of the evolved state:
//   dS = pref * ( log| Fh * Fa | + 2 (s_chiral + s_antichiral) )
// where F = (a z + b)(c z + d) / z on the unit-normalized product entries,
// pref = c (1+m) / (12 m), halved for the open half-chain cut. twistZ
// defaults to -1 (periodic two-interval) or +1 (open half-chain).
EntropyValue entanglement_delta(const EvolutionState& state, double c,
                                EntropyBoundary boundary, double renyiM = 1.0,
                                std::optional<double> twistZ = std::nullopt);

// Same functional form evaluated for possibly non-unitary products; the
// real part is the pseudo-entropy change, the residual its imaginary part.
EntropyValue pseudo_entropy_delta(const EvolutionState& state, double c = 1.0);

// log ||Pi_j||_F / j of the chiral product after `steps` elementary letters
// of the protocol, i.e. the finite-time Lyapunov-exponent estimate per
// elementary matrix.
double lyapunov_estimate(const Protocol& protocol, std::uint64_t steps);

struct EntropySample {
  double n_or_step = 0.0;
  double physTime = 0.0;
  double value = 0.0;
  double imagResidual = 0.0;
};

struct EntropySeries {
  std::vector<EntropySample> samples;
  double c = 1.0;
  EntropyBoundary boundary = EntropyBoundary::periodicTwoInterval;
  double renyiM = 1.0;
};

// Entropy at the stroboscopic times j = 2^n, n = 0..n_max, of the two-letter
// recursive drive with elementary matrices (m0, n0), computed by block
// doubling (O(n_max) multiplications). Sample n_or_step holds the doubling
// index n; physTime accumulates the true durations.
EntropySeries tm_entropy_series(const Mat2& m0Holo, const Mat2& m0Anti,
                                const Mat2& n0Holo, const Mat2& n0Anti,
                                int n_max, double c, EntropyBoundary boundary,
                                double t0OverL = 0.0, double t1OverL = 0.0,
                                double renyiM = 1.0,
                                std::optional<double> twistZ = std::nullopt);

}  // namespace drivencft
