#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "drivencft/complex2x2.hpp"
#include "drivencft/drive.hpp"
#include "drivencft/entropy.hpp"
#include "drivencft/errors.hpp"
#include "drivencft/threading.hpp"

namespace drivencft {

// Parameter family of the random multipolar drive built from a uniform step
// and a parabolic step:
//   fixedPoint: T0/L = ell1 + K, T1/L = K           (ell1 even)
//   preimage:   T0/L fixed, T1/L on the first-order preimage line offset K
enum class RmdFamily { fixedPoint, preimage };

struct RmdParams {
  int eta = 0;
  double K = 0.0;
  RmdFamily family = RmdFamily::fixedPoint;
  int ell1 = 0;             // fixed-point family offset (even)
  double T0_over_L = 2.0 / 3.0;  // preimage family anchor
  int xi = 0;               // preimage order (0 = fixed-point family)
  double c = 1.0;
};

// Elementary step matrices (M0, N0) of the family: a uniform step and a
// parabolic step with the family's durations, both on the full circle.
std::pair<Mat2, Mat2> rmd_unit_cells(const RmdParams& rp);

// First sample of the series whose value exceeds S_star, as its n_or_step;
// NaN when the threshold is never reached.
double lifetime(const EntropySeries& series, double S_star);

// Lifetime (in elementary steps) of a single coin realization driving the
// level-eta blocks (Mb, Nb): the first block after which the two-interval
// entropy with the given central charge exceeds S_star. Escape to numeric
// overflow counts as crossing at that block. NaN if maxBlocks pass without
// crossing.
double rmd_lifetime_single(const Mat2& Mb, const Mat2& Nb, int eta,
                           std::uint64_t seed, double S_star,
                           std::uint64_t maxBlocks, double c = 1.0);

struct LifetimeStats {
  double tStarMean = 0.0;
  double tStarStderr = 0.0;
  double dispersion = 0.0;  // sample standard deviation
  int realizations = 0;
  int reached = 0;          // runs that crossed the threshold
  double threshold = 10.0;
  std::vector<double> perRun;  // elementary steps; NaN = not reached
};

// Ensemble of independent realizations with per-run seeds mix(seed, index);
// reductions are performed in fixed index order so results are identical
// for any thread count.
LifetimeStats ensemble_lifetime(const RmdParams& rp, int realizations,
                                std::uint64_t seed, double S_star = 10.0,
                                std::uint64_t maxBlocks = 1000000000ULL,
                                ExecutionPolicy policy =
                                    ExecutionPolicy::parallel);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderrSlope = 0.0;
};

// Ordinary least squares of log(t_star) against log(1/K).
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points);

// Mean and half-difference of a block pair: Mbar = (M+N)/2, D = (M-N)/2,
// MbarNorm = Mbar / sqrt(det Mbar), theta = arccos(clamp(Re tr(MbarNorm)/2)).
struct AveragedPair {
  Mat2 Mbar;
  Mat2 D;
  Mat2 MbarNorm;
  cplx detMbar;
  double theta = 0.0;
};

AveragedPair averaged_matrices(const Mat2& Meta, const Mat2& Neta);

// The parametric closed orbit {(cos(2 i theta), cos(2 (i+1) theta))} of the
// trace-pair plane in its tr/2-normalized convention, i = 0..i_max.
std::vector<std::pair<double, double>> closed_orbit(double theta, int i_max);

// Largest Chebyshev distance from the (raw, tr-valued) trajectory pairs,
// normalized by 2, to the dense ellipse {(cos u, cos(u + theta))}.
double orbit_deviation(const std::vector<std::pair<double, double>>& rawPairs,
                       double theta, int samples = 8192);

struct TraceTrajectory {
  std::vector<std::pair<double, double>> pairs;  // (x_i, x_{i+1}), raw traces
  bool escaped = false;
};

// Consecutive traces x_i = Re tr(Pi_i) of the running block product,
// starting from x_0 = 2 (identity); marked escaped once the scale overflows
// the representable range.
TraceTrajectory trace_trajectory(const RmdParams& rp, std::uint64_t blocks,
                                 std::uint64_t seed);

// Deformation parameters of an elliptic SU(1,1) matrix: the principal matrix
// logarithm matched to the generator basis of build_from_deformation with
// the convention sigmaMinus = 0 and the stated duration.
struct Su11Params {
  cplx sigma0{0.0, 0.0};
  cplx sigmaPlus{0.0, 0.0};
  cplx sigmaMinus{0.0, 0.0};
  double durationOverL = 0.0;
};

Su11Params effective_su11_params(const Mat2& V, double durationOverL);

}  // namespace drivencft
