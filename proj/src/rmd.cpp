#include "drivencft/rmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "drivencft/mobius.hpp"
#include "drivencft/rng.hpp"
#include "drivencft/tracemap.hpp"

namespace drivencft {

namespace {

constexpr double kPi = std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_family(const RmdParams& rp) {
  if (rp.eta < 0 || rp.eta > 40)
    throw InvalidParameter("multipolar order out of range");
  if (!(rp.K > 0.0) || !std::isfinite(rp.K))
    throw InvalidParameter("K must be positive and finite");
  if (!(rp.c > 0.0)) throw InvalidParameter("central charge must be positive");
  if (rp.family == RmdFamily::fixedPoint) {
    if (rp.ell1 < 0 || rp.ell1 % 2 != 0)
      throw InvalidParameter(
          "fixed-point family requires a non-negative even ell1 "
          "(odd offsets reduce to even by a global phase)");
  } else {
    if (rp.xi < 1)
      throw InvalidParameter("preimage family requires xi >= 1");
  }
}

}  // namespace

std::pair<Mat2, Mat2> rmd_unit_cells(const RmdParams& rp) {
  validate_family(rp);
  double t0, t1;
  if (rp.family == RmdFamily::fixedPoint) {
    t0 = static_cast<double>(rp.ell1) + rp.K;
    t1 = rp.K;
  } else {
    std::tie(t0, t1) = first_preimage_params(rp.T0_over_L, rp.K);
  }
  return {build_u0(t0, 1.0), build_u1(t1, 1.0)};
}

double lifetime(const EntropySeries& series, double S_star) {
  if (series.samples.empty())
    throw InvalidParameter("lifetime requires a non-empty series");
  for (const auto& s : series.samples)
    if (s.value > S_star) return s.n_or_step;
  return kNaN;
}

double rmd_lifetime_single(const Mat2& Mb, const Mat2& Nb, int eta,
                           std::uint64_t seed, double S_star,
                           std::uint64_t maxBlocks, double c) {
  if (!(S_star > 0.0)) throw InvalidParameter("S_star must be positive");
  if (eta < 0 || eta > 40) throw InvalidParameter("eta out of range");
  const double thr = 3.0 * S_star / (2.0 * c);
  const double perBlock = std::ldexp(1.0, eta);
  const double root2 = std::sqrt(2.0);
  Mat2 u = Mat2::identity();
  double s = 0.0;
  for (std::uint64_t i = 0; i < maxBlocks; ++i) {
    u = u * (coinLetter(seed, i) == 0 ? Mb : Nb);
    double n = frobeniusNorm(u);
    u = cplx(root2 / n, 0.0) * u;
    s += std::log(n / root2);
    if (!std::isfinite(s)) throw NumericError("lifetime walker overflowed");
    // Escape: the scale alone certifies the threshold was passed long ago.
    if (s > 300.0) return static_cast<double>(i + 1) * perBlock;
    if (s > thr - 2.0) {
      double grow = std::log(std::abs(u.a - u.b)) + s;
      if (grow > thr) return static_cast<double>(i + 1) * perBlock;
    }
  }
  return kNaN;
}

LifetimeStats ensemble_lifetime(const RmdParams& rp, int realizations,
                                std::uint64_t seed, double S_star,
                                std::uint64_t maxBlocks,
                                ExecutionPolicy policy) {
  if (realizations < 1)
    throw InvalidParameter("realizations must be >= 1");
  auto [m0, n0] = rmd_unit_cells(rp);
  BlockPair bp = tm_blocks(m0, n0, rp.eta);
  const Mat2 Mb = bp.M.represented();
  const Mat2 Nb = bp.N.represented();

  LifetimeStats stats;
  stats.realizations = realizations;
  stats.threshold = S_star;
  stats.perRun.assign(static_cast<std::size_t>(realizations), kNaN);
  parallel_for(realizations, policy, [&](std::int64_t r) {
    std::uint64_t runSeed = mix(seed, static_cast<std::uint64_t>(r));
    stats.perRun[static_cast<std::size_t>(r)] = rmd_lifetime_single(
        Mb, Nb, rp.eta, runSeed, S_star, maxBlocks, rp.c);
  });

  // Fixed-order reduction for bitwise reproducibility.
  double sum = 0.0;
  int reached = 0;
  for (double v : stats.perRun)
    if (std::isfinite(v)) {
      sum += v;
      ++reached;
    }
  stats.reached = reached;
  if (reached == 0) {
    stats.tStarMean = kNaN;
    stats.tStarStderr = kNaN;
    stats.dispersion = kNaN;
    return stats;
  }
  stats.tStarMean = sum / reached;
  double ss = 0.0;
  for (double v : stats.perRun)
    if (std::isfinite(v)) {
      double d = v - stats.tStarMean;
      ss += d * d;
    }
  stats.dispersion = reached > 1 ? std::sqrt(ss / (reached - 1)) : 0.0;
  stats.tStarStderr = stats.dispersion / std::sqrt(static_cast<double>(reached));
  return stats;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw InvalidParameter("scaling fit requires at least 3 points");
  std::size_t n = points.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [K, tStar] = points[i];
    if (!(K > 0.0) || !(tStar > 0.0) || !std::isfinite(K) ||
        !std::isfinite(tStar))
      throw InvalidParameter("scaling fit requires positive finite points");
    xs[i] = std::log(1.0 / K);
    ys[i] = std::log(tStar);
  }
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (!(sxx > 0.0))
    throw InvalidParameter("scaling fit requires distinct K values");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += resid * resid;
  }
  fit.stderrSlope =
      n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

AveragedPair averaged_matrices(const Mat2& Meta, const Mat2& Neta) {
  if (!allFinite(Meta) || !allFinite(Neta))
    throw InvalidParameter("averaged_matrices requires finite blocks");
  AveragedPair ap;
  ap.Mbar = 0.5 * (Meta + Neta);
  ap.D = 0.5 * (Meta - Neta);
  ap.detMbar = det(ap.Mbar);
  if (!(ap.detMbar.real() > 0.0) ||
      std::abs(ap.detMbar.imag()) >
          1e-6 * std::max(1.0, std::abs(ap.detMbar)))
    throw NumericError("averaged matrix cannot be normalized: det <= 0");
  cplx invRoot = 1.0 / std::sqrt(ap.detMbar);
  ap.MbarNorm = invRoot * ap.Mbar;
  double x = std::clamp(tr(ap.MbarNorm).real() / 2.0, -1.0, 1.0);
  ap.theta = std::acos(x);
  return ap;
}

std::vector<std::pair<double, double>> closed_orbit(double theta, int i_max) {
  if (i_max < 1) throw InvalidParameter("i_max must be >= 1");
  std::vector<std::pair<double, double>> orbit;
  orbit.reserve(static_cast<std::size_t>(i_max) + 1);
  for (int i = 0; i <= i_max; ++i)
    orbit.emplace_back(std::cos(2.0 * i * theta),
                       std::cos(2.0 * (i + 1) * theta));
  return orbit;
}

double orbit_deviation(const std::vector<std::pair<double, double>>& rawPairs,
                       double theta, int samples) {
  if (samples < 8) throw InvalidParameter("samples must be >= 8");
  std::vector<double> cx(static_cast<std::size_t>(samples)),
      cy(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    double u = 2.0 * kPi * static_cast<double>(k) / samples;
    cx[static_cast<std::size_t>(k)] = std::cos(u);
    cy[static_cast<std::size_t>(k)] = std::cos(u + theta);
  }
  double worst = 0.0;
  for (const auto& [rawX, rawY] : rawPairs) {
    double x = rawX / 2.0, y = rawY / 2.0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
      double d = std::max(std::abs(x - cx[static_cast<std::size_t>(k)]),
                          std::abs(y - cy[static_cast<std::size_t>(k)]));
      if (d < best) best = d;
    }
    if (best > worst) worst = best;
  }
  return worst;
}

TraceTrajectory trace_trajectory(const RmdParams& rp, std::uint64_t blocks,
                                 std::uint64_t seed) {
  if (blocks < 1) throw InvalidParameter("blocks must be >= 1");
  auto [m0, n0] = rmd_unit_cells(rp);
  BlockPair bp = tm_blocks(m0, n0, rp.eta);
  const Mat2 Mb = bp.M.represented();
  const Mat2 Nb = bp.N.represented();
  const double root2 = std::sqrt(2.0);

  TraceTrajectory traj;
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(blocks) + 1);
  xs.push_back(2.0);  // trace of the identity
  Mat2 u = Mat2::identity();
  double s = 0.0;
  for (std::uint64_t i = 0; i < blocks; ++i) {
    u = u * (coinLetter(seed, i) == 0 ? Mb : Nb);
    double n = frobeniusNorm(u);
    u = cplx(root2 / n, 0.0) * u;
    s += std::log(n / root2);
    if (s > 300.0) {
      traj.escaped = true;
      break;
    }
    xs.push_back(tr(u).real() * std::exp(s));
  }
  traj.pairs.reserve(xs.size() > 0 ? xs.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    traj.pairs.emplace_back(xs[i], xs[i + 1]);
  return traj;
}

Su11Params effective_su11_params(const Mat2& V, double durationOverL) {
  if (!(durationOverL > 0.0) || !std::isfinite(durationOverL))
    throw InvalidParameter("duration must be positive and finite");
  if (classify_group(V, 1e-7) != MobiusClass::SU11)
    throw ClassError("expected an SU(1,1) matrix");
  cplx t = tr(V);
  if (std::abs(t.real()) >= 2.0)
    throw ClassError("expected an elliptic matrix (|Re tr| < 2)");

  EllipticLog lg = logElliptic(V);
  cplx denom(0.0, kPi * durationOverL);
  Mat2 W = (1.0 / denom) * lg.X;

  Su11Params out;
  out.sigma0 = W.a;
  out.sigmaPlus = std::conj(W.c);
  out.sigmaMinus = cplx(0.0, 0.0);
  out.durationOverL = durationOverL;

  DeformationParams dp;
  dp.sigma0 = out.sigma0;
  dp.sigmaPlus = out.sigmaPlus;
  dp.sigmaMinus = out.sigmaMinus;
  dp.r = 1;
  dp.L = 1.0;
  Mat2 rebuilt = build_from_deformation(dp, durationOverL);
  if (maxAbsDiff(rebuilt, V) > 1e-9)
    throw NumericError(
        "generator extraction failed to reproduce the input matrix");
  return out;
}

}  // namespace drivencft
