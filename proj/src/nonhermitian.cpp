#include "drivencft/nonhermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "drivencft/drive.hpp"
#include "drivencft/mobius.hpp"
#include "drivencft/rng.hpp"
#include "drivencft/scaled_product.hpp"

namespace drivencft {

namespace {

void validate(const CombinedParams& cp) {
  if (!std::isfinite(cp.Delta) || !std::isfinite(cp.lambda) ||
      !std::isfinite(cp.Gamma))
    throw InvalidParameter("combined-protocol parameters must be finite");
  if (cp.lambda < 0.0)
    throw InvalidParameter("lambda must be non-negative");
  if (!(cp.c > 0.0)) throw InvalidParameter("central charge must be positive");
  if (cp.r < 2) throw InvalidParameter("combined protocol requires r > 1");
}

}  // namespace

CombinedBlocks build_combined_blocks(const CombinedParams& cp) {
  validate(cp);
  double t0 = cp.t0_over_l();
  double t1 = cp.t1_over_l();
  // All factors take durations in units of the effective length l, so the
  // builders are called with l = 1.
  Mat2 u2 = build_u2(cp.lambda, 1.0);
  CombinedBlocks blocks;
  blocks.M0 = u2 * build_u0(t0, 1.0) * build_u3(t0, 1.0, cp.Gamma,
                                                Chirality::holomorphic);
  blocks.N0 = u2 * build_u0(t1, 1.0) * build_u3(t1, 1.0, cp.Gamma,
                                                Chirality::holomorphic);
  blocks.M0anti = antiholomorphic_partner(blocks.M0);
  blocks.N0anti = antiholomorphic_partner(blocks.N0);
  return blocks;
}

double phase_boundary_residual(const CombinedParams& cp) {
  CombinedBlocks b = build_combined_blocks(cp);
  return tr(b.M0 * b.M0 * b.N0 * b.N0).real() - 2.0;
}

double combined_lyapunov(const CombinedParams& cp, std::uint64_t steps) {
  if (steps < 2) throw InvalidParameter("steps must be >= 2");
  CombinedBlocks b = build_combined_blocks(cp);
  int n = 1;
  while ((std::uint64_t{1} << n) < steps && n < 60) ++n;
  BlockPair bp = tm_blocks(b.M0, b.N0, n);
  double logNorm = bp.M.logScale +
                   std::log(frobeniusNorm(bp.M.unit) / std::sqrt(2.0)) +
                   0.5 * std::log(2.0);
  return logNorm / std::ldexp(1.0, n);
}

PhaseLabel phase_classify(const CombinedParams& cp, std::uint64_t steps,
                          double lyap_threshold) {
  if (!(lyap_threshold > 0.0))
    throw InvalidParameter("threshold must be positive");
  double lam = combined_lyapunov(cp, steps);
  if (lam > lyap_threshold) return PhaseLabel::heating;
  if (lam < lyap_threshold / 10.0) return PhaseLabel::nonheating;
  return PhaseLabel::boundary;
}

PhaseDiagram phase_diagram(const GridSpec& deltaGrid,
                           const GridSpec& lambdaGrid, double Gamma,
                           std::uint64_t steps, ExecutionPolicy policy,
                           double lyap_threshold) {
  if (deltaGrid.count < 1 || lambdaGrid.count < 1)
    throw InvalidParameter("phase diagram grid must be non-empty");
  PhaseDiagram out;
  out.nDelta = deltaGrid.count;
  out.nLambda = lambdaGrid.count;
  out.cells.resize(static_cast<std::size_t>(deltaGrid.count) *
                   static_cast<std::size_t>(lambdaGrid.count));

  std::int64_t total = static_cast<std::int64_t>(out.cells.size());
  parallel_for(total, policy, [&](std::int64_t idx) {
    int di = static_cast<int>(idx / lambdaGrid.count);
    int li = static_cast<int>(idx % lambdaGrid.count);
    CombinedParams cp;
    cp.Delta = deltaGrid.at(di);
    cp.lambda = lambdaGrid.at(li);
    cp.Gamma = Gamma;
    PhaseCell& cell = out.cells[static_cast<std::size_t>(idx)];
    cell.delta = cp.Delta;
    cell.lambda = cp.lambda;
    cell.lyapunov = combined_lyapunov(cp, steps);
    cell.residual = phase_boundary_residual(cp);
    cell.label = cell.lyapunov > lyap_threshold ? PhaseLabel::heating
                 : cell.lyapunov < lyap_threshold / 10.0
                     ? PhaseLabel::nonheating
                     : PhaseLabel::boundary;
  });

  // Analytic boundary: per Delta column, bisect every sign change of the
  // residual along lambda.
  for (int di = 0; di < deltaGrid.count; ++di) {
    double delta = deltaGrid.at(di);
    auto residualAt = [&](double lambda) {
      CombinedParams cp;
      cp.Delta = delta;
      cp.lambda = lambda;
      cp.Gamma = Gamma;
      return phase_boundary_residual(cp);
    };
    for (int li = 0; li + 1 < lambdaGrid.count; ++li) {
      double lo = lambdaGrid.at(li), hi = lambdaGrid.at(li + 1);
      double flo = residualAt(lo), fhi = residualAt(hi);
      if (flo == 0.0) {
        out.boundary.emplace_back(delta, lo);
        continue;
      }
      if (flo * fhi >= 0.0) continue;
      for (int it = 0; it < 200 && hi - lo > 1e-6; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = residualAt(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      out.boundary.emplace_back(delta, 0.5 * (lo + hi));
    }
  }
  return out;
}

namespace {

double su2_residual(const Mat2& v) {
  return std::max({std::abs(v.a - std::conj(v.d)),
                   std::abs(v.b + std::conj(v.c)),
                   std::abs(det(v) - cplx(1.0, 0.0))});
}

}  // namespace

Su2Verdict su2_reducibility_test(const Mat2& M1, const Mat2& N1, double tol,
                                 TraceBound bound) {
  if (!allFinite(M1) || !allFinite(N1))
    throw InvalidParameter("dipole matrices must be finite");
  if (std::abs(det(M1) - cplx(1.0, 0.0)) > 1e-6 ||
      std::abs(det(N1) - cplx(1.0, 0.0)) > 1e-6)
    throw InvalidParameter("dipole matrices must be unimodular");

  Su2Verdict verdict;

  // Condition 1a: the construction needs genuinely non-triangular input.
  double scale = std::max(1.0, frobeniusNorm(M1));
  if (std::abs(M1.b) < 1e-12 * scale || std::abs(M1.c) < 1e-12 * scale)
    throw DegenerateInput(
        "triangular dipole: similarity construction undefined");

  // Condition 1b: conjugation relation M1 = sigma_z conj(N1) sigma_z.
  double conjRes = maxAbsDiff(M1, sigmaZConjugate(N1));
  verdict.conjugationOk = conjRes <= std::max(tol, 1e-9) * scale * 10.0;

  // Condition 2: trace of M1 effectively real and inside the compact range.
  cplx trM1 = tr(M1);
  bool trReal = std::abs(trM1.imag()) <= 1e-9 * scale;
  double trMeasure = bound == TraceBound::realPart ? std::abs(trM1.real())
                                                   : std::abs(trM1);
  verdict.traceBoundM1Ok = trReal && trMeasure <= 2.0;

  // Condition 3: trace of the pair product bounded by 2.
  cplx trMN = tr(M1 * N1);
  verdict.traceBoundM1N1Ok =
      std::abs(trMN.imag()) <= 1e-9 * scale * scale && trMN.real() <= 2.0;

  if (!verdict.conjugationOk) {
    verdict.reason = "conjugation relation violated";
    return verdict;
  }
  if (!verdict.traceBoundM1Ok) {
    verdict.reason = "trace condition fails: tr(M1) outside [-2, 2]";
    return verdict;
  }
  if (!verdict.traceBoundM1N1Ok) {
    verdict.reason = "trace condition fails: tr(M1 N1) > 2";
    return verdict;
  }

  // Eigenvector matrix of M1, normalized to det 1.
  auto [lam1, lam2] = eigenvalues2(M1);
  auto evec = [&](cplx lam) {
    Mat2 K = M1 - Mat2::diag(lam, lam);
    cplx v1a = K.b, v1b = -K.a;
    cplx v2a = K.d, v2b = -K.c;
    double n1 = std::sqrt(std::norm(v1a) + std::norm(v1b));
    double n2 = std::sqrt(std::norm(v2a) + std::norm(v2b));
    cplx va = n1 >= n2 ? v1a : v2a;
    cplx vb = n1 >= n2 ? v1b : v2b;
    double n = std::max(n1, n2);
    return std::pair<cplx, cplx>{va / n, vb / n};
  };
  auto [pa1, pc1] = evec(lam1);
  auto [pb1, pd1] = evec(lam2);
  Mat2 P{pa1, pb1, pc1, pd1};
  cplx detP = det(P);
  if (std::abs(detP) < 1e-8)
    throw DegenerateInput("defective dipole: eigenvectors do not span");
  P = (1.0 / std::sqrt(detP)) * P;
  verdict.P = P;

  // Rebalancing from the sigma_z pairings of the eigenvector columns.
  double x = (std::conj(P.b) * P.d + P.b * std::conj(P.d)).real();
  double y = (std::conj(P.a) * P.c + P.a * std::conj(P.c)).real();
  verdict.xy = x * y;

  double pairTol = 1e-12 * std::max(1.0, frobeniusNorm(P) * frobeniusNorm(P));
  if (std::abs(x) < pairTol && std::abs(y) < pairTol) {
    verdict.W = Mat2::identity();
  } else if (std::abs(x) < pairTol || std::abs(y) < pairTol) {
    verdict.reason = "one-sided pairing zero: not reducible";
    return verdict;
  } else {
    verdict.W = Mat2::diag(1.0, std::sqrt(cplx(x / y, 0.0)));
  }

  verdict.S = P * inverse(verdict.W);
  Mat2 Sinv = inverse(verdict.S);
  Mat2 vm = Sinv * M1 * verdict.S;
  Mat2 vn = Sinv * N1 * verdict.S;
  verdict.su2ResidualM = su2_residual(vm);
  verdict.su2ResidualN = su2_residual(vn);

  double cosTh = std::clamp(trM1.real() / 2.0, -1.0, 1.0);
  double sin2Th = 1.0 - cosTh * cosTh;
  verdict.traceIdentityResidual =
      std::abs(trMN - cplx(2.0 + 4.0 * sin2Th * verdict.xy, 0.0));

  bool su2Ok = verdict.su2ResidualM <= tol * 100.0 &&
               verdict.su2ResidualN <= tol * 100.0;
  if (!su2Ok) {
    verdict.reason = "similarity failed to compactify the pair";
    return verdict;
  }
  verdict.reducible = true;
  return verdict;
}

EntropySeries rmd_nonhermitian_run(const CombinedParams& cp, int eta,
                                   std::uint64_t blocks, std::uint64_t seed) {
  if (eta < 0 || eta > 40) throw InvalidParameter("eta out of range");
  if (blocks < 1) throw InvalidParameter("blocks must be >= 1");
  CombinedBlocks b = build_combined_blocks(cp);
  BlockPair holo = tm_blocks(b.M0, b.N0, eta);
  BlockPair anti = tm_blocks(b.M0anti, b.N0anti, eta);

  // Per-block durations in units of l (each elementary step also carries the
  // dissipative stretch lambda).
  double durM = cp.t0_over_l() + cp.lambda;
  double durN = cp.t1_over_l() + cp.lambda;
  for (int k = 0; k < eta; ++k) {
    double t = durM + durN;
    durM = t;
    durN = t;
  }

  EntropySeries series;
  series.c = cp.c;
  series.boundary = EntropyBoundary::periodicTwoInterval;
  series.renyiM = 1.0;
  series.samples.reserve(static_cast<std::size_t>(blocks));

  EvolutionState state;
  const double perBlock = std::ldexp(1.0, eta);
  for (std::uint64_t i = 0; i < blocks; ++i) {
    int letter = coinLetter(seed, i);
    const BlockPair& hp = holo;
    const BlockPair& ap = anti;
    state.chiral =
        state.chiral.times(letter == 0 ? hp.M : hp.N);
    state.antichiral =
        state.antichiral.times(letter == 0 ? ap.M : ap.N);
    state.steps += static_cast<std::uint64_t>(perBlock);
    state.physTime += letter == 0 ? durM : durN;
    EntropyValue v = pseudo_entropy_delta(state, cp.c);
    series.samples.push_back(EntropySample{
        static_cast<double>(i + 1) * perBlock, state.physTime, v.value,
        v.imagResidual});
  }
  return series;
}

}  // namespace drivencft
