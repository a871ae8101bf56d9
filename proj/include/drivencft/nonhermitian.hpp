#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drivencft/complex2x2.hpp"
#include "drivencft/entropy.hpp"
#include "drivencft/errors.hpp"
#include "drivencft/threading.hpp"

namespace drivencft {

// Parameters of the combined unitary/non-unitary two-step protocol: each
// step is a dissipative stretch U2(lambda) followed by a uniform stretch and
// a chirality-asymmetric elliptic stretch, with durations (in units of the
// effective length l = L/r, r > 1)
//   T0/l = 1/2 + Delta,  T1/l = 1/2 - Delta.
struct CombinedParams {
  double Delta = 0.0;
  double lambda = 0.0;
  double Gamma = 1.5707963267948966;  // pi/2
  double c = 1.0;
  int r = 2;  // periodic system with r > 1; matrices live in l-units

  double t0_over_l() const { return 0.5 + Delta; }
  double t1_over_l() const { return 0.5 - Delta; }
};

struct CombinedBlocks {
  Mat2 M0, N0;          // chiral step matrices
  Mat2 M0anti, N0anti;  // antichiral partners
};

// M0 = U2(lambda) U0(T0) U3(T0), N0 = U2(lambda) U0(T1) U3(T1); antichiral
// versions use the sign-flipped elliptic factor.
CombinedBlocks build_combined_blocks(const CombinedParams& cp);

// Re tr(M0^2 N0^2) - 2: negative in the non-heating phase, positive in the
// heating phase, zero on the analytic boundary.
double phase_boundary_residual(const CombinedParams& cp);

enum class PhaseLabel { heating, nonheating, boundary };

inline const char* to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::heating: return "heating";
    case PhaseLabel::nonheating: return "nonheating";
    default: return "boundary";
  }
}

// Lyapunov estimate of the two-letter recursive drive of the combined
// blocks after at least `steps` elementary matrices (doubling construction).
double combined_lyapunov(const CombinedParams& cp, std::uint64_t steps);

// heating if the Lyapunov estimate exceeds lyap_threshold, nonheating if it
// is below lyap_threshold/10, boundary otherwise.
PhaseLabel phase_classify(const CombinedParams& cp,
                          std::uint64_t steps = 16384,
                          double lyap_threshold = 1e-3);

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  double at(int i) const {
    if (count <= 1) return start;
    return start + (stop - start) * static_cast<double>(i) /
                       static_cast<double>(count - 1);
  }
};

struct PhaseCell {
  double delta = 0.0;
  double lambda = 0.0;
  PhaseLabel label = PhaseLabel::nonheating;
  double lyapunov = 0.0;
  double residual = 0.0;
};

struct PhaseDiagram {
  std::vector<PhaseCell> cells;  // row-major: delta index outer, lambda inner
  std::vector<std::pair<double, double>> boundary;  // (delta, lambda*) polyline
  int nDelta = 0;
  int nLambda = 0;
};

// Per-cell classification over the (Delta, lambda) grid plus the analytic
// boundary: per Delta column, sign changes of phase_boundary_residual in
// lambda refined by bisection to 1e-6.
PhaseDiagram phase_diagram(const GridSpec& deltaGrid, const GridSpec& lambdaGrid,
                           double Gamma, std::uint64_t steps,
                           ExecutionPolicy policy = ExecutionPolicy::parallel,
                           double lyap_threshold = 1e-3);

// Which reading of the dipole trace bounds to apply.
enum class TraceBound { realPart, modulus };

// Result of the emergent-compact-group similarity construction for a dipole
// pair related by M1 = sigma_z conj(N1) sigma_z.
struct Su2Verdict {
  bool reducible = false;
  std::string reason;  // set when not reducible
  Mat2 P;              // det-1 eigenvector matrix of M1
  Mat2 W;              // diagonal rebalancing
  Mat2 S;              // composite similarity P W^{-1}
  double xy = 0.0;     // rebalancing pairing product
  double su2ResidualM = 0.0;
  double su2ResidualN = 0.0;
  double traceIdentityResidual = 0.0;  // |tr(M1 N1) - (2 + 4 sin^2(th) xy)|
  bool conjugationOk = false;
  bool traceBoundM1Ok = false;   // condition on tr(M1)
  bool traceBoundM1N1Ok = false; // condition on tr(M1 N1)
};

// Checks the conjugation relation, non-triangularity, and the two trace
// bounds; when they hold, constructs the similarity S = P W^{-1} under which
// both dipoles are SU(2) within tol. Triangular or defective M1 throws
// DegenerateInput; failed conditions return notReducible with a reason.
Su2Verdict su2_reducibility_test(const Mat2& M1, const Mat2& N1,
                                 double tol = 1e-9,
                                 TraceBound bound = TraceBound::realPart);

// Pseudo-entropy series of the eta-multipolar random drive over the combined
// blocks: level-eta block pairs applied in lockstep to both chiralities, one
// sample per block at elementary index (i+1)*2^eta.
EntropySeries rmd_nonhermitian_run(const CombinedParams& cp, int eta,
                                   std::uint64_t blocks, std::uint64_t seed);

}  // namespace drivencft
