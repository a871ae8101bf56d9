#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "drivencft/errors.hpp"

namespace drivencft {

// A point of the two-trace phase plane (p, q) = (tr(M)^2, tr(MN)-type pair).
struct TracePoint {
  double p = 0.0;
  double q = 0.0;
};

// Phase-plane regions. Boundary points go to the lowest-numbered matching
// region; points with p < 0 belong to no region.
enum class Region { none = 0, I = 1, II = 2, III = 3 };

// One step of the trace recursion x_{n+1} = x_{n-1}^2 (x_n - 2) + 2.
// Works for double, complex, and exact rational types.
template <typename T>
T tm_trace_step(const T& x_prev, const T& x_curr) {
  return x_prev * x_prev * (x_curr - T(2)) + T(2);
}

// The plane map K(p, q) = (q^2, p q - 2 p + 2), generic over the field type
// so exact rational orbits can be computed.
template <typename T>
std::pair<T, T> k_map_t(const T& p, const T& q) {
  return {q * q, p * q - T(2) * p + T(2)};
}

inline TracePoint k_map(TracePoint pt) {
  auto [p, q] = k_map_t(pt.p, pt.q);
  return TracePoint{p, q};
}

Region region_classify(TracePoint pt);

// Preimages of a target under K. Candidate parents have q = +-sqrt(target.p);
// for candidate q != 2 the parent is ((target.q - 2)/(q - 2), q), kept when
// its p >= 0. When sqrt(target.p) = 2 and target.q = 2 the entire ray
// {(p, 2) : p >= 0} maps to the target.
struct KInverse {
  std::vector<TracePoint> points;
  bool hasRay = false;
};

KInverse k_inverse(TracePoint target);

// Sampled point cloud of the preimage hierarchy of the fixed point (4, 2),
// orders 1..xi, windowed to p in [0, p_max]. Rays are sampled with
// samples_per_curve points and refined by bisection where pulled-back
// neighbours separate. Every emitted point forward-iterates to (4, 2) within
// roundoff in at most `order` steps.
struct PreimagePoint {
  int order = 0;
  double p = 0.0;
  double q = 0.0;
};

std::vector<PreimagePoint> preimage_cloud(int xi, double p_max,
                                          int samples_per_curve);

// Smallest xi <= xi_max with ||K^xi(pt) - (4,2)||_inf < tol, or -1 if none.
int is_preimage(TracePoint pt, int xi_max, double tol = 1e-9);

struct EscapeResult {
  bool escaped = false;
  int n_star = 0;  // meaningful only when escaped
  std::vector<TracePoint> trajectory;
};

// First n with |q_n| >= q_bound, |p_n| >= p_bound, or a non-finite entry,
// scanning the orbit p_0 = start before each application of K. Not escaped
// if maxiter states stay inside the box.
EscapeResult escape_time(TracePoint start, double q_bound = 50.0,
                         double p_bound = 2500.0, int maxiter = 64,
                         bool keepTrajectory = false);

// Initial plane point of the two-step drive with durations (T0, T1):
//   p1 = 4 [cos(pi t0) - pi t1 sin(pi t0)]^2
//   q1 = 2 [cos(2 pi t0) - 2 pi t1 sin(2 pi t0)]
// with t0 = T0/L, t1 = T1/L.
TracePoint initial_condition_from_params(double T0_over_L, double T1_over_L);

// All drive parameters (T0/L, T1/L) in (0,1) x (0,1) mapping to pt, sorted by
// ascending T0/L. Throws NumericError when pt is unreachable.
std::vector<std::pair<double, double>> params_from_trace_point(
    TracePoint pt, double tol = 1e-10);

// One-parameter family T1/L = (2 cos(pi t0) - K) / (2 pi sin(pi t0)); at
// K = 0 the image plane point lands on a first-order preimage of (4, 2).
std::pair<double, double> first_preimage_params(double T0_over_L, double K);

}  // namespace drivencft
