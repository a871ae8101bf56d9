#include "drivencft/tracemap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace drivencft {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(TracePoint pt) {
  return std::isfinite(pt.p) && std::isfinite(pt.q);
}

// One inverse branch: the parent of `target` whose q has the given sign.
// Returns nullopt when the branch is undefined (division by zero) or lands
// at negative p.
std::optional<TracePoint> pull_branch(TracePoint target, int sign) {
  if (target.p < 0.0) return std::nullopt;
  double q = static_cast<double>(sign) * std::sqrt(target.p);
  double denom = q - 2.0;
  if (denom == 0.0) return std::nullopt;
  double p = (target.q - 2.0) / denom;
  if (!(p >= 0.0)) return std::nullopt;
  return TracePoint{p, q};
}

}  // namespace

Region region_classify(TracePoint pt) {
  if (!(pt.p >= 0.0)) return Region::none;
  if (pt.p - 2.0 <= pt.q && pt.q <= 2.0) return Region::I;
  if (pt.q >= 2.0) return Region::II;
  if (pt.q <= 2.0 && pt.p - 2.0 >= pt.q) return Region::III;
  return Region::none;
}

KInverse k_inverse(TracePoint target) {
  if (target.p < 0.0)
    throw InvalidParameter("k_inverse target must have p >= 0");
  KInverse out;
  double root = std::sqrt(target.p);
  for (int sign : {+1, -1}) {
    double q = static_cast<double>(sign) * root;
    if (q == 2.0) {
      if (target.q == 2.0) out.hasRay = true;
      continue;
    }
    double p = (target.q - 2.0) / (q - 2.0);
    if (p >= 0.0) out.points.push_back(TracePoint{p, q});
    if (root == 0.0) break;  // +0 and -0 are the same candidate
  }
  return out;
}

namespace {

struct CloudBuilder {
  double pMax;
  int samples;
  double gapEps;
  std::vector<PreimagePoint> out;

  void emit(int order, TracePoint pt) {
    if (pt.p >= 0.0 && pt.p <= pMax && finite(pt))
      out.push_back(PreimagePoint{order, pt.p, pt.q});
  }

  // Apply the sign chain (most significant choice first) to a first-order
  // base point; every produced point is an exact preimage-chain point, so it
  // forward-iterates back to (4, 2) within roundoff.
  std::optional<TracePoint> chain(TracePoint base,
                                  const std::vector<int>& signs) const {
    TracePoint cur = base;
    for (int s : signs) {
      auto nxt = pull_branch(cur, s);
      if (!nxt) return std::nullopt;
      cur = *nxt;
    }
    return cur;
  }

  // Sample the ray-based curve for one sign chain, refining the parameter t
  // (position on the order-1 ray q = 2) where consecutive images separate.
  void sampleRayCurve(int order, const std::vector<int>& signs) {
    auto eval = [&](double t) { return chain(TracePoint{t, 2.0}, signs); };
    std::optional<TracePoint> prev;
    double prevT = 0.0;
    for (int i = 0; i < samples; ++i) {
      double t = pMax * static_cast<double>(i) /
                 static_cast<double>(samples - 1);
      auto cur = eval(t);
      if (cur) emit(order, *cur);
      if (prev && cur) refine(order, prevT, *prev, t, *cur, eval, 0);
      prev = cur;
      prevT = t;
    }
  }

  template <typename F>
  void refine(int order, double tLo, TracePoint lo, double tHi, TracePoint hi,
              const F& eval, int depth) {
    if (depth >= 20) return;
    double gap = std::max(std::abs(lo.p - hi.p), std::abs(lo.q - hi.q));
    if (gap <= gapEps) return;
    double tm = 0.5 * (tLo + tHi);
    auto mid = eval(tm);
    if (!mid) return;
    emit(order, *mid);
    refine(order, tLo, lo, tm, *mid, eval, depth + 1);
    refine(order, tm, *mid, tHi, hi, eval, depth + 1);
  }
};

}  // namespace

std::vector<PreimagePoint> preimage_cloud(int xi, double p_max,
                                          int samples_per_curve) {
  if (xi < 1) throw InvalidParameter("preimage order must be >= 1");
  if (!(p_max > 0.0)) throw InvalidParameter("p_max must be positive");
  if (samples_per_curve < 2)
    throw InvalidParameter("samples_per_curve must be >= 2");

  CloudBuilder builder{p_max, samples_per_curve,
                       4.0 * std::max(p_max, 2.0 * std::sqrt(p_max)) /
                           static_cast<double>(samples_per_curve),
                       {}};
  const TracePoint isolatedBase{0.0, -2.0};  // the non-ray preimage of (4,2)

  for (int order = 1; order <= xi; ++order) {
    int chainLen = order - 1;
    std::vector<int> signs(static_cast<std::size_t>(chainLen), +1);
    // Enumerate all sign chains of length order-1.
    for (std::uint64_t mask = 0; mask < (1ULL << chainLen); ++mask) {
      for (int j = 0; j < chainLen; ++j)
        signs[static_cast<std::size_t>(j)] = (mask >> j) & 1ULL ? -1 : +1;
      builder.sampleRayCurve(order, signs);
      if (auto pt = builder.chain(isolatedBase, signs))
        builder.emit(order, *pt);
    }
  }
  return builder.out;
}

int is_preimage(TracePoint pt, int xi_max, double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");
  TracePoint cur = pt;
  for (int k = 0; k <= xi_max; ++k) {
    if (std::abs(cur.p - 4.0) < tol && std::abs(cur.q - 2.0) < tol) return k;
    if (!finite(cur)) return -1;
    cur = k_map(cur);
  }
  return -1;
}

EscapeResult escape_time(TracePoint start, double q_bound, double p_bound,
                         int maxiter, bool keepTrajectory) {
  if (!(q_bound > 0.0) || !(p_bound > 0.0))
    throw InvalidParameter("escape bounds must be positive");
  if (maxiter < 0) throw InvalidParameter("maxiter must be >= 0");
  EscapeResult res;
  TracePoint cur = start;
  for (int n = 0; n <= maxiter; ++n) {
    if (keepTrajectory) res.trajectory.push_back(cur);
    bool outside = !finite(cur) || std::abs(cur.q) >= q_bound ||
                   std::abs(cur.p) >= p_bound;
    if (outside) {
      res.escaped = true;
      res.n_star = n;
      return res;
    }
    if (n == maxiter) break;
    cur = k_map(cur);
  }
  res.escaped = false;
  res.n_star = maxiter;
  return res;
}

TracePoint initial_condition_from_params(double T0_over_L, double T1_over_L) {
  double th = kPi * T0_over_L;
  double a = std::cos(th) - kPi * T1_over_L * std::sin(th);
  double p1 = 4.0 * a * a;
  double q1 =
      2.0 * (std::cos(2.0 * th) - 2.0 * kPi * T1_over_L * std::sin(2.0 * th));
  return TracePoint{p1, q1};
}

std::vector<std::pair<double, double>> params_from_trace_point(TracePoint pt,
                                                               double tol) {
  // With c = cos(pi t0), s = sin(pi t0) > 0 and w = pi t1 s:
  //   p = 4 (c - w)^2,  p - q - 2 = 4 w^2,
  // so c = +-sqrt(p)/2 + +-sqrt(d)/2 over the four sign choices.
  std::vector<std::pair<double, double>> sols;
  double d = pt.p - pt.q - 2.0;
  if (pt.p < -tol || d < -tol)
    throw NumericError("trace point not reachable by the two-step drive");
  double sp = std::sqrt(std::max(pt.p, 0.0));
  double sd = std::sqrt(std::max(d, 0.0));
  for (int s : {+1, -1}) {
    for (int e : {+1, -1}) {
      double c = (s * sp + e * sd) / 2.0;
      if (std::abs(c) > 1.0) continue;
      double sinTh = std::sqrt(std::max(1.0 - c * c, 0.0));
      if (sinTh < 1e-14) continue;
      double t0 = std::acos(c) / kPi;
      double t1 = (c - s * sp / 2.0) / (kPi * sinTh);
      if (!(t0 > 0.0 && t0 < 1.0 && t1 > 0.0 && t1 < 1.0)) continue;
      TracePoint img = initial_condition_from_params(t0, t1);
      if (std::abs(img.p - pt.p) > tol || std::abs(img.q - pt.q) > tol)
        continue;
      bool dup = false;
      for (auto& [u0, u1] : sols)
        if (std::abs(u0 - t0) < 1e-12 && std::abs(u1 - t1) < 1e-12) dup = true;
      if (!dup) sols.emplace_back(t0, t1);
    }
  }
  if (sols.empty())
    throw NumericError("trace point not reachable by the two-step drive");
  std::sort(sols.begin(), sols.end());
  return sols;
}

std::pair<double, double> first_preimage_params(double T0_over_L, double K) {
  double s = std::sin(kPi * T0_over_L);
  if (std::abs(s) < 1e-12)
    throw InvalidParameter("first_preimage_params: sin(pi T0/L) vanishes");
  double t1 = (2.0 * std::cos(kPi * T0_over_L) - K) / (2.0 * kPi * s);
  return {T0_over_L, t1};
}

}  // namespace drivencft
