#include "drivencft/fermion.hpp"

#include <cmath>
#include <numbers>

namespace drivencft {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_spec(const LatticeSpec& spec) {
  if (spec.L < 4 || spec.L % 2 != 0)
    throw InvalidParameter("lattice size must be even and >= 4");
  if (!(spec.filling > 0.0) || !(spec.filling < 1.0))
    throw InvalidParameter("filling must be in (0, 1)");
}

double entropy_from_block(const Eigen::MatrixXcd& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("correlation-block eigensolve failed");
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double nu = std::clamp(es.eigenvalues()[i], 1e-12, 1.0 - 1e-12);
    s -= nu * std::log(nu) + (1.0 - nu) * std::log(1.0 - nu);
  }
  return s;
}

}  // namespace

Eigen::MatrixXd hopping_matrix(const LatticeSpec& spec,
                               const DeformationParams& dp) {
  validate_spec(spec);
  if (dp.r < 1) throw InvalidParameter("wavenumber r must be >= 1");
  int L = spec.L;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(L, L);
  for (int j = 1; j < L; ++j) {
    double phase = 2.0 * kPi * dp.r * static_cast<double>(j) / L;
    double f = dp.sigma0.real() + dp.sigmaPlus.real() * std::cos(phase) +
               dp.sigmaMinus.real() * std::sin(phase);
    h(j - 1, j) = f / 2.0;
    h(j, j - 1) = f / 2.0;
  }
  return h;
}

LatticeEvolver::LatticeEvolver(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericError("hopping-matrix eigensolve failed");
  E_ = es.eigenvalues();
  V_ = es.eigenvectors();
}

Eigen::MatrixXcd LatticeEvolver::propagator(double T) const {
  if (!std::isfinite(T)) throw InvalidParameter("duration must be finite");
  Eigen::VectorXcd phases(E_.size());
  for (Eigen::Index k = 0; k < E_.size(); ++k)
    phases[k] = std::exp(cplx(0.0, -E_[k] * T));
  return (V_.cast<cplx>() * phases.asDiagonal()) * V_.transpose().cast<cplx>();
}

Eigen::MatrixXcd ground_orbitals(const Eigen::MatrixXd& h, int nOcc) {
  if (nOcc < 0 || nOcc > h.rows())
    throw InvalidParameter("occupation count out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericError("hopping-matrix eigensolve failed");
  return es.eigenvectors().leftCols(nOcc).cast<cplx>();
}

Eigen::MatrixXcd ground_state_correlation(const Eigen::MatrixXd& h,
                                          double filling) {
  if (!(filling > 0.0) || !(filling < 1.0))
    throw InvalidParameter("filling must be in (0, 1)");
  int nOcc = static_cast<int>(std::lround(filling * static_cast<double>(h.rows())));
  Eigen::MatrixXcd phi = ground_orbitals(h, nOcc);
  return phi * phi.adjoint();
}

Eigen::MatrixXcd evolve_correlation(const Eigen::MatrixXcd& C,
                                    const Eigen::MatrixXd& h, double T) {
  if (C.rows() != C.cols() || C.rows() != h.rows())
    throw InvalidParameter("correlation/hopping dimension mismatch");
  Eigen::MatrixXcd u = LatticeEvolver(h).propagator(T);
  Eigen::MatrixXcd out = u * C * u.adjoint();
  if (!out.allFinite()) throw NumericError("correlation evolution overflowed");
  return out;
}

double subsystem_entropy(const Eigen::MatrixXcd& C, int first, int count) {
  if (count == 0) return 0.0;
  if (first < 0 || count < 0 || first + count > C.rows())
    throw InvalidParameter("subsystem range out of bounds");
  return entropy_from_block(C.block(first, first, count, count));
}

double subsystem_entropy_orbitals(const Eigen::MatrixXcd& orbitals, int first,
                                  int count) {
  if (count == 0) return 0.0;
  if (first < 0 || count < 0 || first + count > orbitals.rows())
    throw InvalidParameter("subsystem range out of bounds");
  Eigen::MatrixXcd rows = orbitals.middleRows(first, count);
  return entropy_from_block(rows * rows.adjoint());
}

EntropySeries run_protocol_lattice(const LatticeSpec& spec,
                                   const LatticeProtocol& protocol,
                                   int subFirst, int subCount) {
  validate_spec(spec);
  if (protocol.h0.rows() != spec.L || protocol.h1.rows() != spec.L)
    throw InvalidParameter("protocol Hamiltonians must match lattice size");
  int nOcc =
      static_cast<int>(std::lround(spec.filling * static_cast<double>(spec.L)));

  LatticeEvolver ev0(protocol.h0);
  LatticeEvolver ev1(protocol.h1);
  Eigen::MatrixXcd u0 = ev0.propagator(protocol.T0);
  Eigen::MatrixXcd u1 = ev1.propagator(protocol.T1);

  Eigen::MatrixXcd phi = ground_orbitals(protocol.h0, nOcc);
  double s0 = subsystem_entropy_orbitals(phi, subFirst, subCount);

  EntropySeries series;
  series.c = 1.0;
  series.boundary = EntropyBoundary::openHalfChain;
  series.renyiM = 1.0;
  series.samples.reserve(protocol.letters.size());

  double time = 0.0;
  int step = 0;
  for (int letter : protocol.letters) {
    if (letter != 0 && letter != 1)
      throw InvalidParameter("letters must be 0 or 1");
    phi = (letter == 0 ? u0 : u1) * phi;
    time += letter == 0 ? protocol.T0 : protocol.T1;
    ++step;
    double s = subsystem_entropy_orbitals(phi, subFirst, subCount);
    series.samples.push_back(EntropySample{static_cast<double>(step),
                                           time / static_cast<double>(spec.L),
                                           s - s0, 0.0});
  }
  return series;
}

double uniform_chain_c_fit(const std::vector<int>& sizes) {
  if (sizes.size() < 2)
    throw InvalidParameter("c fit requires at least 2 sizes");
  std::vector<double> xs, ys;
  xs.reserve(sizes.size());
  ys.reserve(sizes.size());
  for (int L : sizes) {
    LatticeSpec spec;
    spec.L = L;
    DeformationParams uniform;  // sigma0 = 1
    Eigen::MatrixXd h = hopping_matrix(spec, uniform);
    Eigen::MatrixXcd phi = ground_orbitals(h, L / 2);
    xs.push_back(std::log(static_cast<double>(L)));
    ys.push_back(subsystem_entropy_orbitals(phi, 0, L / 2));
  }
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= static_cast<double>(xs.size());
  ybar /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  return 6.0 * sxy / sxx;
}

}  // namespace drivencft
