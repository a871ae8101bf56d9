#pragma once

#include <Eigen/Dense>
#include <vector>

#include "drivencft/entropy.hpp"
#include "drivencft/errors.hpp"
#include "drivencft/mobius.hpp"

namespace drivencft {

// Open chain of free fermions at fixed filling (default half filling, the
// critical c = 1 point).
struct LatticeSpec {
  int L = 600;
  double filling = 0.5;
};

// Tridiagonal hopping matrix with site-dependent amplitude
//   f(j) = Re sigma0 + Re sigmaPlus cos(2 pi r j / L) + Re sigmaMinus sin(2 pi r j / L)
// on bond (j, j+1), j = 1..L-1, entries f(j)/2. Open boundary.
Eigen::MatrixXd hopping_matrix(const LatticeSpec& spec,
                               const DeformationParams& dp);

// Eigendecomposition cache: reuse one diagonalization for every duration.
class LatticeEvolver {
 public:
  explicit LatticeEvolver(const Eigen::MatrixXd& h);

  // exp(-i h T) via the cached spectrum.
  Eigen::MatrixXcd propagator(double T) const;

  const Eigen::VectorXd& eigenvalues() const { return E_; }
  const Eigen::MatrixXd& eigenvectors() const { return V_; }

 private:
  Eigen::VectorXd E_;
  Eigen::MatrixXd V_;
};

// Lowest nOcc single-particle orbitals (ascending eigenvalue order, ties by
// eigenvector index) as columns of an L x nOcc matrix.
Eigen::MatrixXcd ground_orbitals(const Eigen::MatrixXd& h, int nOcc);

// Slater-determinant correlation matrix C = Phi Phi^dagger of the filled
// Fermi sea. (This is the transpose-conjugate convention of <c^dag c>; all
// spectra, traces, and entropies are identical, and the driven entropy is
// what the library consumes.)
Eigen::MatrixXcd ground_state_correlation(const Eigen::MatrixXd& h,
                                          double filling = 0.5);

// Schroedinger-picture update C -> u C u^dagger with u = exp(-i h T).
Eigen::MatrixXcd evolve_correlation(const Eigen::MatrixXcd& C,
                                    const Eigen::MatrixXd& h, double T);

// Entanglement entropy of the contiguous site block [first, first+count)
// from the restricted correlation block: S = -sum[nu ln nu + (1-nu) ln(1-nu)]
// with eigenvalues clamped to [1e-12, 1-1e-12]. Empty block -> 0.
double subsystem_entropy(const Eigen::MatrixXcd& C, int first, int count);

// Same entropy evaluated directly from occupied orbitals (rows restricted to
// the block), avoiding the full L x L correlation matrix.
double subsystem_entropy_orbitals(const Eigen::MatrixXcd& orbitals, int first,
                                  int count);

// A two-Hamiltonian lattice drive: letters[k] selects (h0, T0) or (h1, T1)
// at elementary step k, applied in sequence to the orbitals. Durations are
// absolute lattice times (T = (t/L) * L with unit velocity).
struct LatticeProtocol {
  Eigen::MatrixXd h0;
  Eigen::MatrixXd h1;
  double T0 = 0.0;
  double T1 = 0.0;
  std::vector<int> letters;
};

// Evolve the ground state of h0 through the letter sequence, sampling the
// block entropy change after every elementary step. Sample fields:
// n_or_step = 1-based step index, physTime = accumulated duration / L.
EntropySeries run_protocol_lattice(const LatticeSpec& spec,
                                   const LatticeProtocol& protocol,
                                   int subFirst, int subCount);

// Central-charge estimate: fit the half-chain ground-state entropy of the
// uniform chain to (c/6) ln L + const over the given sizes; returns c.
double uniform_chain_c_fit(const std::vector<int>& sizes);

}  // namespace drivencft
