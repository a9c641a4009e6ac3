#pragma once

// Momentum-ladder quantum dynamics: Hamiltonians, the single-cycle Floquet
// operator, density-matrix evolution and the spontaneous-emission channel.
//
// Basis index i in [0, N) stands for |n>, n = i - N/2, with momentum
// rho = (n + beta) hbar_k. The ladder is treated as periodic in n.

#include <vector>

#include <Eigen/Core>

#include "kamrotor/model.hpp"

namespace kamrotor {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Ladder label n of basis index i for an N-state basis.
inline int ladder_value(int index, int basis_size) noexcept { return index - basis_size / 2; }
inline int ladder_index(int n, int basis_size) noexcept { return n + basis_size / 2; }

struct Hamiltonians {
  Eigen::VectorXd dark;   // diagonal of H_dark
  Eigen::MatrixXd light;  // dense, real symmetric
};

/// H_dark = diag(rho^2/2); H_light adds -k/2 on the cyclic first off-diagonals.
/// `beta` is a quasimomentum offset in ladder units. Throws InvalidParameter
/// unless N is positive and even.
Hamiltonians build_hamiltonians(int basis_size, double kick_strength, double scaled_planck,
                                double beta = 0.0);

struct FloquetOperator {
  ComplexMatrix matrix;
  double kick_strength = 0.0;
  double scaled_planck = 0.0;
  double beta = 0.0;
  PulseTrain pulses;

  int size() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// U = prod over segments (last on the left) of exp(-i d H_seg / hbar_k).
/// Exponentials come from the Hermitian eigendecomposition of H_light.
FloquetOperator build_floquet(int basis_size, double kick_strength, double scaled_planck,
                              const PulseTrain& pulses, double beta = 0.0);

/// max |(U^dagger U - I)_ij|.
double unitarity_error(const ComplexMatrix& u);

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Throws InvalidArgument if `elements` is not square.
  explicit DensityMatrix(ComplexMatrix elements);

  /// |n><n| for ladder value n.
  static DensityMatrix pure_momentum(int basis_size, int n);
  /// |psi><psi| with psi normalised.
  static DensityMatrix pure_state(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(int basis_size);
  /// Incoherent mixture with Gaussian weights in rho = (n + beta) hbar_k,
  /// width sigma. sigma = 0 gives |0><0|.
  static DensityMatrix thermal(int basis_size, double sigma, double scaled_planck,
                               double beta = 0.0);

  const ComplexMatrix& matrix() const noexcept { return elements_; }
  ComplexMatrix& matrix() noexcept { return elements_; }
  int size() const noexcept { return static_cast<int>(elements_.rows()); }

  std::complex<double> trace() const;
  double purity() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  ComplexMatrix elements_;
};

/// <m|rho'|n> = eta/2 (<m+1|rho|n+1> + <m-1|rho|n-1>) + (1 - eta) <m|rho|n>,
/// indices cyclic. Throws InvalidParameter unless 0 <= eta <= 1.
DensityMatrix apply_decoherence(const DensityMatrix& rho, double eta);

/// diag(rho) as real populations.
Eigen::VectorXd momentum_distribution(const DensityMatrix& rho);

struct DensityCheckpoint {
  int kick = 0;
  DensityMatrix rho;
};

struct DensityEvolution {
  std::vector<Eigen::VectorXd> populations;  // populations[t] after t kicks
  std::vector<DensityCheckpoint> checkpoints;
  double max_trace_drift = 0.0;      // largest |Tr rho_t - Tr rho_{t-1}|
  double max_edge_population = 0.0;  // largest population in the two edge states
};

/// rho <- U rho U^dagger, then the decoherence channel, once per kick.
/// Full matrices are kept for the listed checkpoint kicks (0 allowed).
DensityEvolution evolve_density(const DensityMatrix& rho0, const FloquetOperator& u,
                                double eta, int n_kicks,
                                const std::vector<int>& checkpoint_kicks = {});

/// Edge populations above this mean the periodic ladder is being reached.
inline constexpr double edge_population_warning = 1e-4;

struct FloquetModes {
  ComplexMatrix vectors;     // columns are orthonormal eigenvectors
  ComplexVector eigenvalues; // unit modulus

  /// V Lambda^n V^dagger psi.
  ComplexVector evolve(const ComplexVector& psi, int n_kicks) const;
  ComplexMatrix power(int n_kicks) const;
};

/// Eigendecomposition of a unitary via its complex Schur form, which is
/// diagonal for normal matrices and keeps degenerate eigenvectors orthonormal.
FloquetModes floquet_modes(const FloquetOperator& u);

}  // namespace kamrotor
