#pragma once

// Classical ensemble dynamics of the double-pulse rotor. A kick cycle is a
// sequence of free drifts (H = rho^2/2) and pendulum segments
// (H = rho^2/2 - k cos phi); phi is wrapped to [0, 2 pi) once per cycle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kamrotor/model.hpp"

namespace kamrotor {

struct PhasePoint {
  double phi = 0.0;
  double rho = 0.0;
};

enum class PendulumBackend {
  symplectic,  // 4th-order Yoshida composition, fixed substeps per segment
  elliptic,    // closed-form Jacobi elliptic flow
};

struct IntegratorOptions {
  PendulumBackend backend = PendulumBackend::symplectic;
  int substeps = 256;  // per driven segment, symplectic backend only
};

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double phi) noexcept;

/// rho^2/2 - k cos(phi).
double pendulum_energy(PhasePoint s, double kick_strength) noexcept;

/// Evolves under the pendulum Hamiltonian for `duration`. The angle is not
/// wrapped. Throws NumericalError on non-finite input, InvalidArgument on a
/// negative duration.
PhasePoint pendulum_segment(PhasePoint s, double kick_strength, double duration,
                            const IntegratorOptions& options = {});

/// Free drift, phi wrapped into [0, 2 pi).
PhasePoint drift_segment(PhasePoint s, double duration);

/// One full cycle of the pulse schedule; phi wrapped at the end.
PhasePoint kick_cycle(PhasePoint s, double kick_strength, const PulseTrain& pulses,
                      const IntegratorOptions& options = {});

struct ClassicalEnsemble {
  std::vector<double> phi;
  std::vector<double> rho;
  /// Per-trajectory multiplier on k; empty means 1 for every trajectory.
  std::vector<double> kick_scale;

  std::size_t size() const noexcept { return phi.size(); }
  bool empty() const noexcept { return phi.empty(); }
  double kick_scale_at(std::size_t i) const noexcept {
    return kick_scale.empty() ? 1.0 : kick_scale[i];
  }
  /// Throws InvalidArgument if the arrays disagree in length.
  void validate() const;
};

/// Gaussian in rho with width `sigma`, uniform in phi. Trajectory i draws
/// from its own stream seeded by (seed, i), so the result does not depend on
/// how the work is split. A positive `kick_spread` adds a Gaussian relative
/// spread to k per trajectory.
ClassicalEnsemble thermal_ensemble(std::size_t n, double sigma, std::uint64_t seed,
                                   double kick_spread = 0.0);

/// Uniform in phi and in rho over [rho_min, rho_max), same stream rule.
ClassicalEnsemble uniform_ensemble(std::size_t n, double rho_min, double rho_max,
                                   std::uint64_t seed);

/// Cell-centred regular grid of n_phi x n_rho points over
/// [0, 2 pi) x [rho_min, rho_max).
ClassicalEnsemble grid_ensemble(std::size_t n_phi, std::size_t n_rho, double rho_min,
                                double rho_max);

/// Called after every completed kick with the kick number (1-based).
using KickObserver = std::function<void(int kick, const ClassicalEnsemble&)>;

/// Advances the ensemble in place by n_kicks cycles.
void evolve_ensemble(ClassicalEnsemble& ensemble, double kick_strength,
                     const PulseTrain& pulses, int n_kicks,
                     const IntegratorOptions& options = {},
                     const KickObserver& observer = {});

struct TrajectoryRecord {
  std::vector<int> kicks;                   // kick index of each snapshot
  std::vector<ClassicalEnsemble> snapshots; // snapshots[0] is the initial state
};

/// Snapshot of the ensemble at kick 0 and after every `stride` kicks.
TrajectoryRecord evolve_ensemble_recorded(ClassicalEnsemble ensemble,
                                          double kick_strength,
                                          const PulseTrain& pulses, int n_kicks,
                                          const IntegratorOptions& options = {},
                                          int stride = 1);

struct PoincareSection {
  std::vector<PhasePoint> points;
  std::vector<std::size_t> seed_index;  // which seed produced each point
  double kick_strength = 0.0;
};

/// Stroboscopic iterates (after each cycle) of every seed. Throws
/// InvalidArgument on an empty seed list.
PoincareSection poincare_section(std::span<const PhasePoint> seeds, double kick_strength,
                                 const PulseTrain& pulses, int n_kicks,
                                 const IntegratorOptions& options = {});

struct FluxOptions {
  double band_half_width = 2.0 * constants::two_pi;
  std::size_t grid_phi = 1000;
  std::size_t grid_rho = 1000;
  int n_cycles = 50;
  std::size_t min_events = 100;
  IntegratorOptions integrator{};
};

struct FluxEstimate {
  double boundary = 0.0;
  double flux = 0.0;       // phase-space area per cycle
  double std_error = 0.0;  // Poisson error on the counted events
  std::size_t events = 0;
  std::vector<double> per_cycle;  // area crossing during each cycle
  double one_step_area = 0.0;     // area crossing in the first cycle alone
};

/// Phase-space area transported across rho = boundary per kick cycle,
/// estimated by counting first crossings of a uniform seed grid placed in a
/// band around the boundary. Throws StatisticsError when fewer than
/// options.min_events crossings are seen.
FluxEstimate cantorus_flux(double kick_strength, const PulseTrain& pulses,
                           double boundary, const FluxOptions& options = {});

}  // namespace kamrotor
