#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kamrotor/classical.hpp"

namespace kamrotor {

/// Fraction of trajectories with |rho| > boundary. Throws InvalidArgument on
/// an empty ensemble.
double fraction_outside_classical(const ClassicalEnsemble& ensemble, double boundary);

/// Population beyond |rho| = boundary on the ladder rho_n = (n + beta) hbar_k.
/// Site n covers [rho_n - hbar_k/2, rho_n + hbar_k/2); a site straddling the
/// boundary contributes the fraction of its cell lying outside.
double fraction_outside_quantum(const Eigen::VectorXd& populations, double scaled_planck,
                                double boundary, double beta = 0.0);

/// The same metric with straddling cells counted fully inside (first) and
/// fully outside (second): the one-bin sensitivity.
std::pair<double, double> fraction_outside_quantum_bounds(const Eigen::VectorXd& populations,
                                                          double scaled_planck,
                                                          double boundary,
                                                          double beta = 0.0);

/// Mean of rho^2 / 2.
double kinetic_energy(const ClassicalEnsemble& ensemble);
double kinetic_energy(const Eigen::VectorXd& populations, double scaled_planck,
                      double beta = 0.0);

/// Mean population per unit momentum in the site just inside `boundary`,
/// over mean population per unit momentum at `outer` (linearly interpolated
/// between sites), averaged over both signs of rho.
double shoulder_contrast(const Eigen::VectorXd& populations, double scaled_planck,
                         double boundary, double outer);

/// Regular continued fraction [a0; a1, a2, ...] of w, at most `depth` terms,
/// stopping early once the remainder vanishes. Throws InvalidArgument when
/// depth < 1 or w is not finite.
std::vector<std::int64_t> continued_fraction(double w, int depth);

/// Last convergent p/q of a continued fraction.
std::pair<std::int64_t, std::int64_t> convergent(std::span<const std::int64_t> terms);

enum class CurveSource { classical, quantum };

std::string to_string(CurveSource source);

struct TransportCurve {
  std::vector<int> kick_index;
  std::vector<double> fraction_outside;
  double boundary = 0.0;
  CurveSource source = CurveSource::quantum;
  std::string fingerprint;  // run parameters the curve came from

  /// Throws InvalidArgument on length mismatch or fractions outside [0, 1].
  void validate() const;
};

}  // namespace kamrotor
