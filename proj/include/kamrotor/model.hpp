#pragma once

// Parameter model for the double-pulse driven rotor: physical to scaled unit
// conversion, the per-cycle pulse schedule and the resonance analytics of the
// pulse train's cosine series.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kamrotor {

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double boltzmann = 1.380649e-23;  // J / K
inline constexpr double cesium_mass = 2.2069e-25;  // kg
inline constexpr double cesium_d2_wavelength = 852e-9;  // m

/// Relative line strengths of the F=4 -> F'=5,4,3 transitions with equal
/// Zeeman populations.
inline constexpr std::array<double, 3> line_strengths{11.0 / 27.0, 7.0 / 36.0,
                                                      7.0 / 108.0};
}  // namespace constants

/// Laboratory parameters of the kicking standing wave. All SI, angular
/// frequencies in rad/s.
struct PhysicalParams {
  double rabi_frequency = 0.0;
  std::array<double, 3> detunings{};  // delta_45, delta_44, delta_43
  double wave_number = 0.0;           // k_L
  double atom_mass = 0.0;
  double pulse_period = 0.0;

  /// Cesium D2 line defaults with the given period; Rabi frequency and
  /// detunings left for the caller.
  static PhysicalParams cesium(double pulse_period);

  bool operator==(const PhysicalParams&) const = default;
};

struct ScaledParams {
  double kick_strength = 0.0;  // k
  double scaled_planck = 0.0;  // hbar-bar k
};

/// Omega^2 * sum_j s_4j / delta_4j.
double effective_rabi_frequency(const PhysicalParams& p);

/// Converts laboratory parameters to the dimensionless kick strength and
/// scaled Planck constant. Throws InvalidParameter on non-positive detunings,
/// wave number, mass or period, or a negative Rabi frequency.
ScaledParams physical_to_scaled(const PhysicalParams& p);

/// Omega / min(delta). Above 0.1 the adiabatic elimination of the excited
/// state is questionable; callers decide whether to warn.
double adiabaticity_ratio(const PhysicalParams& p);
inline constexpr double adiabaticity_warning_threshold = 0.1;

/// Thermal momentum width in scaled units, sigma_rho = 2 k_L T sqrt(k_B temp / M).
double thermal_momentum_sigma(double temperature, double wave_number,
                              double pulse_period, double atom_mass);

/// Dimensionless run parameters.
struct SimParams {
  double kick_strength = 270.0;
  double scaled_planck = 2.6;
  double se_probability = 0.0;  // eta, per kick cycle
  double pulse_width = 1.0 / 20.0;
  double pulse_spacing = 1.0 / 10.0;
  int basis_size = 128;
  int n_kicks = 70;
  int n_trajectories = 10000;
  std::uint64_t rng_seed = 1;
  double init_momentum_sigma = 10.3;

  /// Throws InvalidParameter naming the first violated constraint.
  void validate() const;

  bool operator==(const SimParams&) const = default;
};

struct Segment {
  double duration = 0.0;  // fraction of the period
  bool driven = false;

  bool operator==(const Segment&) const = default;
};

/// One kick cycle as an ordered list of light/dark segments.
class PulseTrain {
 public:
  PulseTrain() = default;
  explicit PulseTrain(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double total_duration() const noexcept;
  double driven_duration() const noexcept;

  /// f(tau) on [0, 1): 1 inside a driven segment, 0 otherwise.
  double profile(double tau) const noexcept;

  std::string describe() const;

  bool operator==(const PulseTrain&) const = default;

 private:
  std::vector<Segment> segments_;
};

/// Symmetric double pulse: two light segments of width `width`, leading edges
/// `spacing` apart, centred in the cycle. Zero-length segments are dropped
/// and touching light segments merged.
PulseTrain build_pulse_train(double width, double spacing);

/// Cosine-series coefficient a_m of the double pulse with the time origin at
/// the centre of the pair, f(tau) = sum_m a_m cos(2 pi m tau):
///   a_m = 2 alpha sinc(m pi alpha) cos(m pi Delta).
/// Zeros of the cosine factor are exact.
double fourier_coefficient(int m, double width = 1.0 / 20.0,
                           double spacing = 1.0 / 10.0);

/// Full width 4 sqrt(|a_m| k) of the primary resonance at rho = 2 pi m.
double resonance_width(int m, double kick_strength, double width = 1.0 / 20.0,
                       double spacing = 1.0 / 10.0);

struct WeightedValue {
  double value = 0.0;
  double weight = 0.0;
};

/// Gauss-Hermite nodes for averaging over k ~ Normal(k, (spread k)^2):
/// values k (1 + spread x_i), weights summing to 1. Throws InvalidParameter
/// if any node reaches k <= 0 or nodes < 1.
std::vector<WeightedValue> kick_spread_quadrature(double kick_strength, double spread,
                                                  int nodes);

/// Chirikov criterion for primary resonances m and n.
bool chirikov_overlap(int m, int n, double kick_strength,
                      double width = 1.0 / 20.0, double spacing = 1.0 / 10.0);

}  // namespace kamrotor
