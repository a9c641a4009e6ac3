#include "kamrotor/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "kamrotor/errors.hpp"

namespace kamrotor {

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::invalid_parameter: return "invalid-parameter";
    case ErrorCategory::invalid_argument: return "invalid-argument";
    case ErrorCategory::numerical: return "numerical";
    case ErrorCategory::statistics: return "statistics";
    case ErrorCategory::config: return "config";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

PhysicalParams PhysicalParams::cesium(double pulse_period) {
  PhysicalParams p;
  p.wave_number = constants::two_pi / constants::cesium_d2_wavelength;
  p.atom_mass = constants::cesium_mass;
  p.pulse_period = pulse_period;
  return p;
}

double effective_rabi_frequency(const PhysicalParams& p) {
  double sum = 0.0;
  for (std::size_t j = 0; j < p.detunings.size(); ++j) {
    sum += constants::line_strengths[j] / p.detunings[j];
  }
  return p.rabi_frequency * p.rabi_frequency * sum;
}

ScaledParams physical_to_scaled(const PhysicalParams& p) {
  // A zero Rabi frequency is a valid (field-free) configuration.
  if (!(p.rabi_frequency >= 0.0) || !std::isfinite(p.rabi_frequency)) {
    throw InvalidParameter("rabi_frequency must be non-negative and finite");
  }
  for (double d : p.detunings) require_positive(d, "detuning");
  require_positive(p.wave_number, "wave_number");
  require_positive(p.atom_mass, "atom_mass");
  require_positive(p.pulse_period, "pulse_period");

  const double kl2 = p.wave_number * p.wave_number;
  const double t = p.pulse_period;
  ScaledParams out;
  out.kick_strength = constants::hbar * effective_rabi_frequency(p) * kl2 * t *
                      t / (2.0 * p.atom_mass);
  out.scaled_planck = 4.0 * constants::hbar * kl2 * t / p.atom_mass;
  return out;
}

double adiabaticity_ratio(const PhysicalParams& p) {
  const double dmin = *std::min_element(p.detunings.begin(), p.detunings.end());
  return p.rabi_frequency / dmin;
}

double thermal_momentum_sigma(double temperature, double wave_number,
                              double pulse_period, double atom_mass) {
  require_positive(temperature, "temperature");
  require_positive(wave_number, "wave_number");
  require_positive(pulse_period, "pulse_period");
  require_positive(atom_mass, "atom_mass");
  return 2.0 * wave_number * pulse_period *
         std::sqrt(constants::boltzmann * temperature / atom_mass);
}

void SimParams::validate() const {
  if (!(kick_strength > 0.0)) throw InvalidParameter("kick_strength must be > 0");
  if (!(scaled_planck > 0.0)) throw InvalidParameter("scaled_planck must be > 0");
  if (!(se_probability >= 0.0 && se_probability <= 1.0)) {
    throw InvalidParameter("se_probability must lie in [0, 1]");
  }
  if (!(pulse_width > 0.0 && pulse_width <= pulse_spacing && pulse_spacing <= 0.5)) {
    throw InvalidParameter("pulse shape requires 0 < width <= spacing <= 1/2");
  }
  if (basis_size <= 0 || basis_size % 2 != 0) {
    throw InvalidParameter("basis_size must be a positive even integer");
  }
  if (n_kicks < 0) throw InvalidParameter("n_kicks must be >= 0");
  if (n_trajectories <= 0) throw InvalidParameter("n_trajectories must be > 0");
  if (!(init_momentum_sigma >= 0.0)) {
    throw InvalidParameter("init_momentum_sigma must be >= 0");
  }
}

PulseTrain::PulseTrain(std::vector<Segment> segments) : segments_(std::move(segments)) {
  for (const auto& s : segments_) {
    if (!(s.duration >= 0.0)) throw InvalidParameter("segment duration must be >= 0");
  }
}

double PulseTrain::total_duration() const noexcept {
  double sum = 0.0;
  for (const auto& s : segments_) sum += s.duration;
  return sum;
}

double PulseTrain::driven_duration() const noexcept {
  double sum = 0.0;
  for (const auto& s : segments_) {
    if (s.driven) sum += s.duration;
  }
  return sum;
}

double PulseTrain::profile(double tau) const noexcept {
  tau -= std::floor(tau);
  double start = 0.0;
  for (const auto& s : segments_) {
    const double end = start + s.duration;
    if (tau >= start && tau < end) return s.driven ? 1.0 : 0.0;
    start = end;
  }
  return 0.0;
}

std::string PulseTrain::describe() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i) os << ' ';
    os << (segments_[i].driven ? 'L' : 'D') << ':' << segments_[i].duration;
  }
  return os.str();
}

PulseTrain build_pulse_train(double width, double spacing) {
  if (!(width > 0.0) || !(spacing >= width) || !(spacing + width <= 1.0)) {
    throw InvalidParameter("pulse train requires 0 < width <= spacing and spacing + width <= 1");
  }
  const double gap = spacing - width;
  const double pad = 0.5 * (1.0 - spacing - width);

  std::vector<Segment> raw{{pad, false}, {width, true}, {gap, false}, {width, true}};
  double used = 0.0;
  for (const auto& s : raw) used += s.duration;
  // The trailing pad absorbs rounding so the cycle sums to one.
  raw.push_back({1.0 - used, false});

  std::vector<Segment> merged;
  for (const auto& s : raw) {
    if (s.duration <= 0.0) continue;
    if (!merged.empty() && merged.back().driven == s.driven) {
      merged.back().duration += s.duration;
    } else {
      merged.push_back(s);
    }
  }
  return PulseTrain(std::move(merged));
}

double fourier_coefficient(int m, double width, double spacing) {
  const double cosine = boost::math::cos_pi(static_cast<double>(m) * spacing);
  if (cosine == 0.0 || m == 0) return 2.0 * width * cosine;
  const double x = static_cast<double>(m) * width;
  const double sinc = boost::math::sin_pi(x) / (constants::pi * x);
  return 2.0 * width * sinc * cosine;
}

double resonance_width(int m, double kick_strength, double width, double spacing) {
  const double a = std::abs(fourier_coefficient(m, width, spacing));
  return 4.0 * std::sqrt(a * kick_strength);
}

bool chirikov_overlap(int m, int n, double kick_strength, double width, double spacing) {
  if (m == n) throw InvalidArgument("chirikov_overlap needs two distinct resonances");
  const double separation = constants::two_pi * std::abs(m - n);
  const double half_widths = 0.5 * resonance_width(m, kick_strength, width, spacing) +
                             0.5 * resonance_width(n, kick_strength, width, spacing);
  return separation <= half_widths;
}

std::vector<WeightedValue> kick_spread_quadrature(double kick_strength, double spread,
                                                  int nodes) {
  if (nodes < 1) throw InvalidParameter("quadrature needs at least one node");
  if (!(spread >= 0.0)) throw InvalidParameter("kick spread must be >= 0");
  if (nodes == 1 || spread == 0.0) return {{kick_strength, 1.0}};
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int i = 1; i < nodes; ++i) {
    jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(static_cast<double>(i));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) throw NumericalError("Gauss-Hermite eigensolver failed");
  std::vector<WeightedValue> out(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    out[static_cast<std::size_t>(i)] = {kick_strength * (1.0 + spread * solver.eigenvalues()[i]),
                                        v0 * v0};
    if (!(out[static_cast<std::size_t>(i)].value > 0.0)) {
      throw InvalidParameter("kick spread too wide: a quadrature node has k <= 0");
    }
  }
  return out;
}

}  // namespace kamrotor
