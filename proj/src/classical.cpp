#include "kamrotor/classical.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "kamrotor/errors.hpp"
#include "parallel.hpp"

namespace kamrotor {

namespace {

using constants::pi;
using constants::two_pi;

// Yoshida's 4th-order composition of leapfrog steps.
const double yoshida_w1 = 1.0 / (2.0 - std::cbrt(2.0));
const double yoshida_w0 = -std::cbrt(2.0) / (2.0 - std::cbrt(2.0));
const double yoshida_c1 = 0.5 * yoshida_w1;
const double yoshida_c2 = 0.5 * (yoshida_w0 + yoshida_w1);

PhasePoint symplectic_pendulum(PhasePoint s, double k, double duration, int substeps) {
  const double h = duration / substeps;
  const double c1 = yoshida_c1 * h;
  const double c2 = yoshida_c2 * h;
  const double d1 = yoshida_w1 * h * k;
  const double d0 = yoshida_w0 * h * k;
  double phi = s.phi;
  double rho = s.rho;
  phi += c1 * rho;
  for (int i = 0; i < substeps; ++i) {
    rho -= d1 * std::sin(phi);
    phi += c2 * rho;
    rho -= d0 * std::sin(phi);
    phi += c2 * rho;
    rho -= d1 * std::sin(phi);
    // Trailing c1 drift of this step fused with the leading one of the next.
    phi += (i + 1 < substeps ? 2.0 : 1.0) * c1 * rho;
  }
  return {phi, rho};
}

// Jacobi amplitude am(u | kappa^2), continued across quarter periods.
double jacobi_amplitude(double u, double kappa, double quarter_period) {
  const double n = std::round(u / (2.0 * quarter_period));
  const double r = u - 2.0 * quarter_period * n;
  double cn = 0.0;
  double dn = 0.0;
  const double sn = boost::math::jacobi_elliptic(kappa, r, &cn, &dn);
  return std::atan2(sn, cn) + n * pi;
}

// Exact pendulum flow. Libration (E < k) uses
//   sin(phi/2) = kappa sn(omega t + u0), rho = 2 omega kappa cn(omega t + u0),
// with kappa^2 = (E + k) / 2k; rotation (E > k) uses
//   phi / 2 = am(u0 + sign(rho) sqrt((E + k)/2) t), kappa^2 = 2k / (E + k).
PhasePoint elliptic_pendulum(PhasePoint s, double k, double duration, int fallback_substeps) {
  if (k == 0.0) return {s.phi + s.rho * duration, s.rho};

  // Work with phi in (-pi, pi] and restore the winding afterwards.
  const double turns = std::round(s.phi / two_pi);
  const double phi0 = s.phi - two_pi * turns;
  const double energy = 0.5 * s.rho * s.rho - k * std::cos(phi0);

  if (std::abs(energy - k) <= 1e-12 * std::max(1.0, k)) {
    // The elliptic modulus reaches one on the separatrix.
    return symplectic_pendulum(s, k, duration, std::max(fallback_substeps, 256));
  }

  const double omega = std::sqrt(k);
  if (energy < k) {
    const double m = std::clamp((energy + k) / (2.0 * k), 0.0, 1.0);
    const double kappa = std::sqrt(m);
    const double psi0 = std::atan2(std::sin(0.5 * phi0), s.rho / (2.0 * omega));
    const double u0 = boost::math::ellint_1(kappa, psi0);
    double cn = 0.0;
    double dn = 0.0;
    const double sn = boost::math::jacobi_elliptic(kappa, u0 + omega * duration, &cn, &dn);
    const double phi = 2.0 * std::atan2(kappa * sn, dn);
    return {phi + two_pi * turns, 2.0 * omega * kappa * cn};
  }

  const double m = 2.0 * k / (energy + k);
  const double kappa = std::sqrt(m);
  const double speed = std::sqrt(0.5 * (energy + k));
  const double sign = s.rho >= 0.0 ? 1.0 : -1.0;
  const double quarter = boost::math::ellint_1(kappa);
  const double u0 = boost::math::ellint_1(kappa, 0.5 * phi0);
  const double u = u0 + sign * speed * duration;
  const double theta = jacobi_amplitude(u, kappa, quarter);
  double cn = 0.0;
  double dn = 0.0;
  boost::math::jacobi_elliptic(kappa, u, &cn, &dn);
  return {2.0 * theta + two_pi * turns, 2.0 * sign * speed * dn};
}

std::mt19937_64 trajectory_stream(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return std::mt19937_64(seq);
}

PhasePoint cycle_unwrapped(PhasePoint s, double k, const PulseTrain& pulses,
                           const IntegratorOptions& options) {
  for (const auto& seg : pulses.segments()) {
    if (seg.duration <= 0.0) continue;
    if (seg.driven) {
      s = options.backend == PendulumBackend::elliptic
              ? elliptic_pendulum(s, k, seg.duration, options.substeps)
              : symplectic_pendulum(s, k, seg.duration, options.substeps);
    } else {
      s.phi += s.rho * seg.duration;
    }
  }
  return s;
}

}  // namespace

double wrap_angle(double phi) noexcept {
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  // fmod of a tiny negative number can round up to exactly 2 pi.
  if (w >= two_pi) w = 0.0;
  return w;
}

double pendulum_energy(PhasePoint s, double kick_strength) noexcept {
  return 0.5 * s.rho * s.rho - kick_strength * std::cos(s.phi);
}

PhasePoint pendulum_segment(PhasePoint s, double kick_strength, double duration,
                            const IntegratorOptions& options) {
  if (!std::isfinite(s.phi) || !std::isfinite(s.rho) || !std::isfinite(kick_strength) ||
      !std::isfinite(duration)) {
    throw NumericalError("pendulum_segment: non-finite input");
  }
  if (duration < 0.0) throw InvalidArgument("pendulum_segment: negative duration");
  if (options.substeps <= 0) throw InvalidArgument("pendulum_segment: substeps must be > 0");
  if (duration == 0.0) return s;
  return options.backend == PendulumBackend::elliptic
             ? elliptic_pendulum(s, kick_strength, duration, options.substeps)
             : symplectic_pendulum(s, kick_strength, duration, options.substeps);
}

PhasePoint drift_segment(PhasePoint s, double duration) {
  return {wrap_angle(s.phi + s.rho * duration), s.rho};
}

PhasePoint kick_cycle(PhasePoint s, double kick_strength, const PulseTrain& pulses,
                      const IntegratorOptions& options) {
  if (options.substeps <= 0) throw InvalidArgument("kick_cycle: substeps must be > 0");
  s = cycle_unwrapped(s, kick_strength, pulses, options);
  if (!std::isfinite(s.phi) || !std::isfinite(s.rho)) {
    throw NumericalError("kick_cycle: trajectory left the finite range");
  }
  s.phi = wrap_angle(s.phi);
  return s;
}

void ClassicalEnsemble::validate() const {
  if (phi.size() != rho.size()) throw InvalidArgument("ensemble phi/rho length mismatch");
  if (!kick_scale.empty() && kick_scale.size() != phi.size()) {
    throw InvalidArgument("ensemble kick_scale length mismatch");
  }
}

ClassicalEnsemble thermal_ensemble(std::size_t n, double sigma, std::uint64_t seed,
                                   double kick_spread) {
  if (sigma < 0.0) throw InvalidParameter("thermal_ensemble: sigma must be >= 0");
  if (kick_spread < 0.0) throw InvalidParameter("thermal_ensemble: kick_spread must be >= 0");
  ClassicalEnsemble e;
  e.phi.resize(n);
  e.rho.resize(n);
  if (kick_spread > 0.0) e.kick_scale.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto gen = trajectory_stream(seed, i);
    std::uniform_real_distribution<double> angle(0.0, two_pi);
    std::normal_distribution<double> normal(0.0, 1.0);
    e.phi[i] = angle(gen);
    e.rho[i] = sigma * normal(gen);
    if (kick_spread > 0.0) e.kick_scale[i] = std::max(0.0, 1.0 + kick_spread * normal(gen));
  }
  return e;
}

ClassicalEnsemble uniform_ensemble(std::size_t n, double rho_min, double rho_max,
                                   std::uint64_t seed) {
  if (!(rho_max > rho_min)) throw InvalidArgument("uniform_ensemble: empty momentum range");
  ClassicalEnsemble e;
  e.phi.resize(n);
  e.rho.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto gen = trajectory_stream(seed, i);
    std::uniform_real_distribution<double> angle(0.0, two_pi);
    std::uniform_real_distribution<double> momentum(rho_min, rho_max);
    e.phi[i] = angle(gen);
    e.rho[i] = momentum(gen);
  }
  return e;
}

ClassicalEnsemble grid_ensemble(std::size_t n_phi, std::size_t n_rho, double rho_min,
                                double rho_max) {
  if (n_phi == 0 || n_rho == 0) throw InvalidArgument("grid_ensemble: empty grid");
  if (!(rho_max > rho_min)) throw InvalidArgument("grid_ensemble: empty momentum range");
  ClassicalEnsemble e;
  e.phi.reserve(n_phi * n_rho);
  e.rho.reserve(n_phi * n_rho);
  const double dphi = two_pi / static_cast<double>(n_phi);
  const double drho = (rho_max - rho_min) / static_cast<double>(n_rho);
  for (std::size_t j = 0; j < n_rho; ++j) {
    for (std::size_t i = 0; i < n_phi; ++i) {
      e.phi.push_back((static_cast<double>(i) + 0.5) * dphi);
      e.rho.push_back(rho_min + (static_cast<double>(j) + 0.5) * drho);
    }
  }
  return e;
}

void evolve_ensemble(ClassicalEnsemble& ensemble, double kick_strength,
                     const PulseTrain& pulses, int n_kicks, const IntegratorOptions& options,
                     const KickObserver& observer) {
  ensemble.validate();
  if (n_kicks < 0) throw InvalidArgument("evolve_ensemble: n_kicks must be >= 0");
  if (options.substeps <= 0) throw InvalidArgument("evolve_ensemble: substeps must be > 0");

  const std::size_t n = ensemble.size();
  for (int kick = 1; kick <= n_kicks; ++kick) {
    detail::parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const double k = kick_strength * ensemble.kick_scale_at(i);
        const PhasePoint s = kick_cycle({ensemble.phi[i], ensemble.rho[i]}, k, pulses, options);
        ensemble.phi[i] = s.phi;
        ensemble.rho[i] = s.rho;
      }
    });
    if (observer) observer(kick, ensemble);
  }
}

TrajectoryRecord evolve_ensemble_recorded(ClassicalEnsemble ensemble, double kick_strength,
                                          const PulseTrain& pulses, int n_kicks,
                                          const IntegratorOptions& options, int stride) {
  if (stride <= 0) throw InvalidArgument("evolve_ensemble_recorded: stride must be > 0");
  TrajectoryRecord record;
  record.kicks.push_back(0);
  record.snapshots.push_back(ensemble);
  evolve_ensemble(ensemble, kick_strength, pulses, n_kicks, options,
                  [&](int kick, const ClassicalEnsemble& e) {
                    if (kick % stride == 0) {
                      record.kicks.push_back(kick);
                      record.snapshots.push_back(e);
                    }
                  });
  return record;
}

PoincareSection poincare_section(std::span<const PhasePoint> seeds, double kick_strength,
                                 const PulseTrain& pulses, int n_kicks,
                                 const IntegratorOptions& options) {
  if (seeds.empty()) throw InvalidArgument("poincare_section: no seeds");
  if (n_kicks < 0) throw InvalidArgument("poincare_section: n_kicks must be >= 0");
  PoincareSection section;
  section.kick_strength = kick_strength;
  const std::size_t per_seed = static_cast<std::size_t>(n_kicks);
  section.points.resize(seeds.size() * per_seed);
  section.seed_index.resize(seeds.size() * per_seed);
  detail::parallel_for(seeds.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      PhasePoint s{wrap_angle(seeds[i].phi), seeds[i].rho};
      for (std::size_t t = 0; t < per_seed; ++t) {
        s = kick_cycle(s, kick_strength, pulses, options);
        section.points[i * per_seed + t] = s;
        section.seed_index[i * per_seed + t] = i;
      }
    }
  });
  return section;
}

FluxEstimate cantorus_flux(double kick_strength, const PulseTrain& pulses, double boundary,
                           const FluxOptions& options) {
  if (!(options.band_half_width > 0.0)) throw InvalidArgument("cantorus_flux: band must be > 0");
  if (options.n_cycles < 1) throw InvalidArgument("cantorus_flux: needs at least one cycle");
  if (options.grid_phi == 0 || options.grid_rho == 0) {
    throw InvalidArgument("cantorus_flux: empty seed grid");
  }
  if (boundary == 0.0) throw InvalidArgument("cantorus_flux: boundary must be non-zero");

  // Seeds fill the strip on the origin side of the boundary; a trajectory
  // counts once, on the cycle it is first found beyond the boundary.
  const bool upper = boundary > 0.0;
  const double lo = upper ? boundary - options.band_half_width : boundary;
  const double hi = upper ? boundary : boundary + options.band_half_width;
  ClassicalEnsemble seeds = grid_ensemble(options.grid_phi, options.grid_rho, lo, hi);
  const double density =
      static_cast<double>(seeds.size()) / (options.band_half_width * constants::two_pi);
  const auto beyond = [&](double rho) { return upper ? rho > boundary : rho < boundary; };

  std::vector<std::size_t> first_crossings(static_cast<std::size_t>(options.n_cycles), 0);
  std::vector<int> crossed_at(seeds.size(), 0);
  detail::parallel_for(seeds.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      PhasePoint s{seeds.phi[i], seeds.rho[i]};
      for (int cycle = 1; cycle <= options.n_cycles; ++cycle) {
        s = kick_cycle(s, kick_strength, pulses, options.integrator);
        if (beyond(s.rho)) {
          crossed_at[i] = cycle;
          break;
        }
      }
    }
  });

  FluxEstimate est;
  est.boundary = boundary;
  for (int c : crossed_at) {
    if (c > 0) ++first_crossings[static_cast<std::size_t>(c - 1)];
  }
  for (std::size_t n : first_crossings) {
    est.events += n;
    est.per_cycle.push_back(static_cast<double>(n) / density);
  }
  if (est.events < options.min_events) {
    throw StatisticsError("cantorus_flux: too few crossing events", est.events);
  }
  // The exchange set of one cycle: band area mapped across the boundary.
  const auto one_step = static_cast<double>(first_crossings.front());
  est.one_step_area = one_step / density;
  est.flux = est.one_step_area;
  est.std_error = std::sqrt(one_step) / density;
  return est;
}

}  // namespace kamrotor
