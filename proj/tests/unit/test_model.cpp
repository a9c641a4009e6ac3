#include <cmath>
#include <vector>

#include "doctest.h"
#include "kamrotor/errors.hpp"
#include "kamrotor/model.hpp"

using namespace kamrotor;

namespace {

constexpr double pi = 3.14159265358979323846;

// Composite Simpson of f(tau) cos(2 pi m tau) over each light window of the
// centred double pulse; f vanishes elsewhere.
double cosine_integral(int m, double alpha, double delta, int intervals = 4000) {
  double total = 0.0;
  for (double centre : {-0.5 * delta, 0.5 * delta}) {
    const double a = centre - 0.5 * alpha;
    const double h = alpha / intervals;
    double s = 0.0;
    for (int i = 0; i <= intervals; ++i) {
      const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * std::cos(2.0 * pi * m * (a + i * h));
    }
    total += s * h / 3.0;
  }
  return total;
}

PhysicalParams lab_params() {
  PhysicalParams p = PhysicalParams::cesium(25e-6);
  p.rabi_frequency = 2.0 * pi * 150e6;
  p.detunings = {2.0 * pi * 2.8e9, 2.0 * pi * 2.549e9, 2.0 * pi * 2.3477e9};
  return p;
}

}  // namespace

TEST_CASE("scaled Planck constant for caesium at T = 25 us") {
  const PhysicalParams p = lab_params();
  const double kl = 2.0 * pi / 852e-9;
  const double oracle = 4.0 * 1.054571817e-34 * kl * kl * 25e-6 / 2.2069e-25;
  const ScaledParams s = physical_to_scaled(p);
  CHECK(s.scaled_planck == doctest::Approx(oracle).epsilon(1e-12));
  // Quoted as 2.6 in the experiment description.
  CHECK(std::abs(s.scaled_planck - 2.6) < 0.005);
}

TEST_CASE("kick strength from the effective Rabi frequency") {
  const PhysicalParams p = lab_params();
  double sum = 0.0;
  const double strengths[] = {11.0 / 27.0, 7.0 / 36.0, 7.0 / 108.0};
  for (int j = 0; j < 3; ++j) sum += strengths[j] / p.detunings[j];
  const double omega_eff = p.rabi_frequency * p.rabi_frequency * sum;
  CHECK(effective_rabi_frequency(p) == doctest::Approx(omega_eff).epsilon(1e-14));
  const double kl = p.wave_number;
  const double k = 1.054571817e-34 * omega_eff * kl * kl * 25e-6 * 25e-6 / (2.0 * 2.2069e-25);
  CHECK(physical_to_scaled(p).kick_strength == doctest::Approx(k).epsilon(1e-12));

  SUBCASE("k scales with the square of the Rabi frequency") {
    PhysicalParams q = p;
    q.rabi_frequency *= 2.0;
    CHECK(physical_to_scaled(q).kick_strength ==
          doctest::Approx(4.0 * physical_to_scaled(p).kick_strength).epsilon(1e-12));
  }
  SUBCASE("zero field gives zero kick") {
    PhysicalParams q = p;
    q.rabi_frequency = 0.0;
    CHECK(physical_to_scaled(q).kick_strength == 0.0);
  }
}

TEST_CASE("physical parameter validation") {
  PhysicalParams p = lab_params();
  p.detunings[1] = -1.0;
  CHECK_THROWS_AS(physical_to_scaled(p), InvalidParameter);
  p = lab_params();
  p.pulse_period = 0.0;
  CHECK_THROWS_AS(physical_to_scaled(p), InvalidParameter);
  p = lab_params();
  p.rabi_frequency = -1.0;
  CHECK_THROWS_AS(physical_to_scaled(p), InvalidParameter);
  p = lab_params();
  p.atom_mass = 0.0;
  CHECK_THROWS_AS(physical_to_scaled(p), InvalidParameter);
}

TEST_CASE("adiabaticity ratio uses the smallest detuning") {
  const PhysicalParams p = lab_params();
  CHECK(adiabaticity_ratio(p) == doctest::Approx(150e6 / 2.3477e9));
  CHECK(adiabaticity_ratio(p) < adiabaticity_warning_threshold);
}

TEST_CASE("thermal width in scaled units") {
  const double kl = 2.0 * pi / 852e-9;
  const double oracle = 2.0 * kl * 25e-6 * std::sqrt(1.380649e-23 * 12.5e-6 / 2.2069e-25);
  CHECK(thermal_momentum_sigma(12.5e-6, kl, 25e-6, 2.2069e-25) ==
        doctest::Approx(oracle).epsilon(1e-12));
  CHECK(oracle == doctest::Approx(10.31).epsilon(1e-3));
}

TEST_CASE("Fourier coefficients of the double pulse") {
  SUBCASE("missing resonances are exact zeros") {
    for (int m : {5, -5, 15, -15, 25, -35}) CHECK(fourier_coefficient(m) == 0.0);
  }
  SUBCASE("mean value") { CHECK(fourier_coefficient(0) == doctest::Approx(0.1).epsilon(1e-15)); }
  SUBCASE("integral oracle for |m| <= 100") {
    double worst = 0.0;
    for (int m = -100; m <= 100; ++m) {
      worst = std::max(worst, std::abs(fourier_coefficient(m) - cosine_integral(m, 0.05, 0.1)));
    }
    CHECK(worst < 1e-9);
  }
  SUBCASE("other pulse shapes") {
    for (auto [alpha, delta] : {std::pair{0.03, 0.2}, std::pair{0.1, 0.1}, std::pair{0.02, 0.5}}) {
      for (int m = 0; m <= 40; ++m) {
        CHECK(std::abs(fourier_coefficient(m, alpha, delta) - cosine_integral(m, alpha, delta)) <
              1e-9);
      }
    }
  }
  SUBCASE("even in m") {
    for (int m = 1; m < 60; ++m) CHECK(fourier_coefficient(m) == fourier_coefficient(-m));
  }
}

TEST_CASE("resonance widths and overlap") {
  CHECK(resonance_width(4, 280.0) ==
        doctest::Approx(4.0 * std::sqrt(std::abs(fourier_coefficient(4)) * 280.0)));
  CHECK(resonance_width(5, 280.0) == 0.0);
  // Half-widths of m = 4 and 6 sum to about 11.1 < 4 pi at k = 280.
  CHECK_FALSE(chirikov_overlap(4, 6, 280.0));
  CHECK(chirikov_overlap(4, 6, 400.0));
  CHECK(chirikov_overlap(0, 1, 280.0));
  CHECK_THROWS_AS(chirikov_overlap(3, 3, 280.0), InvalidArgument);

  SUBCASE("threshold matches the half-width sum") {
    for (double k : {100.0, 300.0, 355.0, 357.0, 500.0}) {
      const double half = 0.5 * (resonance_width(4, k) + resonance_width(6, k));
      CHECK(chirikov_overlap(4, 6, k) == (half >= 4.0 * pi));
    }
  }
}

TEST_CASE("pulse train layout") {
  const PulseTrain t = build_pulse_train(0.05, 0.1);
  CHECK(t.total_duration() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.driven_duration() == doctest::Approx(0.1).epsilon(1e-15));
  REQUIRE(t.segments().size() == 5);
  CHECK(t.segments()[1].driven);
  CHECK(t.segments()[3].driven);
  CHECK(t.profile(0.45) == 1.0);
  CHECK(t.profile(0.5) == 0.0);
  CHECK(t.profile(0.55) == 1.0);
  CHECK(t.profile(0.1) == 0.0);

  SUBCASE("touching pulses merge") {
    const PulseTrain m = build_pulse_train(0.05, 0.05);
    REQUIRE(m.segments().size() == 3);
    CHECK(m.segments()[1].driven);
    CHECK(m.segments()[1].duration == doctest::Approx(0.1));
  }
  SUBCASE("invalid shapes") {
    CHECK_THROWS_AS(build_pulse_train(0.0, 0.1), InvalidParameter);
    CHECK_THROWS_AS(build_pulse_train(0.2, 0.1), InvalidParameter);
    CHECK_THROWS_AS(build_pulse_train(0.5, 0.6), InvalidParameter);
  }
  SUBCASE("profile average equals a_0") {
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += t.profile((i + 0.5) / n);
    CHECK(s / n == doctest::Approx(fourier_coefficient(0)).epsilon(1e-4));
  }
}

TEST_CASE("simulation parameter validation") {
  SimParams p;
  CHECK_NOTHROW(p.validate());
  auto broken = [](auto edit) {
    SimParams q;
    edit(q);
    return q;
  };
  CHECK_THROWS_AS(broken([](SimParams& q) { q.kick_strength = 0.0; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(broken([](SimParams& q) { q.scaled_planck = -1.0; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(broken([](SimParams& q) { q.se_probability = 1.5; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(broken([](SimParams& q) { q.basis_size = 127; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(broken([](SimParams& q) { q.pulse_width = 0.2; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(broken([](SimParams& q) { q.n_trajectories = 0; }).validate(), InvalidParameter);
  CHECK_THROWS_AS(broken([](SimParams& q) { q.init_momentum_sigma = -1; }).validate(),
                  InvalidParameter);
}

TEST_CASE("Gauss-Hermite k-spread quadrature") {
  for (int n : {1, 2, 5, 9}) {
    const auto nodes = kick_spread_quadrature(270.0, 0.06, n);
    REQUIRE(nodes.size() == static_cast<std::size_t>(n));
    double w = 0.0, mean = 0.0, second = 0.0, fourth = 0.0;
    for (const auto& q : nodes) {
      w += q.weight;
      mean += q.weight * q.value;
      second += q.weight * (q.value - 270.0) * (q.value - 270.0);
      fourth += q.weight * std::pow(q.value - 270.0, 4);
    }
    const double s = 0.06 * 270.0;
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(270.0).epsilon(1e-12));
    if (n >= 2) CHECK(second == doctest::Approx(s * s).epsilon(1e-10));
    if (n >= 3) CHECK(fourth == doctest::Approx(3.0 * s * s * s * s).epsilon(1e-10));
  }
  CHECK(kick_spread_quadrature(10.0, 0.0, 7).size() == 1);
  CHECK_THROWS_AS(kick_spread_quadrature(10.0, 0.9, 9), InvalidParameter);
  CHECK_THROWS_AS(kick_spread_quadrature(10.0, 0.1, 0), InvalidParameter);
}
