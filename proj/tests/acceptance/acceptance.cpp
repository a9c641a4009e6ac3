// One line per criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "kamrotor/analysis.hpp"
#include "kamrotor/classical.hpp"
#include "kamrotor/config.hpp"
#include "kamrotor/io.hpp"
#include "kamrotor/model.hpp"
#include "kamrotor/quantum.hpp"
#include "kamrotor/scenario.hpp"
#include "kamrotor/wigner.hpp"
#include "support.hpp"

using namespace kamrotor;
namespace fs = std::filesystem;
using cd = std::complex<double>;

namespace {

constexpr double pi = constants::pi;
constexpr double boundary = 10 * pi;
constexpr double hbar_k = 2.6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  fmt::print("{} {:<4} {} | {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail, secs);
  std::fflush(stdout);
}

// Composite Simpson of cos(2 pi m tau) over the two light windows of the
// centred double pulse.
double simpson_coefficient(int m, double alpha, double delta) {
  const int n = 4000;
  double total = 0.0;
  for (double centre : {-0.5 * delta, 0.5 * delta}) {
    const double a = centre - 0.5 * alpha;
    const double h = alpha / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * std::cos(2.0 * pi * m * (a + i * h));
    }
    total += s * h / 3.0;
  }
  return total;
}

SimParams transport_params() {
  SimParams p;
  p.kick_strength = 270.0;
  p.scaled_planck = hbar_k;
  p.basis_size = 128;
  p.n_kicks = 70;
  p.n_trajectories = 10000;
  p.init_momentum_sigma = 10.3;
  return p;
}

ClassicalSettings elliptic() {
  ClassicalSettings s;
  s.backend = PendulumBackend::elliptic;
  return s;
}

// Shared between criteria 3, 4 and 9.
const std::vector<double>& classical_curve() {
  static const std::vector<double> c =
      run_classical(transport_params(), 270.0, boundary, elliptic()).fraction_outside;
  return c;
}

const std::vector<double>& quantum_curve(double eta) {
  static std::map<double, std::vector<double>> cache;
  auto it = cache.find(eta);
  if (it == cache.end()) {
    it = cache.emplace(eta, run_quantum(transport_params(), 270.0, eta, boundary).fraction_outside).first;
  }
  return it->second;
}

Outcome c1() {
  double worst = 0.0;
  for (int m = -100; m <= 100; ++m) {
    worst = std::max(worst, std::abs(fourier_coefficient(m) - simpson_coefficient(m, 0.05, 0.1)));
  }
  bool zeros = true;
  for (int m : {5, -5, 15, -15}) zeros = zeros && fourier_coefficient(m) == 0.0;
  return {zeros && worst <= 1e-9,
          fmt::format("a_m==0 at +-5,+-15: {}; max |a_m - oracle| = {:.2e} (tol 1e-9)", zeros, worst)};
}

Outcome c2() {
  ClassicalEnsemble e = uniform_ensemble(10000, -(boundary - 5.0), boundary - 5.0, 7);
  std::vector<char> crossed(e.size(), 0);
  IntegratorOptions opt;
  opt.backend = PendulumBackend::elliptic;
  evolve_ensemble(e, 5.0, build_pulse_train(0.05, 0.1), 1000, opt,
                  [&](int, const ClassicalEnsemble& s) {
                    for (std::size_t i = 0; i < s.size(); ++i) {
                      if (std::abs(s.rho[i]) >= boundary) crossed[i] = 1;
                    }
                  });
  const auto n = std::count(crossed.begin(), crossed.end(), 1);
  return {n == 0, fmt::format("{} of 10000 trajectories crossed |rho|=10pi in 1000 kicks (tol 0)", n)};
}

Outcome c3() {
  const auto& q = quantum_curve(0.0);
  const auto& c = classical_curve();
  bool below = true;
  for (int t = 10; t <= 70; ++t) below = below && q[t] < c[t];
  const bool half = q[70] <= 0.5 * c[70];
  return {below && half, fmt::format("quantum {:.4f} vs classical {:.4f} at kick 70 (need <= half); "
                                     "below at every kick >= 10: {}",
                                     q[70], c[70], below)};
}

Outcome c4() {
  const auto& q0 = quantum_curve(0.0);
  const auto& q1 = quantum_curve(0.0187);
  const auto& q2 = quantum_curve(0.0503);
  const auto& c = classical_curve();
  const bool increasing = q0[70] < q1[70] && q1[70] < q2[70];
  bool between = true;
  for (int t = 10; t <= 70; ++t) between = between && q0[t] < q2[t] && q2[t] < c[t];
  return {increasing && between,
          fmt::format("kick 70: {:.4f} < {:.4f} < {:.4f}: {}; eta=0.0503 between quantum and "
                      "classical for kicks >= 10: {}",
                      q0[70], q1[70], q2[70], increasing, between)};
}

Outcome c5() {
  FluxOptions opt;
  opt.grid_phi = 400;
  opt.grid_rho = 400;
  opt.integrator.backend = PendulumBackend::elliptic;
  const FluxEstimate f = cantorus_flux(280.0, build_pulse_train(0.05, 0.1), boundary, opt);
  const double target = 4.6 * hbar_k;
  const double ratio = f.flux / target;
  return {ratio >= 0.5 && ratio <= 2.0,
          fmt::format("flux {:.3f} +- {:.3f} ({} events) = {:.2f} x 4.6 hbar_k (tol factor 2)",
                      f.flux, f.std_error, f.events, ratio)};
}

Outcome c6() {
  SimParams p = transport_params();
  p.kick_strength = 280.0;
  p.n_kicks = 50;
  const QuantumRun r = run_quantum(p, 280.0, 0.019, boundary);
  const double contrast = shoulder_contrast(r.populations.back(), hbar_k, boundary, 12 * pi);
  return {contrast >= 5.0,
          fmt::format("density drop from just inside 10pi to 12pi = {:.2f}x (need >= 5x)", contrast)};
}

Outcome c7() {
  const FloquetOperator u = build_floquet(128, 280.0, hbar_k, build_pulse_train(0.05, 0.1));
  const DensityMatrix rho0 = DensityMatrix::thermal(128, 10.3, hbar_k);
  double neg[2], marginal = 0.0;
  const double etas[2] = {0.0, 0.02};
  for (int i = 0; i < 2; ++i) {
    const DensityEvolution e = evolve_density(rho0, u, etas[i], 70, {70});
    const WignerGrid w = toroidal_wigner(e.checkpoints[0].rho, hbar_k);
    neg[i] = negativity_volume(w);
    marginal = std::max(marginal, momentum_marginal_error(w, e.checkpoints[0].rho));
  }
  // Direct double sum over l and j.
  double fft_error = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const ComplexMatrix rho = support::random_density(n, 100 + n);
    const WignerGrid w = toroidal_wigner(DensityMatrix(rho), hbar_k);
    for (int row = 0; row < 2 * n; ++row) {
      const int l = row - n;
      for (int k = 0; k < 2 * n; ++k) {
        cd sum = 0.0;
        for (int j = -n; j < n; ++j) {
          if ((l + j) % 2 != 0) continue;
          const int a = (l + j) / 2 + n / 2;
          const int b = (l - j) / 2 + n / 2;
          if (a < 0 || a >= n || b < 0 || b >= n) continue;
          sum += std::exp(cd(0.0, pi * j * k / n)) * rho(a, b);
        }
        fft_error = std::max(fft_error, std::abs(w.values(row, k) - sum.real()));
      }
    }
  }
  const bool ok = neg[1] < neg[0] && marginal <= 1e-10 && fft_error <= 1e-10;
  return {ok, fmt::format("negativity {:.4f} (eta=0.02) < {:.4f} (eta=0); marginal error {:.1e} "
                          "(tol 1e-10); FFT vs direct {:.1e} (tol 1e-10)",
                          neg[1], neg[0], marginal, fft_error)};
}

Outcome c8() {
  const PulseTrain train = build_pulse_train(0.05, 0.1);
  const FloquetOperator u = build_floquet(128, 270.0, hbar_k, train);
  const double unitarity = unitarity_error(u.matrix);

  std::vector<int> every(71);
  for (int t = 0; t <= 70; ++t) every[t] = t;
  const DensityEvolution e =
      evolve_density(DensityMatrix::thermal(128, 10.3, hbar_k), u, 0.0503, 70, every);
  double min_eig = 1.0;
  for (const auto& cp : e.checkpoints) min_eig = std::min(min_eig, cp.rho.min_eigenvalue());

  const FloquetOperator free = build_floquet(128, 0.0, hbar_k, train);
  double phase_error = 0.0;
  for (int i = 0; i < 128; ++i) {
    const int n = ladder_value(i, 128);
    for (int j = 0; j < 128; ++j) {
      const long double angle = std::remainder(-(long double)(n * n) * hbar_k / 2.0L,
                                               6.283185307179586476925286766559005768L);
      const cd expected = i == j ? std::polar(1.0, double(angle)) : cd(0.0);
      phase_error = std::max(phase_error, std::abs(free.matrix(i, j) - expected));
    }
  }

  // The motion is chaotic, so the backends decorrelate within a few kicks and
  // the gap is sampling noise; 1e5 trajectories keep it well under 0.01.
  SimParams big = transport_params();
  big.n_trajectories = 100000;
  ClassicalSettings sym;
  sym.backend = PendulumBackend::symplectic;
  const auto s = run_classical(big, 270.0, boundary, sym).fraction_outside;
  const auto c = run_classical(big, 270.0, boundary, elliptic()).fraction_outside;
  double backend_gap = 0.0;
  for (std::size_t t = 0; t < c.size(); ++t) backend_gap = std::max(backend_gap, std::abs(s[t] - c[t]));

  const bool ok = unitarity <= 1e-10 && e.max_trace_drift <= 1e-12 && min_eig >= -1e-10 &&
                  phase_error <= 1e-12 && backend_gap <= 0.01;
  return {ok, fmt::format("unitarity {:.1e} (1e-10); trace drift {:.1e} (1e-12); min eigenvalue "
                          "{:.1e} (>= -1e-10); k=0 phases {:.1e} (1e-12); backend gap {:.4f} (0.01)",
                          unitarity, e.max_trace_drift, min_eig, phase_error, backend_gap)};
}

Outcome c9() {
  SimParams p = transport_params();
  p.basis_size = 256;
  const double big = run_quantum(p, 270.0, 0.0, boundary).fraction_outside.back();
  const double small = quantum_curve(0.0).back();
  const double gap = std::abs(big - small);
  return {gap < 0.01, fmt::format("N=128 {:.5f}, N=256 {:.5f}, |diff| {:.2e} (tol 0.01)", small, big, gap)};
}

Outcome c10() {
  const fs::path out = fs::temp_directory_path() / "kamrotor_acceptance_determinism";
  fs::remove_all(out);
  RunConfig c = load_config(fs::path(KAMROTOR_SOURCE_DIR) / "configs" / "transport.ini");
  c.output_dir = out;
  const RunManifest a = run_scenario(c);
  const RunManifest b = run_scenario(c);
  bool same = a.files.size() == b.files.size() && !a.files.empty();
  for (std::size_t i = 0; same && i < a.files.size(); ++i) {
    same = a.files[i].name == b.files[i].name &&
           io::sha256_file(a.run_dir / a.files[i].name) == io::sha256_file(b.run_dir / b.files[i].name);
  }
  fs::remove_all(out);
  return {same, fmt::format("{} output files, byte-identical across runs: {}", a.files.size(), same)};
}

}  // namespace

int main() {
  report("C1", "missing resonances", c1);
  report("C2", "KAM confinement at k=5", c2);
  report("C3", "quantum suppression", c3);
  report("C4", "decoherence monotonicity", c4);
  report("C5", "cantorus flux", c5);
  report("C6", "shoulders", c6);
  report("C7", "Wigner smoothing", c7);
  report("C8", "numerical hygiene", c8);
  report("C9", "basis independence", c9);
  report("C10", "determinism", c10);
  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
