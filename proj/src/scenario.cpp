#include "kamrotor/scenario.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iterator>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "json.hpp"
#include "kamrotor/analysis.hpp"
#include "kamrotor/errors.hpp"
#include "kamrotor/io.hpp"
#include "kamrotor/wigner.hpp"
#include "parallel.hpp"

namespace kamrotor {

namespace fs = std::filesystem;

namespace {

IntegratorOptions integrator(const ClassicalSettings& s) {
  return {s.backend, s.substeps};
}

std::vector<double> beta_samples(int count) {
  if (count <= 0) return {0.0};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) out[static_cast<std::size_t>(j)] = (j + 0.5) / count;
  return out;
}

std::string tag(double k, double eta) { return fmt::format("k{}_eta{}", k, eta); }

std::string fingerprint(const SimParams& p, double k, double eta) {
  return fmt::format("k={} hbar_k={} eta={} N={} sigma={} seed={} alpha={} Delta={}", k,
                     p.scaled_planck, eta, p.basis_size, p.init_momentum_sigma, p.rng_seed,
                     p.pulse_width, p.pulse_spacing);
}

TransportCurve make_curve(const std::vector<double>& fraction, double boundary,
                          CurveSource source, std::string fp) {
  TransportCurve c;
  c.boundary = boundary;
  c.source = source;
  c.fingerprint = std::move(fp);
  c.fraction_outside = fraction;
  c.kick_index.resize(fraction.size());
  for (std::size_t i = 0; i < fraction.size(); ++i) c.kick_index[i] = static_cast<int>(i);
  return c;
}

// Classical momenta binned onto the quantum ladder cells.
std::string format_classical_histograms(const std::vector<ClassicalEnsemble>& snapshots,
                                        const std::vector<int>& kicks, int basis_size,
                                        double scaled_planck) {
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# classical momentum histogram, bins of width hbar_k={:.12g}\n"
                     "# kick n rho fraction\n", scaled_planck);
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    std::vector<double> counts(static_cast<std::size_t>(basis_size), 0.0);
    const auto& e = snapshots[s];
    for (double r : e.rho) {
      const long n = std::lround(r / scaled_planck);
      const long i = n + basis_size / 2;
      if (i >= 0 && i < basis_size) counts[static_cast<std::size_t>(i)] += 1.0;
    }
    for (int i = 0; i < basis_size; ++i) {
      const int n = ladder_value(i, basis_size);
      fmt::format_to(it, "{} {} {:.12g} {:.12g}\n", kicks[s], n, n * scaled_planck,
                     counts[static_cast<std::size_t>(i)] / static_cast<double>(e.size()));
    }
    out += '\n';
  }
  return out;
}

class RunWriter {
 public:
  explicit RunWriter(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    io::write_text(dir_ / name, content);
    files_.push_back({name, io::sha256_hex(content), content.size()});
  }

  void warn(std::string message) { warnings_.push_back(std::move(message)); }

  std::vector<OutputFile>& files() { return files_; }
  std::vector<std::string>& warnings() { return warnings_; }

 private:
  fs::path dir_;
  std::vector<OutputFile> files_;
  std::vector<std::string> warnings_;
};

void check_quantum_health(RunWriter& out, const QuantumRun& q, double k, double eta) {
  if (q.max_edge_population > edge_population_warning) {
    out.warn(fmt::format("k={} eta={}: edge population {:.3g} exceeds {:.0e}; enlarge basis_size",
                         k, eta, q.max_edge_population, edge_population_warning));
  }
}

struct QuantumJob {
  double k = 0.0;
  double eta = 0.0;
  QuantumRun result;
};

std::vector<QuantumJob> quantum_sweep(const RunConfig& c, const std::vector<int>& checkpoints) {
  std::vector<QuantumJob> jobs;
  for (double k : c.kicks()) {
    for (double eta : c.etas()) jobs.push_back({k, eta, {}});
  }
  detail::parallel_jobs(jobs.size(), [&](std::size_t i) {
    jobs[i].result = run_quantum(c.params, jobs[i].k, jobs[i].eta, c.boundary, c.quantum,
                                 checkpoints);
  });
  return jobs;
}

void write_checkpoints(RunWriter& out, const RunConfig& c, const QuantumJob& job) {
  for (const auto& cp : job.result.checkpoints) {
    io::CheckpointHeader h{c.params.basis_size, job.k, c.params.scaled_planck, job.eta, cp.kick};
    out.write(fmt::format("density_{}_kick{}.dat", tag(job.k, job.eta), cp.kick),
              io::format_density_checkpoint(cp.rho, h));
  }
}

void scenario_poincare(const RunConfig& c, RunWriter& out) {
  const PulseTrain pulses = build_pulse_train(c.params.pulse_width, c.params.pulse_spacing);
  const auto& cl = c.classical;
  const ClassicalEnsemble e = uniform_ensemble(static_cast<std::size_t>(cl.poincare_seeds),
                                               -cl.poincare_rho_max, cl.poincare_rho_max,
                                               c.params.rng_seed);
  std::vector<PhasePoint> seeds(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) seeds[i] = {e.phi[i], e.rho[i]};

  const auto ks = c.kicks();
  std::vector<PoincareSection> sections(ks.size());
  detail::parallel_jobs(ks.size(), [&](std::size_t i) {
    sections[i] = poincare_section(seeds, ks[i], pulses, cl.poincare_kicks, integrator(cl));
  });
  std::string index = "# file k points\n";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const std::string name = fmt::format("poincare_k{}.dat", ks[i]);
    out.write(name, io::format_poincare(sections[i]));
    index += fmt::format("{} {} {}\n", name, ks[i], sections[i].points.size());
  }
  out.write("index.dat", index);
}

void scenario_waterfall(const RunConfig& c, RunWriter& out) {
  const auto jobs = quantum_sweep(c, c.checkpoints);
  const auto ks = c.kicks();
  std::vector<ClassicalRun> classical(ks.size());
  detail::parallel_jobs(ks.size(), [&](std::size_t i) {
    classical[i] = run_classical(c.params, ks[i], c.boundary, c.classical, 1);
  });

  std::string index = "# file source k eta\n";
  for (const auto& job : jobs) {
    check_quantum_health(out, job.result, job.k, job.eta);
    const std::string name = fmt::format("populations_{}.dat", tag(job.k, job.eta));
    out.write(name, io::format_populations(job.result.populations, c.params.scaled_planck,
                                           job.result.beta_mean));
    index += fmt::format("{} quantum {} {}\n", name, job.k, job.eta);
    write_checkpoints(out, c, job);
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const std::string name = fmt::format("classical_histogram_k{}.dat", ks[i]);
    out.write(name, format_classical_histograms(classical[i].snapshots,
                                                classical[i].snapshot_kicks,
                                                c.params.basis_size, c.params.scaled_planck));
    index += fmt::format("{} classical {} -\n", name, ks[i]);
  }
  out.write("index.dat", index);
}

void scenario_transport(const RunConfig& c, RunWriter& out) {
  const auto jobs = quantum_sweep(c, c.checkpoints);
  const auto ks = c.kicks();
  std::vector<ClassicalRun> classical(ks.size());
  detail::parallel_jobs(ks.size(), [&](std::size_t i) {
    classical[i] =
        run_classical(c.params, ks[i], c.boundary, c.classical, c.classical.snapshot_stride);
  });

  std::string index = "# file source k eta fraction_outside_final\n";
  for (const auto& job : jobs) {
    check_quantum_health(out, job.result, job.k, job.eta);
    const std::string name = fmt::format("transport_quantum_{}.dat", tag(job.k, job.eta));
    out.write(name, io::format_transport_curve(make_curve(job.result.fraction_outside,
                                                          c.boundary, CurveSource::quantum,
                                                          fingerprint(c.params, job.k, job.eta))));
    index += fmt::format("{} quantum {} {} {:.12g}\n", name, job.k, job.eta,
                         job.result.fraction_outside.back());
    write_checkpoints(out, c, job);
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& run = classical[i];
    const std::string name = fmt::format("transport_classical_k{}.dat", ks[i]);
    out.write(name, io::format_transport_curve(make_curve(run.fraction_outside, c.boundary,
                                                          CurveSource::classical,
                                                          fingerprint(c.params, ks[i], 0.0))));
    index += fmt::format("{} classical {} - {:.12g}\n", name, ks[i], run.fraction_outside.back());
    if (!run.snapshots.empty()) {
      std::string snaps;
      for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
        snaps += io::format_snapshot(run.snapshots[s], run.snapshot_kicks[s]);
      }
      out.write(fmt::format("classical_snapshots_k{}.dat", ks[i]), snaps);
    }
  }
  out.write("index.dat", index);
}

void scenario_wigner(const RunConfig& c, RunWriter& out) {
  std::vector<int> kicks = c.checkpoints;
  if (kicks.empty()) kicks.push_back(c.params.n_kicks);
  const auto jobs = quantum_sweep(c, kicks);

  std::string index = "# file k eta kick negativity_volume marginal_error\n";
  for (const auto& job : jobs) {
    check_quantum_health(out, job.result, job.k, job.eta);
    write_checkpoints(out, c, job);
    for (const auto& cp : job.result.checkpoints) {
      const WignerGrid w = toroidal_wigner(cp.rho, c.params.scaled_planck);
      const std::string stem = fmt::format("{}_kick{}", tag(job.k, job.eta), cp.kick);
      out.write("wigner_" + stem + ".dat", io::format_wigner_columns(w, false));
      out.write("wigner_coarse_" + stem + ".dat", io::format_wigner_matrix(w, true));
      index += fmt::format("wigner_{}.dat {} {} {} {:.12g} {:.3e}\n", stem, job.k, job.eta,
                           cp.kick, negativity_volume(w), momentum_marginal_error(w, cp.rho));
    }
  }
  out.write("index.dat", index);
}

void scenario_flux(const RunConfig& c, RunWriter& out) {
  const PulseTrain pulses = build_pulse_train(c.params.pulse_width, c.params.pulse_spacing);
  const auto& cl = c.classical;
  FluxOptions opt;
  opt.band_half_width = cl.flux_band;
  opt.grid_phi = opt.grid_rho = static_cast<std::size_t>(cl.flux_grid);
  opt.n_cycles = cl.flux_cycles;
  opt.min_events = static_cast<std::size_t>(cl.flux_min_events);
  opt.integrator = integrator(cl);

  const auto ks = c.kicks();
  std::vector<FluxEstimate> estimates(2 * ks.size());
  detail::parallel_jobs(estimates.size(), [&](std::size_t i) {
    const double b = (i % 2 == 0) ? c.boundary : -c.boundary;
    estimates[i] = cantorus_flux(ks[i / 2], pulses, b, opt);
  });

  std::string index = "# file k boundary flux std_error events flux_over_hbar_k\n";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    std::string body;
    auto it = std::back_inserter(body);
    const std::string name = fmt::format("flux_k{}.dat", ks[i]);
    for (std::size_t s = 0; s < 2; ++s) {
      const FluxEstimate& e = estimates[2 * i + s];
      const double ratio = e.flux / c.params.scaled_planck;
      fmt::format_to(it,
                     "# boundary={:.12g} flux={:.12g} std_error={:.12g} events={} "
                     "flux_over_hbar_k={:.6g}\n# cycle first_crossing_area\n",
                     e.boundary, e.flux, e.std_error, e.events, ratio);
      for (std::size_t t = 0; t < e.per_cycle.size(); ++t) {
        fmt::format_to(it, "{} {:.12g}\n", t + 1, e.per_cycle[t]);
      }
      body += "\n\n";
      index += fmt::format("{} {} {:.12g} {:.12g} {:.12g} {} {:.6g}\n", name, ks[i], e.boundary,
                           e.flux, e.std_error, e.events, ratio);
    }
    out.write(name, body);
  }
  out.write("index.dat", index);
}

[[noreturn]] void rethrow_in_context(const Error& e, const std::string& context) {
  const std::string what = context + ": " + e.what();
  if (const auto* s = dynamic_cast<const StatisticsError*>(&e)) throw StatisticsError(what, s->count());
  if (const auto* c = dynamic_cast<const ConfigError*>(&e)) throw ConfigError(c->field(), c->reason());
  switch (e.category()) {
    case ErrorCategory::invalid_parameter: throw InvalidParameter(what);
    case ErrorCategory::invalid_argument: throw InvalidArgument(what);
    case ErrorCategory::numerical: throw NumericalError(what);
    case ErrorCategory::io: throw IoError(what);
    default: throw Error(e.category(), what);
  }
}

fs::path make_run_dir(const fs::path& root, const std::string& stamp, const std::string& digest) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
  const std::string base = stamp + "-" + digest.substr(0, 12);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const fs::path dir = root / (attempt == 0 ? base : fmt::format("{}-{}", base, attempt));
    if (fs::create_directory(dir, ec)) return dir;
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }
  throw IoError("no free run directory name under " + root.string());
}

}  // namespace

std::string artifact_version() { return KAMROTOR_VERSION; }

QuantumRun run_quantum(const SimParams& params, double kick_strength, double eta,
                       double boundary, const QuantumSettings& settings,
                       const std::vector<int>& checkpoints) {
  const std::vector<double> betas = beta_samples(settings.beta_samples);
  if (betas.size() > 1 && !checkpoints.empty()) {
    throw InvalidArgument("density checkpoints need a single quasimomentum");
  }
  const auto nodes =
      kick_spread_quadrature(kick_strength, settings.kick_spread, settings.kick_spread_nodes);
  const PulseTrain pulses = build_pulse_train(params.pulse_width, params.pulse_spacing);
  const int n = params.basis_size;

  struct Member {
    double beta;
    double k;
    double weight;
    DensityEvolution evo;
    double unitarity = 0.0;
  };
  std::vector<Member> members;
  for (double beta : betas) {
    for (const auto& node : nodes) {
      members.push_back({beta, node.value, node.weight / static_cast<double>(betas.size()), {}});
    }
  }
  detail::parallel_jobs(members.size(), [&](std::size_t i) {
    Member& m = members[i];
    const FloquetOperator u = build_floquet(n, m.k, params.scaled_planck, pulses, m.beta);
    m.unitarity = unitarity_error(u.matrix);
    const DensityMatrix rho0 =
        DensityMatrix::thermal(n, params.init_momentum_sigma, params.scaled_planck, m.beta);
    m.evo = evolve_density(rho0, u, eta, params.n_kicks, checkpoints);
  });

  QuantumRun out;
  const auto steps = static_cast<std::size_t>(params.n_kicks) + 1;
  out.populations.assign(steps, Eigen::VectorXd::Zero(n));
  out.fraction_outside.assign(steps, 0.0);
  for (const Member& m : members) {
    for (std::size_t t = 0; t < steps; ++t) {
      out.populations[t] += m.weight * m.evo.populations[t];
      out.fraction_outside[t] +=
          m.weight * fraction_outside_quantum(m.evo.populations[t], params.scaled_planck,
                                              boundary, m.beta);
    }
    out.beta_mean += m.weight * m.beta;
    out.max_trace_drift = std::max(out.max_trace_drift, m.evo.max_trace_drift);
    out.max_edge_population = std::max(out.max_edge_population, m.evo.max_edge_population);
    out.max_unitarity_error = std::max(out.max_unitarity_error, m.unitarity);
  }
  if (!checkpoints.empty()) {
    const auto& first = members.front().evo.checkpoints;
    for (std::size_t j = 0; j < first.size(); ++j) {
      ComplexMatrix sum = ComplexMatrix::Zero(n, n);
      for (const Member& m : members) sum += m.weight * m.evo.checkpoints[j].rho.matrix();
      out.checkpoints.push_back({first[j].kick, DensityMatrix(std::move(sum))});
    }
  }
  return out;
}

ClassicalRun run_classical(const SimParams& params, double kick_strength, double boundary,
                           const ClassicalSettings& settings, int snapshot_stride) {
  const PulseTrain pulses = build_pulse_train(params.pulse_width, params.pulse_spacing);
  ClassicalEnsemble e =
      thermal_ensemble(static_cast<std::size_t>(params.n_trajectories),
                       params.init_momentum_sigma, params.rng_seed, settings.kick_spread);
  ClassicalRun out;
  out.fraction_outside.push_back(fraction_outside_classical(e, boundary));
  if (snapshot_stride > 0) {
    out.snapshots.push_back(e);
    out.snapshot_kicks.push_back(0);
  }
  evolve_ensemble(e, kick_strength, pulses, params.n_kicks, integrator(settings),
                  [&](int kick, const ClassicalEnsemble& state) {
                    out.fraction_outside.push_back(fraction_outside_classical(state, boundary));
                    if (snapshot_stride > 0 && kick % snapshot_stride == 0) {
                      out.snapshots.push_back(state);
                      out.snapshot_kicks.push_back(kick);
                    }
                  });
  out.final_state = std::move(e);
  return out;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["artifact"] = "kamrotor";
  j["version"] = version;
  j["scenario"] = scenario;
  j["run_dir"] = run_dir.string();
  j["started_utc"] = started_utc;
  j["wall_clock_seconds"] = wall_seconds;
  j["config_sha256"] = config_sha256;
  j["config"] = config;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

RunManifest run_scenario(const RunConfig& config) {
  validate_config(config);
  const auto t0 = std::chrono::steady_clock::now();
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());

  RunManifest m;
  m.scenario = to_string(config.scenario);
  m.config = to_ini(config);
  m.config_sha256 = io::sha256_hex(m.config);
  m.version = artifact_version();
  m.started_utc = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
  m.run_dir = make_run_dir(config.output_dir, fmt::format("{:%Y%m%dT%H%M%SZ}", fmt::gmtime(now)),
                           m.config_sha256);

  RunWriter out(m.run_dir);
  out.write("config.ini", m.config);
  if (config.physical) {
    const double ratio = adiabaticity_ratio(config.physical->params);
    if (ratio > adiabaticity_warning_threshold) {
      out.warn(fmt::format("Rabi frequency / smallest detuning = {:.3g} > {}; adiabatic "
                           "elimination is questionable", ratio, adiabaticity_warning_threshold));
    }
  }
  try {
    switch (config.scenario) {
      case Scenario::poincare: scenario_poincare(config, out); break;
      case Scenario::waterfall: scenario_waterfall(config, out); break;
      case Scenario::transport: scenario_transport(config, out); break;
      case Scenario::wigner: scenario_wigner(config, out); break;
      case Scenario::flux: scenario_flux(config, out); break;
    }
  } catch (const Error& e) {
    rethrow_in_context(e, "scenario " + m.scenario);
  }

  m.files = std::move(out.files());
  m.warnings = std::move(out.warnings());
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::write_text(m.run_dir / "manifest.json", m.to_json());
  return m;
}

}  // namespace kamrotor
