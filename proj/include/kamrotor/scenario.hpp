#pragma once

// Named experiments. Each scenario writes gnuplot-ready data files plus an
// index into a fresh run directory, then manifest.json last.

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kamrotor/config.hpp"
#include "kamrotor/quantum.hpp"

namespace kamrotor {

std::string artifact_version();

/// Incoherent average over quasimomentum samples and k-spread nodes.
struct QuantumRun {
  std::vector<Eigen::VectorXd> populations;  // populations[t] after t kicks
  std::vector<double> fraction_outside;      // per kick, 0 .. n_kicks
  std::vector<DensityCheckpoint> checkpoints;
  double beta_mean = 0.0;  // mean quasimomentum offset of the samples
  double max_trace_drift = 0.0;
  double max_edge_population = 0.0;
  double max_unitarity_error = 0.0;
};

QuantumRun run_quantum(const SimParams& params, double kick_strength, double eta,
                       double boundary, const QuantumSettings& settings = {},
                       const std::vector<int>& checkpoints = {});

struct ClassicalRun {
  std::vector<double> fraction_outside;  // per kick, 0 .. n_kicks
  std::vector<ClassicalEnsemble> snapshots;  // kept when a stride is given
  std::vector<int> snapshot_kicks;
  ClassicalEnsemble final_state;
};

/// Thermal ensemble of params.n_trajectories seeded by params.rng_seed.
ClassicalRun run_classical(const SimParams& params, double kick_strength, double boundary,
                           const ClassicalSettings& settings = {}, int snapshot_stride = 0);

struct OutputFile {
  std::string name;  // relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::filesystem::path run_dir;
  std::string scenario;
  std::string config;  // canonical text
  std::string config_sha256;
  std::string version;
  std::string started_utc;
  double wall_seconds = 0.0;
  std::vector<OutputFile> files;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

/// Validates, creates <output_dir>/<UTC stamp>-<config digest>, runs the
/// scenario and writes manifest.json last. Compute errors keep their
/// category and gain the scenario name as context.
RunManifest run_scenario(const RunConfig& config);

}  // namespace kamrotor
