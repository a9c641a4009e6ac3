#pragma once

// Run configuration: INI-style text with sections
//   [run] [params] [sweep] [checkpoints] [classical] [quantum] [physical]
// Lists are comma separated. Unknown sections or keys are rejected.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kamrotor/classical.hpp"
#include "kamrotor/model.hpp"

namespace kamrotor {

enum class Scenario { poincare, waterfall, transport, wigner, flux };

std::string to_string(Scenario s);
/// Throws ConfigError for an unknown name.
Scenario scenario_from_string(std::string_view name);
std::vector<std::string> scenario_names();
std::string scenario_description(Scenario s);

struct ClassicalSettings {
  PendulumBackend backend = PendulumBackend::symplectic;
  int substeps = 256;
  double kick_spread = 0.0;  // relative Gaussian spread of k, 0 = off
  int snapshot_stride = 0;   // 0 = no ensemble snapshots
  int poincare_seeds = 60;
  int poincare_kicks = 400;
  double poincare_rho_max = 12.0 * constants::pi;
  double flux_band = 4.0 * constants::pi;
  int flux_grid = 400;
  int flux_cycles = 50;
  int flux_min_events = 100;

  bool operator==(const ClassicalSettings&) const = default;
};

struct QuantumSettings {
  int beta_samples = 0;       // 0 = single ladder at beta = 0
  double kick_spread = 0.0;   // relative Gaussian spread of k, 0 = off
  int kick_spread_nodes = 5;  // Gauss-Hermite nodes when kick_spread > 0

  bool operator==(const QuantumSettings&) const = default;
};

struct PhysicalBlock {
  PhysicalParams params;
  std::optional<double> temperature;  // K; sets init_momentum_sigma

  bool operator==(const PhysicalBlock&) const = default;
};

struct RunConfig {
  Scenario scenario = Scenario::transport;
  std::filesystem::path output_dir = "runs";
  SimParams params;
  double boundary = 10.0 * constants::pi;
  std::vector<double> eta_values;   // empty: params.se_probability alone
  std::vector<double> kick_values;  // empty: params.kick_strength alone
  std::vector<int> checkpoints;
  ClassicalSettings classical;
  QuantumSettings quantum;
  std::optional<PhysicalBlock> physical;

  std::vector<double> etas() const;
  std::vector<double> kicks() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Throws ConfigError(field, reason).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the offending field.
void validate_config(const RunConfig& config);

/// Canonical text: fixed section and key order, every value written, numbers
/// in shortest round-trip form. parse_config(to_ini(c)) == c.
std::string to_ini(const RunConfig& config);

}  // namespace kamrotor
