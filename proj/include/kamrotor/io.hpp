#pragma once

// Text exports. Every format is gnuplot-ready: '#' header lines followed by
// whitespace-separated columns, blank lines between blocks.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "kamrotor/analysis.hpp"
#include "kamrotor/classical.hpp"
#include "kamrotor/quantum.hpp"
#include "kamrotor/wigner.hpp"

namespace kamrotor::io {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Writes (truncating) and throws IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

/// "# kick fraction_outside" with a metadata line; one row per entry.
std::string format_transport_curve(const TransportCurve& curve);

/// One block per kick: phi rho.
std::string format_snapshot(const ClassicalEnsemble& ensemble, int kick);

/// Rows "kick n rho population", one block per kick.
std::string format_populations(const std::vector<Eigen::VectorXd>& per_kick,
                               double scaled_planck, double beta = 0.0);

struct CheckpointHeader {
  int basis_size = 0;
  double kick_strength = 0.0;
  double scaled_planck = 0.0;
  double se_probability = 0.0;
  int kick = 0;
};

/// Header line then N rows of 2N numbers (re im interleaved), full precision.
std::string format_density_checkpoint(const DensityMatrix& rho, const CheckpointHeader& header);
DensityMatrix parse_density_checkpoint(std::string_view text,
                                       CheckpointHeader* header = nullptr);

/// Rows "X P w" on the fine (or coarse) grid, one block per X.
std::string format_wigner_columns(const WignerGrid& w, bool coarse);

/// Dense dump: first row the X axis (leading cell is the P label), then one
/// row per momentum starting with P.
std::string format_wigner_matrix(const WignerGrid& w, bool coarse);

/// Rows "phi rho seed".
std::string format_poincare(const PoincareSection& section);

}  // namespace kamrotor::io
