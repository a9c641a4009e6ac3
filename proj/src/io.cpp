#include "kamrotor/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "kamrotor/errors.hpp"

namespace kamrotor::io {

namespace {

std::string to_hex(const unsigned char* data, unsigned int size) {
  std::string out;
  out.reserve(2 * size);
  for (unsigned int i = 0; i < size; ++i) fmt::format_to(std::back_inserter(out), "{:02x}", data[i]);
  return out;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      EVP_MD_CTX_free(ctx_);
      throw IoError("cannot initialise SHA-256");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx_, data, size) != 1) throw IoError("SHA-256 update failed");
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, md.data(), &len) != 1) throw IoError("SHA-256 final failed");
    return to_hex(md.data(), len);
  }

 private:
  EVP_MD_CTX* ctx_;
};

double parse_double(std::string_view token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw IoError("malformed number '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string format_transport_curve(const TransportCurve& curve) {
  curve.validate();
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# source={} boundary={:.12g} points={} {}\n", to_string(curve.source),
                 curve.boundary, curve.kick_index.size(), curve.fingerprint);
  fmt::format_to(it, "# kick fraction_outside\n");
  for (std::size_t i = 0; i < curve.kick_index.size(); ++i) {
    fmt::format_to(it, "{} {:.12g}\n", curve.kick_index[i], curve.fraction_outside[i]);
  }
  return out;
}

std::string format_snapshot(const ClassicalEnsemble& ensemble, int kick) {
  ensemble.validate();
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# kick={} trajectories={}\n# phi rho\n", kick, ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    fmt::format_to(it, "{:.12g} {:.12g}\n", ensemble.phi[i], ensemble.rho[i]);
  }
  out += "\n\n";
  return out;
}

std::string format_populations(const std::vector<Eigen::VectorXd>& per_kick,
                               double scaled_planck, double beta) {
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# hbar_k={:.12g} beta={:.12g}\n# kick n rho population\n", scaled_planck,
                 beta);
  for (std::size_t t = 0; t < per_kick.size(); ++t) {
    const auto& p = per_kick[t];
    const int n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i) {
      const int ladder = ladder_value(i, n);
      fmt::format_to(it, "{} {} {:.12g} {:.12g}\n", t, ladder, (ladder + beta) * scaled_planck,
                     p[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_density_checkpoint(const DensityMatrix& rho, const CheckpointHeader& header) {
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# density-matrix N={} k={:.17g} hbar_k={:.17g} eta={:.17g} kick={}\n",
                 header.basis_size, header.kick_strength, header.scaled_planck,
                 header.se_probability, header.kick);
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      fmt::format_to(it, "{}{:.17g} {:.17g}", c ? " " : "", m(r, c).real(), m(r, c).imag());
    }
    out += '\n';
  }
  return out;
}

DensityMatrix parse_density_checkpoint(std::string_view text, CheckpointHeader* header) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# density-matrix", 0) != 0) {
    throw IoError("density checkpoint: missing header");
  }
  CheckpointHeader h;
  {
    std::istringstream hs(line.substr(std::string("# density-matrix").size()));
    std::string kv;
    while (hs >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw IoError("density checkpoint: bad header field " + kv);
      const std::string key = kv.substr(0, eq);
      const std::string_view value = std::string_view(kv).substr(eq + 1);
      if (key == "N") h.basis_size = static_cast<int>(parse_double(value));
      else if (key == "k") h.kick_strength = parse_double(value);
      else if (key == "hbar_k") h.scaled_planck = parse_double(value);
      else if (key == "eta") h.se_probability = parse_double(value);
      else if (key == "kick") h.kick = static_cast<int>(parse_double(value));
    }
  }
  if (h.basis_size <= 0) throw IoError("density checkpoint: bad basis size");
  ComplexMatrix m(h.basis_size, h.basis_size);
  for (int r = 0; r < h.basis_size; ++r) {
    if (!std::getline(in, line)) throw IoError("density checkpoint: truncated");
    std::istringstream ls(line);
    std::string re;
    std::string im;
    for (int c = 0; c < h.basis_size; ++c) {
      if (!(ls >> re >> im)) throw IoError("density checkpoint: short row");
      m(r, c) = {parse_double(re), parse_double(im)};
    }
  }
  if (header) *header = h;
  return DensityMatrix(std::move(m));
}

std::string format_wigner_columns(const WignerGrid& w, bool coarse) {
  const Eigen::MatrixXd& g = coarse ? w.coarse : w.values;
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# toroidal Wigner function {} grid {}x{} hbar_k={:.12g}\n# X P w\n",
                 coarse ? "coarse" : "fine", g.rows(), g.cols(), w.scaled_planck);
  for (Eigen::Index k = 0; k < g.cols(); ++k) {
    const double x = coarse ? w.coarse_position(static_cast<int>(k))
                            : w.position(static_cast<int>(k));
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double p = coarse ? w.coarse_momentum(static_cast<int>(r))
                              : w.momentum(static_cast<int>(r));
      fmt::format_to(it, "{:.12g} {:.12g} {:.12g}\n", x, p, g(r, k));
    }
    out += '\n';
  }
  return out;
}

std::string format_wigner_matrix(const WignerGrid& w, bool coarse) {
  const Eigen::MatrixXd& g = coarse ? w.coarse : w.values;
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# rows: P, columns: X; first row holds the X axis\nP\\X");
  for (Eigen::Index k = 0; k < g.cols(); ++k) {
    fmt::format_to(it, " {:.12g}",
                   coarse ? w.coarse_position(static_cast<int>(k)) : w.position(static_cast<int>(k)));
  }
  out += '\n';
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    fmt::format_to(it, "{:.12g}",
                   coarse ? w.coarse_momentum(static_cast<int>(r)) : w.momentum(static_cast<int>(r)));
    for (Eigen::Index k = 0; k < g.cols(); ++k) fmt::format_to(it, " {:.12g}", g(r, k));
    out += '\n';
  }
  return out;
}

std::string format_poincare(const PoincareSection& section) {
  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# Poincare section k={:.12g} points={}\n# phi rho seed\n",
                 section.kick_strength, section.points.size());
  for (std::size_t i = 0; i < section.points.size(); ++i) {
    fmt::format_to(it, "{:.12g} {:.12g} {}\n", section.points[i].phi, section.points[i].rho,
                   section.seed_index[i]);
  }
  return out;
}

}  // namespace kamrotor::io
