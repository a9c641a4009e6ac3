#include <filesystem>
#include <sstream>
#include <string>

#include "doctest.h"
#include "kamrotor/config.hpp"
#include "kamrotor/errors.hpp"
#include "kamrotor/io.hpp"
#include "support.hpp"

using namespace kamrotor;
namespace fs = std::filesystem;

namespace {

int count_data_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kamrotor_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("SHA-256 test vectors") {
  CHECK(io::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(io::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const fs::path dir = scratch_dir("sha");
  io::write_text(dir / "f.txt", "abc");
  CHECK(io::sha256_file(dir / "f.txt") == io::sha256_hex("abc"));
  CHECK(io::read_text(dir / "f.txt") == "abc");
  CHECK_THROWS_AS(io::read_text(dir / "missing.txt"), IoError);
  CHECK_THROWS_AS(io::write_text(dir / "no" / "such" / "dir.txt", "x"), IoError);
}

TEST_CASE("transport curve files") {
  TransportCurve c;
  c.boundary = 31.4;
  CHECK(count_data_rows(io::format_transport_curve(c)) == 0);
  for (int k = 1; k <= 70; ++k) {
    c.kick_index.push_back(k);
    c.fraction_outside.push_back(k / 100.0);
  }
  const std::string text = io::format_transport_curve(c);
  CHECK(count_data_rows(text) == 70);
  CHECK(text.rfind("# source=quantum", 0) == 0);
}

TEST_CASE("density checkpoint round trip") {
  const DensityMatrix rho(support::random_density(12, 3));
  const io::CheckpointHeader h{12, 280.0, 2.6, 0.0187, 70};
  io::CheckpointHeader back;
  const DensityMatrix parsed = io::parse_density_checkpoint(io::format_density_checkpoint(rho, h), &back);
  CHECK(support::max_abs(parsed.matrix() - rho.matrix()) == 0.0);
  CHECK(back.basis_size == 12);
  CHECK(back.kick == 70);
  CHECK(back.se_probability == 0.0187);
  CHECK_THROWS_AS(io::parse_density_checkpoint("not a checkpoint"), IoError);
  CHECK_THROWS_AS(io::parse_density_checkpoint("# density-matrix N=2 k=1\n1 0 0 0\n"), IoError);
}

TEST_CASE("Wigner and population files") {
  const WignerGrid w = toroidal_wigner(DensityMatrix::maximally_mixed(8), 2.6);
  CHECK(count_data_rows(io::format_wigner_columns(w, false)) == 256);
  CHECK(count_data_rows(io::format_wigner_columns(w, true)) == 64);
  CHECK(count_data_rows(io::format_wigner_matrix(w, true)) == 9);
  std::vector<Eigen::VectorXd> pops(3, Eigen::VectorXd::Constant(8, 0.125));
  CHECK(count_data_rows(io::format_populations(pops, 2.6)) == 24);
}

TEST_CASE("config defaults and canonical round trip") {
  const RunConfig c = parse_config("[run]\nscenario = transport\n");
  CHECK(c.params == SimParams{});
  CHECK(c.etas() == std::vector<double>{0.0});
  CHECK(parse_config(to_ini(c)) == c);

  const std::string full =
      "# comment\n[run]\nscenario = wigner\noutput_dir = out\n"
      "[params]\nkick_strength = 280\nscaled_planck = 2.599\nn_kicks = 70\n"
      "[sweep]\neta = 0, 0.02\nkick_strength = 270, 280\n"
      "[checkpoints]\nkicks = 0, 35, 70\n"
      "[classical]\nbackend = elliptic\nkick_spread = 0.06\n"
      "[quantum]\nkick_spread = 0.06\nkick_spread_nodes = 3\n";
  const RunConfig f = parse_config(full);
  CHECK(f.scenario == Scenario::wigner);
  CHECK(f.kick_values == std::vector<double>{270.0, 280.0});
  CHECK(f.checkpoints == std::vector<int>{0, 35, 70});
  CHECK(f.classical.backend == PendulumBackend::elliptic);
  CHECK(parse_config(to_ini(f)) == f);
  CHECK(to_ini(parse_config(to_ini(f))) == to_ini(f));
}

TEST_CASE("physical block derives the scaled parameters") {
  const std::string text =
      "[run]\nscenario = transport\n[physical]\nrabi_frequency = 9.152e8\n"
      "detuning_45 = 1.7593e10\ndetuning_44 = 1.6016e10\ndetuning_43 = 1.4751e10\n"
      "wave_number = 7374630.6\natom_mass = 2.2069e-25\npulse_period = 25e-6\n"
      "temperature = 12.5e-6\n";
  const RunConfig c = parse_config(text);
  REQUIRE(c.physical.has_value());
  CHECK(c.params.kick_strength == doctest::Approx(270.0).epsilon(0.01));
  CHECK(c.params.scaled_planck == doctest::Approx(2.599).epsilon(1e-3));
  CHECK(c.params.init_momentum_sigma == doctest::Approx(10.31).epsilon(1e-3));
  CHECK(parse_config(to_ini(c)) == c);
  CHECK(field_of(text + "[params]\nkick_strength = 5\n") == "params.kick_strength");
  CHECK(field_of(text + "[params]\ninit_momentum_sigma = 5\n") == "params.init_momentum_sigma");
}

TEST_CASE("config errors name the field") {
  const std::string head = "[run]\nscenario = transport\n";
  CHECK(field_of("[run]\n") == "run.scenario");
  CHECK(field_of("[run]\nscenario = nope\n") == "run.scenario");
  CHECK(field_of(head + "[params]\nbogus = 1\n") == "params.bogus");
  CHECK(field_of(head + "[extra]\nx = 1\n") == "extra");
  CHECK(field_of(head + "[params]\nkick_strength = abc\n") == "params.kick_strength");
  CHECK(field_of(head + "[params]\nbasis_size = 7\n") == "params");
  CHECK(field_of(head + "[sweep]\neta = 0, 1.5\n") == "sweep.eta");
  CHECK(field_of(head + "[checkpoints]\nkicks = 0, 71\n") == "checkpoints.kicks");
  CHECK(field_of(head + "[checkpoints]\nkicks = 3, 3\n") == "checkpoints.kicks");
  CHECK(field_of(head + "[classical]\nbackend = rk4\n") == "classical.backend");
  CHECK(field_of(head + "[quantum]\nbeta_samples = 4\n[checkpoints]\nkicks = 70\n") ==
        "quantum.beta_samples");
  CHECK(field_of("[run]\nscenario = wigner\n[quantum]\nbeta_samples = 4\n") ==
        "quantum.beta_samples");
  CHECK(field_of(head + "[quantum]\nkick_spread = 0.5\nkick_spread_nodes = 20\n") ==
        "quantum.kick_spread");
  CHECK(field_of(head + "[physical]\nrabi_frequency = 1\n") != "<accepted>");
}

TEST_CASE("shipped configs parse") {
  const fs::path dir = fs::path(KAMROTOR_SOURCE_DIR) / "configs";
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    const RunConfig c = load_config(entry.path());
    CHECK(parse_config(to_ini(c)) == c);
    ++seen;
  }
  CHECK(seen >= 5);
  CHECK_THROWS_AS(load_config(dir / "missing.ini"), ConfigError);
}
