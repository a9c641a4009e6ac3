#include "kamrotor/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "kamrotor/errors.hpp"
#include "kamrotor/io.hpp"

namespace kamrotor {

namespace pt = boost::property_tree;

namespace {

struct ScenarioInfo {
  Scenario id;
  const char* name;
  const char* description;
};

constexpr ScenarioInfo scenarios[] = {
    {Scenario::poincare, "poincare", "stroboscopic section of the classical map"},
    {Scenario::waterfall, "waterfall", "per-kick quantum and classical momentum distributions"},
    {Scenario::transport, "transport", "fraction outside the boundary versus kick, eta sweep"},
    {Scenario::wigner, "wigner", "toroidal Wigner snapshots and negativity volume"},
    {Scenario::flux, "flux", "classical flux through the boundary per cycle"},
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"run", {"scenario", "output_dir"}},
      {"params",
       {"kick_strength", "scaled_planck", "se_probability", "pulse_width", "pulse_spacing",
        "basis_size", "n_kicks", "n_trajectories", "rng_seed", "init_momentum_sigma",
        "boundary"}},
      {"sweep", {"eta", "kick_strength"}},
      {"checkpoints", {"kicks"}},
      {"classical",
       {"backend", "substeps", "kick_spread", "snapshot_stride", "poincare_seeds",
        "poincare_kicks", "poincare_rho_max", "flux_band", "flux_grid", "flux_cycles",
        "flux_min_events"}},
      {"quantum", {"beta_samples", "kick_spread", "kick_spread_nodes"}},
      {"physical",
       {"rabi_frequency", "detuning_45", "detuning_44", "detuning_43", "wave_number",
        "atom_mass", "pulse_period", "temperature"}},
  };
  return keys;
}

template <class T>
T parse_number(const std::string& field, std::string text) {
  boost::algorithm::trim(text);
  T v{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(field, "cannot parse '" + text + "' as a number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  }
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& field, const std::string& text) {
  std::vector<T> out;
  std::string trimmed = boost::algorithm::trim_copy(text);
  if (trimmed.empty()) return out;
  std::stringstream ss(trimmed);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(field, item));
  return out;
}

template <class T>
std::string format_list(const std::vector<T>& v) {
  return fmt::format("{}", fmt::join(v, ", "));
}

// Boost's INI reader only knows ';' comments.
std::string strip_hash_comments(std::string_view text) {
  std::string out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') line.clear();
    out += line;
    out += '\n';
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  bool has_section(const std::string& section) const {
    return tree_.find(section) != tree_.not_found();
  }

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.find(section);
    if (sec == tree_.not_found()) return std::nullopt;
    const auto it = sec->second.find(key);
    if (it == sec->second.not_found()) return std::nullopt;
    return it->second.data();
  }

  template <class T>
  void number(const std::string& section, const std::string& key, T& target) const {
    if (auto v = raw(section, key)) target = parse_number<T>(section + "." + key, *v);
  }

 private:
  const pt::ptree& tree_;
};

void check_known(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = keys.find(section);
    if (it == keys.end()) {
      if (body.empty()) throw ConfigError(section, "keys must live inside a section");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }
}

PendulumBackend backend_from_string(const std::string& text) {
  const std::string t = boost::algorithm::trim_copy(text);
  if (t == "symplectic") return PendulumBackend::symplectic;
  if (t == "elliptic") return PendulumBackend::elliptic;
  throw ConfigError("classical.backend", "expected 'symplectic' or 'elliptic', got '" + t + "'");
}

const char* backend_name(PendulumBackend b) {
  return b == PendulumBackend::elliptic ? "elliptic" : "symplectic";
}

void require(bool ok, const std::string& field, const std::string& reason) {
  if (!ok) throw ConfigError(field, reason);
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& info : scenarios) {
    if (info.id == s) return info.name;
  }
  return "unknown";
}

Scenario scenario_from_string(std::string_view name) {
  const std::string t = boost::algorithm::trim_copy(std::string(name));
  for (const auto& info : scenarios) {
    if (t == info.name) return info.id;
  }
  throw ConfigError("run.scenario", "unknown scenario '" + t + "'");
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& info : scenarios) out.emplace_back(info.name);
  return out;
}

std::string scenario_description(Scenario s) {
  for (const auto& info : scenarios) {
    if (info.id == s) return info.description;
  }
  return {};
}

std::vector<double> RunConfig::etas() const {
  return eta_values.empty() ? std::vector<double>{params.se_probability} : eta_values;
}

std::vector<double> RunConfig::kicks() const {
  return kick_values.empty() ? std::vector<double>{params.kick_strength} : kick_values;
}

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in(strip_hash_comments(text));
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("line {}", e.line()), e.message());
  }
  check_known(tree);
  const Reader r(tree);

  RunConfig c;
  if (auto v = r.raw("run", "scenario")) {
    c.scenario = scenario_from_string(*v);
  } else {
    throw ConfigError("run.scenario", "missing");
  }
  if (auto v = r.raw("run", "output_dir")) c.output_dir = boost::algorithm::trim_copy(*v);

  auto& p = c.params;
  r.number("params", "kick_strength", p.kick_strength);
  r.number("params", "scaled_planck", p.scaled_planck);
  r.number("params", "se_probability", p.se_probability);
  r.number("params", "pulse_width", p.pulse_width);
  r.number("params", "pulse_spacing", p.pulse_spacing);
  r.number("params", "basis_size", p.basis_size);
  r.number("params", "n_kicks", p.n_kicks);
  r.number("params", "n_trajectories", p.n_trajectories);
  r.number("params", "rng_seed", p.rng_seed);
  r.number("params", "init_momentum_sigma", p.init_momentum_sigma);
  r.number("params", "boundary", c.boundary);

  if (auto v = r.raw("sweep", "eta")) c.eta_values = parse_list<double>("sweep.eta", *v);
  if (auto v = r.raw("sweep", "kick_strength")) {
    c.kick_values = parse_list<double>("sweep.kick_strength", *v);
  }
  if (auto v = r.raw("checkpoints", "kicks")) {
    c.checkpoints = parse_list<int>("checkpoints.kicks", *v);
  }

  auto& cl = c.classical;
  if (auto v = r.raw("classical", "backend")) cl.backend = backend_from_string(*v);
  r.number("classical", "substeps", cl.substeps);
  r.number("classical", "kick_spread", cl.kick_spread);
  r.number("classical", "snapshot_stride", cl.snapshot_stride);
  r.number("classical", "poincare_seeds", cl.poincare_seeds);
  r.number("classical", "poincare_kicks", cl.poincare_kicks);
  r.number("classical", "poincare_rho_max", cl.poincare_rho_max);
  r.number("classical", "flux_band", cl.flux_band);
  r.number("classical", "flux_grid", cl.flux_grid);
  r.number("classical", "flux_cycles", cl.flux_cycles);
  r.number("classical", "flux_min_events", cl.flux_min_events);

  auto& q = c.quantum;
  r.number("quantum", "beta_samples", q.beta_samples);
  r.number("quantum", "kick_spread", q.kick_spread);
  r.number("quantum", "kick_spread_nodes", q.kick_spread_nodes);

  if (r.has_section("physical")) {
    for (const char* key : {"kick_strength", "scaled_planck"}) {
      if (r.raw("params", key)) {
        throw ConfigError(std::string("params.") + key, "derived from [physical]; remove one");
      }
    }
    if (r.raw("sweep", "kick_strength")) {
      throw ConfigError("sweep.kick_strength", "cannot sweep k when [physical] fixes it");
    }
    PhysicalBlock block;
    auto& ph = block.params;
    for (const char* key : {"rabi_frequency", "detuning_45", "detuning_44", "detuning_43",
                            "wave_number", "atom_mass", "pulse_period"}) {
      if (!r.raw("physical", key)) throw ConfigError(std::string("physical.") + key, "missing");
    }
    r.number("physical", "rabi_frequency", ph.rabi_frequency);
    r.number("physical", "detuning_45", ph.detunings[0]);
    r.number("physical", "detuning_44", ph.detunings[1]);
    r.number("physical", "detuning_43", ph.detunings[2]);
    r.number("physical", "wave_number", ph.wave_number);
    r.number("physical", "atom_mass", ph.atom_mass);
    r.number("physical", "pulse_period", ph.pulse_period);
    if (auto v = r.raw("physical", "temperature")) {
      if (r.raw("params", "init_momentum_sigma")) {
        throw ConfigError("params.init_momentum_sigma",
                          "derived from physical.temperature; remove one");
      }
      block.temperature = parse_number<double>("physical.temperature", *v);
    }
    ScaledParams scaled;
    try {
      scaled = physical_to_scaled(ph);
    } catch (const InvalidParameter& e) {
      throw ConfigError("physical", e.what());
    }
    p.kick_strength = scaled.kick_strength;
    p.scaled_planck = scaled.scaled_planck;
    if (block.temperature) {
      require(*block.temperature >= 0.0, "physical.temperature", "must be >= 0");
      p.init_momentum_sigma =
          thermal_momentum_sigma(*block.temperature, ph.wave_number, ph.pulse_period,
                                 ph.atom_mass);
    }
    c.physical = block;
  }

  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const IoError& e) {
    throw ConfigError(path.string(), e.what());
  }
  return parse_config(text);
}

void validate_config(const RunConfig& c) {
  try {
    c.params.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("params", e.what());
  }
  require(!c.output_dir.empty(), "run.output_dir", "must not be empty");
  require(c.boundary > 0.0, "params.boundary", "must be > 0");
  for (double eta : c.eta_values) {
    require(eta >= 0.0 && eta <= 1.0, "sweep.eta", fmt::format("{} outside [0, 1]", eta));
  }
  for (double k : c.kick_values) {
    require(k > 0.0, "sweep.kick_strength", fmt::format("{} must be > 0", k));
  }
  std::set<int> seen;
  for (int kick : c.checkpoints) {
    require(kick >= 0 && kick <= c.params.n_kicks, "checkpoints.kicks",
            fmt::format("{} outside [0, n_kicks]", kick));
    require(seen.insert(kick).second, "checkpoints.kicks", fmt::format("{} repeated", kick));
  }

  const auto& cl = c.classical;
  require(cl.substeps >= 1, "classical.substeps", "must be >= 1");
  require(cl.kick_spread >= 0.0 && cl.kick_spread < 1.0, "classical.kick_spread",
          "must lie in [0, 1)");
  require(cl.snapshot_stride >= 0, "classical.snapshot_stride", "must be >= 0");
  require(cl.poincare_seeds >= 1, "classical.poincare_seeds", "must be >= 1");
  require(cl.poincare_kicks >= 1, "classical.poincare_kicks", "must be >= 1");
  require(cl.poincare_rho_max > 0.0, "classical.poincare_rho_max", "must be > 0");
  require(cl.flux_band > 0.0, "classical.flux_band", "must be > 0");
  require(cl.flux_grid >= 1, "classical.flux_grid", "must be >= 1");
  require(cl.flux_cycles >= 1, "classical.flux_cycles", "must be >= 1");
  require(cl.flux_min_events >= 0, "classical.flux_min_events", "must be >= 0");

  const auto& q = c.quantum;
  require(q.beta_samples >= 0, "quantum.beta_samples", "must be >= 0");
  require(q.kick_spread >= 0.0 && q.kick_spread < 1.0, "quantum.kick_spread",
          "must lie in [0, 1)");
  require(q.kick_spread_nodes >= 1 && q.kick_spread_nodes <= 64, "quantum.kick_spread_nodes",
          "must lie in [1, 64]");
  if (q.kick_spread > 0.0) {
    try {
      for (double k : c.kicks()) kick_spread_quadrature(k, q.kick_spread, q.kick_spread_nodes);
    } catch (const InvalidParameter& e) {
      throw ConfigError("quantum.kick_spread", e.what());
    }
  }
  if (q.beta_samples > 1) {
    require(c.checkpoints.empty(), "quantum.beta_samples",
            "density checkpoints need a single quasimomentum");
    require(c.scenario != Scenario::wigner, "quantum.beta_samples",
            "Wigner snapshots need a single quasimomentum");
  }
}

std::string to_ini(const RunConfig& c) {
  std::string out;
  auto it = std::back_inserter(out);
  const auto& p = c.params;
  fmt::format_to(it, "[run]\nscenario = {}\noutput_dir = {}\n\n", to_string(c.scenario),
                 c.output_dir.string());

  out += "[params]\n";
  if (!c.physical) {
    fmt::format_to(it, "kick_strength = {}\nscaled_planck = {}\n", p.kick_strength,
                   p.scaled_planck);
  }
  fmt::format_to(it,
                 "se_probability = {}\npulse_width = {}\npulse_spacing = {}\nbasis_size = {}\n"
                 "n_kicks = {}\nn_trajectories = {}\nrng_seed = {}\n",
                 p.se_probability, p.pulse_width, p.pulse_spacing, p.basis_size, p.n_kicks,
                 p.n_trajectories, p.rng_seed);
  if (!(c.physical && c.physical->temperature)) {
    fmt::format_to(it, "init_momentum_sigma = {}\n", p.init_momentum_sigma);
  }
  fmt::format_to(it, "boundary = {}\n\n", c.boundary);

  fmt::format_to(it, "[sweep]\neta = {}\n", format_list(c.eta_values));
  if (!c.physical) fmt::format_to(it, "kick_strength = {}\n", format_list(c.kick_values));
  fmt::format_to(it, "\n[checkpoints]\nkicks = {}\n\n", format_list(c.checkpoints));

  const auto& cl = c.classical;
  fmt::format_to(it,
                 "[classical]\nbackend = {}\nsubsteps = {}\nkick_spread = {}\n"
                 "snapshot_stride = {}\npoincare_seeds = {}\npoincare_kicks = {}\n"
                 "poincare_rho_max = {}\nflux_band = {}\nflux_grid = {}\nflux_cycles = {}\n"
                 "flux_min_events = {}\n\n",
                 backend_name(cl.backend), cl.substeps, cl.kick_spread, cl.snapshot_stride,
                 cl.poincare_seeds, cl.poincare_kicks, cl.poincare_rho_max, cl.flux_band,
                 cl.flux_grid, cl.flux_cycles, cl.flux_min_events);

  const auto& q = c.quantum;
  fmt::format_to(it, "[quantum]\nbeta_samples = {}\nkick_spread = {}\nkick_spread_nodes = {}\n",
                 q.beta_samples, q.kick_spread, q.kick_spread_nodes);

  if (c.physical) {
    const auto& ph = c.physical->params;
    fmt::format_to(it,
                   "\n[physical]\nrabi_frequency = {}\ndetuning_45 = {}\ndetuning_44 = {}\n"
                   "detuning_43 = {}\nwave_number = {}\natom_mass = {}\npulse_period = {}\n",
                   ph.rabi_frequency, ph.detunings[0], ph.detunings[1], ph.detunings[2],
                   ph.wave_number, ph.atom_mass, ph.pulse_period);
    if (c.physical->temperature) {
      fmt::format_to(it, "temperature = {}\n", *c.physical->temperature);
    }
  }
  return out;
}

}  // namespace kamrotor
