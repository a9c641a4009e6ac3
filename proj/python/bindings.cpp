#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kamrotor/analysis.hpp"
#include "kamrotor/classical.hpp"
#include "kamrotor/config.hpp"
#include "kamrotor/errors.hpp"
#include "kamrotor/model.hpp"
#include "kamrotor/quantum.hpp"
#include "kamrotor/scenario.hpp"
#include "kamrotor/wigner.hpp"

namespace py = pybind11;
using namespace kamrotor;

namespace {

FloquetOperator wrap_operator(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw InvalidArgument("Floquet matrix must be square");
  FloquetOperator op;
  op.matrix = u;
  return op;
}

py::dict manifest_dict(const RunManifest& m) {
  py::list files;
  for (const auto& f : m.files) {
    files.append(py::dict(py::arg("name") = f.name, py::arg("sha256") = f.sha256,
                          py::arg("bytes") = f.bytes));
  }
  return py::dict(py::arg("run_dir") = m.run_dir.string(), py::arg("scenario") = m.scenario,
                  py::arg("config") = m.config, py::arg("config_sha256") = m.config_sha256,
                  py::arg("version") = m.version, py::arg("started_utc") = m.started_utc,
                  py::arg("wall_seconds") = m.wall_seconds, py::arg("files") = files,
                  py::arg("warnings") = m.warnings);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "kamrotor core";
  m.attr("__version__") = artifact_version();

  auto& base = py::register_exception<Error>(m, "KamrotorError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<StatisticsError>(m, "StatisticsError", base.ptr());

  py::enum_<PendulumBackend>(m, "Backend")
      .value("symplectic", PendulumBackend::symplectic)
      .value("elliptic", PendulumBackend::elliptic);

  py::class_<SimParams>(m, "SimParams")
      .def(py::init<>())
      .def_readwrite("kick_strength", &SimParams::kick_strength)
      .def_readwrite("scaled_planck", &SimParams::scaled_planck)
      .def_readwrite("se_probability", &SimParams::se_probability)
      .def_readwrite("pulse_width", &SimParams::pulse_width)
      .def_readwrite("pulse_spacing", &SimParams::pulse_spacing)
      .def_readwrite("basis_size", &SimParams::basis_size)
      .def_readwrite("n_kicks", &SimParams::n_kicks)
      .def_readwrite("n_trajectories", &SimParams::n_trajectories)
      .def_readwrite("rng_seed", &SimParams::rng_seed)
      .def_readwrite("init_momentum_sigma", &SimParams::init_momentum_sigma)
      .def("validate", &SimParams::validate);

  m.def(
      "physical_to_scaled",
      [](double rabi, std::array<double, 3> detunings, double wave_number, double mass,
         double period) {
        PhysicalParams p{rabi, detunings, wave_number, mass, period};
        const ScaledParams s = physical_to_scaled(p);
        return py::make_tuple(s.kick_strength, s.scaled_planck);
      },
      py::arg("rabi_frequency"), py::arg("detunings"), py::arg("wave_number"),
      py::arg("atom_mass"), py::arg("pulse_period"),
      "(kick_strength, scaled_planck) from laboratory parameters");

  m.def("fourier_coefficient", &fourier_coefficient, py::arg("m"), py::arg("width") = 1.0 / 20.0,
        py::arg("spacing") = 1.0 / 10.0);
  m.def("resonance_width", &resonance_width, py::arg("m"), py::arg("kick_strength"),
        py::arg("width") = 1.0 / 20.0, py::arg("spacing") = 1.0 / 10.0);
  m.def("chirikov_overlap", &chirikov_overlap, py::arg("m"), py::arg("n"),
        py::arg("kick_strength"), py::arg("width") = 1.0 / 20.0,
        py::arg("spacing") = 1.0 / 10.0);
  m.def(
      "pulse_train",
      [](double width, double spacing) {
        std::vector<std::pair<double, bool>> out;
        const PulseTrain train = build_pulse_train(width, spacing);
        for (const auto& s : train.segments()) {
          out.emplace_back(s.duration, s.driven);
        }
        return out;
      },
      py::arg("width") = 1.0 / 20.0, py::arg("spacing") = 1.0 / 10.0,
      "List of (duration, driven) segments of one cycle");

  m.def(
      "kick_cycle",
      [](double phi, double rho, double k, double width, double spacing, PendulumBackend b) {
        const PhasePoint s =
            kick_cycle({phi, rho}, k, build_pulse_train(width, spacing), {b, 256});
        return py::make_tuple(s.phi, s.rho);
      },
      py::arg("phi"), py::arg("rho"), py::arg("kick_strength"), py::arg("width") = 1.0 / 20.0,
      py::arg("spacing") = 1.0 / 10.0, py::arg("backend") = PendulumBackend::symplectic);

  m.def(
      "classical_transport",
      [](const SimParams& p, double boundary, PendulumBackend b) {
        ClassicalSettings s;
        s.backend = b;
        return run_classical(p, p.kick_strength, boundary, s).fraction_outside;
      },
      py::arg("params"), py::arg("boundary") = 10.0 * constants::pi,
      py::arg("backend") = PendulumBackend::elliptic,
      py::call_guard<py::gil_scoped_release>(), "Fraction outside |rho| = boundary per kick");

  m.def(
      "cantorus_flux",
      [](double k, double boundary, int grid, int cycles, double band, PendulumBackend b) {
        FluxOptions o;
        o.grid_phi = o.grid_rho = static_cast<std::size_t>(grid);
        o.n_cycles = cycles;
        o.band_half_width = band;
        o.integrator.backend = b;
        const FluxEstimate e = cantorus_flux(k, build_pulse_train(0.05, 0.1), boundary, o);
        return py::dict(py::arg("flux") = e.flux, py::arg("std_error") = e.std_error,
                        py::arg("events") = e.events, py::arg("per_cycle") = e.per_cycle);
      },
      py::arg("kick_strength"), py::arg("boundary") = 10.0 * constants::pi,
      py::arg("grid") = 400, py::arg("cycles") = 50, py::arg("band") = 4.0 * constants::pi,
      py::arg("backend") = PendulumBackend::elliptic);

  m.def(
      "build_hamiltonians",
      [](int n, double k, double h, double beta) {
        const Hamiltonians hs = build_hamiltonians(n, k, h, beta);
        return py::make_tuple(hs.dark, hs.light);
      },
      py::arg("basis_size"), py::arg("kick_strength"), py::arg("scaled_planck"),
      py::arg("beta") = 0.0, "(dark diagonal, light matrix)");

  m.def(
      "floquet_operator",
      [](int n, double k, double h, double width, double spacing, double beta) {
        return build_floquet(n, k, h, build_pulse_train(width, spacing), beta).matrix;
      },
      py::arg("basis_size"), py::arg("kick_strength"), py::arg("scaled_planck"),
      py::arg("width") = 1.0 / 20.0, py::arg("spacing") = 1.0 / 10.0, py::arg("beta") = 0.0);

  m.def(
      "thermal_state",
      [](int n, double sigma, double h) { return DensityMatrix::thermal(n, sigma, h).matrix(); },
      py::arg("basis_size"), py::arg("sigma"), py::arg("scaled_planck"));

  m.def(
      "apply_decoherence",
      [](const ComplexMatrix& rho, double eta) {
        return apply_decoherence(DensityMatrix(rho), eta).matrix();
      },
      py::arg("rho"), py::arg("eta"));

  m.def(
      "evolve_density",
      [](const ComplexMatrix& rho, const ComplexMatrix& u, double eta, int n_kicks) {
        const DensityEvolution evo =
            evolve_density(DensityMatrix(rho), wrap_operator(u), eta, n_kicks);
        Eigen::MatrixXd pops(static_cast<Eigen::Index>(evo.populations.size()), rho.rows());
        for (std::size_t t = 0; t < evo.populations.size(); ++t) {
          pops.row(static_cast<Eigen::Index>(t)) = evo.populations[t].transpose();
        }
        return pops;
      },
      py::arg("rho"), py::arg("floquet"), py::arg("eta"), py::arg("n_kicks"),
      py::call_guard<py::gil_scoped_release>(), "Populations, one row per kick from 0");

  m.def("fraction_outside_quantum", &fraction_outside_quantum, py::arg("populations"),
        py::arg("scaled_planck"), py::arg("boundary"), py::arg("beta") = 0.0);

  m.def(
      "run_quantum",
      [](const SimParams& p, double eta, double boundary) {
        return run_quantum(p, p.kick_strength, eta, boundary).fraction_outside;
      },
      py::arg("params"), py::arg("eta"), py::arg("boundary") = 10.0 * constants::pi,
      py::call_guard<py::gil_scoped_release>(),
      "Quantum fraction outside per kick from a thermal start");

  m.def(
      "wigner",
      [](const ComplexMatrix& rho, double h) {
        const WignerGrid w = toroidal_wigner(DensityMatrix(rho), h);
        return py::make_tuple(w.values, w.coarse, negativity_volume(w));
      },
      py::arg("rho"), py::arg("scaled_planck"), "(fine 2N x 2N, coarse N x N, negativity)");

  m.def("continued_fraction", &continued_fraction, py::arg("w"), py::arg("depth"));

  m.def("scenario_names", &scenario_names);
  m.def(
      "parse_config", [](const std::string& text) { return to_ini(parse_config(text)); },
      py::arg("text"), "Canonical form of a config; raises ConfigError");
  m.def(
      "run_scenario",
      [](const std::string& text, std::optional<std::string> output_dir) {
        RunConfig c = parse_config(text);
        if (output_dir) c.output_dir = *output_dir;
        RunManifest man;
        {
          py::gil_scoped_release release;
          man = run_scenario(c);
        }
        return manifest_dict(man);
      },
      py::arg("config_text"), py::arg("output_dir") = py::none());
}
