// kamrotor: run, validate and list the named scenarios.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kamrotor/config.hpp"
#include "kamrotor/errors.hpp"
#include "kamrotor/scenario.hpp"

namespace {

int fail(const kamrotor::Error& e) {
  std::cerr << "error [" << kamrotor::to_string(e.category()) << "]: " << e.what() << '\n';
  return static_cast<int>(e.category());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-pulse kicked rotor simulator"};
  app.set_version_flag("--version", kamrotor::artifact_version());
  app.require_subcommand(1);

  std::string run_path;
  std::string output_override;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  run->add_option("config", run_path, "Config file")->required();
  run->add_option("-o,--output-dir", output_override, "Override run.output_dir");

  std::string validate_path;
  bool print_canonical = false;
  auto* validate = app.add_subcommand("validate", "Parse and validate a config file");
  validate->add_option("config", validate_path, "Config file")->required();
  validate->add_flag("--canonical", print_canonical, "Print the canonical form");

  auto* list = app.add_subcommand("list-scenarios", "List the available scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto config = kamrotor::load_config(run_path);
      if (!output_override.empty()) config.output_dir = output_override;
      const auto manifest = kamrotor::run_scenario(config);
      for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << manifest.run_dir.string() << '\n';
    } else if (*validate) {
      const auto config = kamrotor::load_config(validate_path);
      if (print_canonical) {
        std::cout << kamrotor::to_ini(config);
      } else {
        std::cout << "ok: scenario " << kamrotor::to_string(config.scenario) << '\n';
      }
    } else if (*list) {
      for (const auto& name : kamrotor::scenario_names()) {
        const auto s = kamrotor::scenario_from_string(name);
        std::cout << name << "\t" << kamrotor::scenario_description(s) << '\n';
      }
    }
  } catch (const kamrotor::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
