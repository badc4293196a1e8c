// micromaser: command-line front end for the micromaser photon-detector simulator.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "micromaser/config.hpp"
#include "micromaser/harness.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool check = false;
  bool serial = false;
  std::vector<std::string> overrides;
};

micromaser::RunConfig load(const Flags& flags) {
  micromaser::RunConfig config;
  if (!flags.config_path.empty()) {
    config = micromaser::parse_config(flags.config_path);
  } else if (!flags.preset.empty()) {
    config = micromaser::preset_config(flags.preset);
  } else {
    config = micromaser::preset_config("fig3");
  }
  std::map<std::string, std::string> overrides;
  if (!flags.config_path.empty() && !flags.preset.empty()) overrides["preset"] = flags.preset;
  for (const auto& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw micromaser::ConfigError({"--set " + kv + ": expected key=value"});
    overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (flags.seed) overrides["seed"] = std::to_string(*flags.seed);
  if (!overrides.empty()) config = micromaser::apply_overrides(config, overrides);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Micromaser single-microwave-photon detector simulator"};
  app.require_subcommand(1);
  Flags flags;

  const std::map<std::string, std::string> descriptions = {
      {"trajectory", "Run seeded trajectories and export event and click streams"},
      {"figure3", "Ideal single-injection trajectory with photon number and ground-rate series"},
      {"figure4", "Threshold trigger and reset run with background clicks"},
      {"efficiency", "Detection efficiency versus pump rate, with and without two-atom events"},
      {"hysteresis", "Up and down pump-rate sweep of the occupation distribution"},
      {"oracle-check", "Compare trajectory occupations against the exact steady state"},
  };
  for (const auto& name : micromaser::command_names()) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("-c,--config", flags.config_path, "Run configuration file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("-p,--preset", flags.preset, "Built-in parameter preset")
        ->check(CLI::IsMember(micromaser::preset_names()));
    sub->add_option("-s,--seed", flags.seed, "64-bit seed");
    sub->add_option("-o,--out", flags.out, "Output directory (overrides config and MICROMASER_OUTPUT_ROOT)");
    sub->add_option("--set", flags.overrides, "Override a configuration key (key=value), repeatable");
    sub->add_flag("--check", flags.check, "Compare against frozen regression constants; nonzero exit on violation");
    sub->add_flag("--serial", flags.serial, "Run the serial reference path instead of OpenMP");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const auto config = load(flags);
    micromaser::CommandOptions options;
    options.check = flags.check;
    options.execution = flags.serial ? micromaser::Execution::serial : micromaser::Execution::parallel;
    if (!flags.out.empty()) options.output_dir = flags.out;

    const auto outcome = micromaser::run_command(command, config, options);
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : outcome.check_failures) std::cerr << "check failed: " << f << '\n';
    std::cout << outcome.summary << " -> " << outcome.output_dir.string() << '\n';
    return outcome.exit_code;
  } catch (const micromaser::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
