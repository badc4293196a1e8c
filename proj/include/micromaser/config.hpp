#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "micromaser/core_model.hpp"
#include "micromaser/detection.hpp"
#include "micromaser/experiments.hpp"

namespace micromaser {

struct TrajectorySettings {
  std::int64_t count = 1;
  double t_end = 10.0;
  std::vector<double> injection_times;
  double injection_rate = 0.0;   // > 0 selects Poisson injections
  bool controller = false;
};

struct HysteresisSettings {
  std::vector<double> R_values{10, 20, 30, 50, 70, 100, 150, 200, 300, 500, 700, 1000};
  double dwell = 0.0;  // 0 selects 10 / gamma
};

struct OracleCheckSettings {
  int parameter_sets = 5;
  std::int64_t events = 1'000'000;
  double tv_limit = 0.02;
};

struct RunConfig {
  std::string preset;  // empty, fig3, fig4 or fig5
  SimParams sim;
  ControllerConfig controller;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  std::int64_t n_injections = 1000;
  std::vector<double> R_list{50, 100, 200, 300, 500, 700, 1000};
  EfficiencyOptions efficiency;
  Figure3Options figure3;
  Figure4Options figure4;
  TrajectorySettings trajectory;
  HysteresisSettings hysteresis;
  OracleCheckSettings oracle_check;

  // Canonical key = value text that parses back to this configuration.
  std::string to_text() const;
};

// Every problem found while loading, each naming its key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  std::vector<std::string> errors;
};

// Built-in parameter sets for the figure runs: "fig3", "fig4", "fig5".
RunConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

// Parses "key = value" lines ('#' starts a comment). A `preset` key, wherever it
// appears, is applied first; other keys override it. Without a preset, R and
// gamma are required. Unknown keys and out-of-range values are collected and
// thrown together as ConfigError.
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

// Applies `key = value` overrides (e.g. from the command line) on top of a config.
RunConfig apply_overrides(const RunConfig& base, const std::map<std::string, std::string>& overrides);

}  // namespace micromaser
