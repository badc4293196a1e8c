#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "micromaser/config.hpp"
#include "micromaser/parallel.hpp"

namespace micromaser {

// Frozen reference values checked by --check.
namespace regression {
// Quasi-stationary ground-atom rate on {1,2,3} for R=100, gamma=20, phi0=pi exact.
inline constexpr double kFig3UpperBranchRate = 38.202381833891;
inline constexpr double kUpperBranchTolerance = 1e-6;
inline constexpr double kEfficiencyLow = 0.88;
inline constexpr double kEfficiencyHigh = 0.97;
inline constexpr double kExactlyOneFraction = 0.95;
inline constexpr double kFalseTriggerFactor = 2.0;
}  // namespace regression

inline constexpr std::string_view kOutputRootVariable = "MICROMASER_OUTPUT_ROOT";

std::vector<std::string> command_names();

struct CommandOptions {
  bool check = false;
  Execution execution = Execution::parallel;
  std::optional<std::filesystem::path> output_dir;  // overrides the config and environment
};

struct CommandOutcome {
  int exit_code = 0;
  std::string summary;
  std::filesystem::path output_dir;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  std::vector<std::string> check_failures;
};

// Output directory: explicit override, else config output_dir; a relative
// directory is placed under $MICROMASER_OUTPUT_ROOT when that is set.
std::filesystem::path resolve_output_dir(const RunConfig& config, const CommandOptions& options);

// Runs one harness, writes its CSVs and manifest.txt, and (with check) compares
// against the regression constants. Throws std::invalid_argument for an
// unknown command and std::runtime_error for I/O failures.
CommandOutcome run_command(std::string_view command, const RunConfig& config, const CommandOptions& options);

struct OracleComparison {
  SimParams params;
  std::vector<double> oracle;
  std::vector<double> sampled;
  double total_variation = 0.0;
};

// Randomized parameter sets with delta_phi > 0 and n_t in {0, 0.1}.
std::vector<SimParams> random_parameter_sets(int count, std::uint64_t seed);

// Trajectory occupation over `events` jumps against the generator steady state.
OracleComparison compare_with_oracle(const SimParams& params, std::int64_t events, std::uint64_t seed,
                                     Execution execution);

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace micromaser
