#include "micromaser/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "micromaser/csv_io.hpp"
#include "micromaser/experiments.hpp"
#include "micromaser/manifest.hpp"
#include "micromaser/oracle.hpp"
#include "micromaser/stats.hpp"

namespace micromaser {

std::vector<std::string> command_names() {
  return {"trajectory", "figure3", "figure4", "efficiency", "hysteresis", "oracle-check"};
}

std::filesystem::path resolve_output_dir(const RunConfig& config, const CommandOptions& options) {
  if (options.output_dir) return *options.output_dir;
  std::filesystem::path dir = config.output_dir;
  if (dir.is_relative()) {
    if (const char* root = std::getenv(std::string(kOutputRootVariable).c_str()); root && *root) return std::filesystem::path(root) / dir;
  }
  return dir;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t size = std::max(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < size; ++i) sum += std::abs((i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0));
  return 0.5 * sum;
}

std::vector<SimParams> random_parameter_sets(int count, std::uint64_t seed) {
  Rng rng(child_seed(seed, 0xC0FFEE));
  std::vector<SimParams> out;
  for (int i = 0; i < count; ++i) {
    SimParams p;
    p.R = 30.0 + 120.0 * rng.uniform();
    p.gamma = 10.0 + 30.0 * rng.uniform();
    p.phi0 = std::numbers::pi * (0.3 + 0.7 * rng.uniform());
    p.delta_phi = 0.1 + 0.3 * rng.uniform();
    p.n_t = (i % 2 == 0) ? 0.0 : 0.1;
    p.n_max = 30;
    out.push_back(p);
  }
  return out;
}

OracleComparison compare_with_oracle(const SimParams& params, std::int64_t events, std::uint64_t seed,
                                     Execution execution) {
  OracleComparison c;
  c.params = params;
  c.oracle = steady_state(build_generator(params, true)).probability;
  c.sampled = sampled_occupation_chains(params, static_cast<std::uint64_t>(events), 8, seed, execution);
  c.total_variation = total_variation(c.oracle, c.sampled);
  return c;
}

namespace {

struct Output {
  std::string name;
  std::string text;
};

std::string to_csv(auto writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

std::string number(double v, int precision = 4) {
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

CommandOutcome finish(std::string_view command, const RunConfig& config, const CommandOptions& options,
                      std::vector<Output> outputs, std::string schedule, CommandOutcome outcome) {
  outcome.output_dir = resolve_output_dir(config, options);
  RunManifest manifest;
  manifest.command = std::string(command);
  manifest.config = config;
  manifest.schedule = std::move(schedule);
  manifest.warnings = outcome.warnings;
  for (const auto& o : outputs) {
    csv::write_file(outcome.output_dir / o.name, o.text);
    manifest.digests.emplace_back(o.name, sha256_hex(o.text));
    outcome.files.push_back(o.name);
  }
  csv::write_file(outcome.output_dir / "manifest.txt", manifest.render());
  outcome.files.emplace_back("manifest.txt");
  if (options.check && !outcome.check_failures.empty()) outcome.exit_code = 1;
  return outcome;
}

void append_warnings(CommandOutcome& outcome, const TrajectoryResult& run) {
  for (const auto& w : run.warnings)
    if (std::find(outcome.warnings.begin(), outcome.warnings.end(), w) == outcome.warnings.end())
      outcome.warnings.push_back(w);
}

CommandOutcome run_trajectory_command(const RunConfig& config, const CommandOptions& options) {
  const auto& s = config.trajectory;
  InjectionSchedule schedule = s.injection_rate > 0.0 ? InjectionSchedule::poisson(s.injection_rate)
                                                      : InjectionSchedule::at(s.injection_times);
  TrajectoryOptions run_options;
  if (s.controller) run_options.controller = config.controller;
  const auto runs = run_batch(config.sim, schedule, s.t_end, config.seed, static_cast<std::size_t>(s.count),
                              run_options, options.execution);

  CommandOutcome outcome;
  std::vector<Output> outputs;
  std::int64_t events = 0;
  std::int64_t ground = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::ostringstream suffix;
    suffix << std::setw(4) << std::setfill('0') << i;
    outputs.push_back({"events_" + suffix.str() + ".csv", to_csv([&](std::ostream& o) { csv::write_events(o, runs[i].events); })});
    outputs.push_back({"clicks_" + suffix.str() + ".csv", to_csv([&](std::ostream& o) { csv::write_clicks(o, runs[i].clicks); })});
    if (s.controller)
      outputs.push_back({"detections_" + suffix.str() + ".csv",
                         to_csv([&](std::ostream& o) { csv::write_detections(o, runs[i].detections); })});
    events += static_cast<std::int64_t>(runs[i].events.size());
    ground += std::count_if(runs[i].events.begin(), runs[i].events.end(),
                            [](const EventRecord& e) { return e.kind == JumpKind::AtomGround; });
    append_warnings(outcome, runs[i]);
  }
  outcome.summary = "trajectory: " + std::to_string(runs.size()) + " runs, " + std::to_string(events) +
                    " events, " + std::to_string(ground) + " AtomGround";
  std::string schedule_text = s.injection_rate > 0.0 ? "poisson rate " + number(s.injection_rate)
                                                     : std::to_string(s.injection_times.size()) + " explicit times";
  return finish("trajectory", config, options, std::move(outputs), schedule_text, std::move(outcome));
}

CommandOutcome run_figure3_command(const RunConfig& config, const CommandOptions& options) {
  const auto result = figure3_run(config.sim, config.seed, config.figure3);
  CommandOutcome outcome;
  append_warnings(outcome, result.trajectory);
  std::vector<Output> outputs;
  outputs.push_back({"fig3_events.csv", to_csv([&](std::ostream& o) { csv::write_events(o, result.trajectory.events); })});
  outputs.push_back({"fig3_clicks.csv", to_csv([&](std::ostream& o) { csv::write_clicks(o, result.trajectory.clicks); })});
  outputs.push_back({"fig3_rate.csv", to_csv([&](std::ostream& o) {
                       csv::write_rate_series(o, result.series, result.injection_time);
                     })});

  const auto qsd = quasi_stationary(build_generator(config.sim, true), {0});
  outcome.summary = "figure3: peak ground rate " + number(result.peak_rate) + "/s, excursion " +
                    number(result.excursion_time) + " s, max n " + std::to_string(result.max_photons_before_return) +
                    ", upper-branch oracle rate " + number(qsd.ground_click_rate) + "/s";
  if (options.check) {
    if (result.pre_injection_peak != 0.0) outcome.check_failures.emplace_back("pre-injection ground rate is not zero");
    if (!result.confined) outcome.check_failures.emplace_back("photon number left {1,2,3} before returning to vacuum");
    if (config.preset == "fig3" &&
        std::abs(qsd.ground_atom_rate - regression::kFig3UpperBranchRate) > regression::kUpperBranchTolerance)
      outcome.check_failures.push_back("upper-branch oracle rate " + number(qsd.ground_atom_rate, 12) +
                                       " differs from frozen " + number(regression::kFig3UpperBranchRate, 12));
  }
  return finish("figure3", config, options, std::move(outputs),
                "single injection at " + number(config.figure3.injection_time) + " s", std::move(outcome));
}

CommandOutcome run_figure4_command(const RunConfig& config, const CommandOptions& options) {
  Figure4Options fig4 = config.figure4;
  fig4.latency_window = config.efficiency.latency_window;
  fig4.spacing_min = config.efficiency.spacing_min;
  fig4.spacing_max = config.efficiency.spacing_max;
  const auto result = figure4_run(config.sim, config.controller, config.seed, fig4);
  CommandOutcome outcome;
  append_warnings(outcome, result.trajectory);
  std::vector<Output> outputs;
  outputs.push_back({"fig4_events.csv", to_csv([&](std::ostream& o) { csv::write_events(o, result.trajectory.events); })});
  outputs.push_back({"fig4_clicks.csv", to_csv([&](std::ostream& o) { csv::write_clicks(o, result.trajectory.clicks); })});
  outputs.push_back({"fig4_detections.csv",
                     to_csv([&](std::ostream& o) { csv::write_detections(o, result.trajectory.detections); })});
  outputs.push_back({"fig4_injections.csv", to_csv([&](std::ostream& o) {
                       csv::write_injections(o, result.injection_times, result.detections_per_injection);
                     })});

  const double measured =
      result.false_trigger_exposure > 0.0 ? static_cast<double>(result.false_triggers) / result.false_trigger_exposure : 0.0;
  const double predicted = background_trigger_rate(config.sim, config.controller);
  const double fraction = static_cast<double>(result.injections_with_exactly_one()) /
                          static_cast<double>(result.injection_times.size());
  outcome.summary = "figure4: " + std::to_string(result.injections_with_exactly_one()) + "/" +
                    std::to_string(result.injection_times.size()) + " injections with exactly one detection, " +
                    std::to_string(result.false_triggers) + " false triggers (" + number(measured) +
                    "/s vs oracle " + number(predicted) + "/s)";
  if (options.check && fraction < regression::kExactlyOneFraction)
    outcome.check_failures.push_back("exactly-one fraction " + number(fraction) + " below " +
                                     number(regression::kExactlyOneFraction));
  return finish("figure4", config, options, std::move(outputs),
                "uniform gaps in [" + number(fig4.spacing_min) + ", " + number(fig4.spacing_max) + "] s",
                std::move(outcome));
}

CommandOutcome run_efficiency_command(const RunConfig& config, const CommandOptions& options) {
  EfficiencyOptions eff = config.efficiency;
  eff.execution = options.execution;
  const auto points = efficiency_curve(config.sim, config.controller, config.R_list, config.n_injections, config.seed, eff);
  CommandOutcome outcome;
  std::vector<Output> outputs;
  outputs.push_back({"efficiency.csv", to_csv([&](std::ostream& o) { csv::write_efficiency(o, points); })});

  std::ostringstream summary;
  summary << "efficiency:";
  for (const auto& p : points)
    if (p.two_atom_mode == TwoAtomMode::off) summary << " R=" << p.R << ":" << number(p.efficiency, 3);
  outcome.summary = summary.str();
  for (const auto& p : points)
    if (p.error) outcome.warnings.push_back("R=" + number(p.R) + " " + std::string(to_string(p.two_atom_mode)) + ": " + *p.error);

  if (options.check) {
    for (const auto& p : points) {
      if (p.error) {
        outcome.check_failures.push_back("point R=" + number(p.R) + " failed: " + *p.error);
        continue;
      }
      if (p.two_atom_mode == TwoAtomMode::off && p.R >= 500.0 &&
          (p.efficiency < regression::kEfficiencyLow || p.efficiency > regression::kEfficiencyHigh))
        outcome.check_failures.push_back("efficiency at R=" + number(p.R) + " is " + number(p.efficiency) +
                                         ", outside [0.88, 0.97]");
    }
    const std::size_t half = points.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const auto& off = points[i];
      const auto& on = points[i + half];
      if (off.R >= 500.0 && !off.error && !on.error && !(off.efficiency - on.efficiency > off.ci_half_width()))
        outcome.check_failures.push_back("two-atom efficiency at R=" + number(off.R) +
                                         " is not below the off curve by a CI half-width");
    }
  }
  return finish("efficiency", config, options, std::move(outputs),
                "uniform gaps in [" + number(eff.spacing_min) + ", " + number(eff.spacing_max) + "] s",
                std::move(outcome));
}

CommandOutcome run_hysteresis_command(const RunConfig& config, const CommandOptions& options) {
  HysteresisOptions h;
  h.dwell = config.hysteresis.dwell;
  const auto sweep = hysteresis_sweep(config.sim, config.hysteresis.R_values, h);
  CommandOutcome outcome;
  std::vector<Output> outputs;
  outputs.push_back({"hysteresis.csv", to_csv([&](std::ostream& o) { csv::write_hysteresis(o, sweep); })});
  const auto window = bistable_window(sweep);
  outcome.summary = window ? "hysteresis: bistable window R in [" + number(window->R_low) + ", " +
                                 number(window->R_high) + "]"
                           : std::string("hysteresis: no bistable window");
  if (options.check) {
    if (!window) outcome.check_failures.emplace_back("no bistable window");
    if (config.sim.delta_phi == 0.0 && config.sim.n_t == 0.0)
      for (const auto& p : sweep)
        if (p.branch == SweepBranch::up && p.ground_atom_rate != 0.0)
          outcome.check_failures.push_back("lower branch rate nonzero at R=" + number(p.R));
  }
  return finish("hysteresis", config, options, std::move(outputs), "", std::move(outcome));
}

CommandOutcome run_oracle_check_command(const RunConfig& config, const CommandOptions& options) {
  const auto sets = random_parameter_sets(config.oracle_check.parameter_sets, config.seed);
  std::vector<OracleComparison> comparisons;
  for (std::size_t i = 0; i < sets.size(); ++i)
    comparisons.push_back(compare_with_oracle(sets[i], config.oracle_check.events, child_seed(config.seed, i),
                                              options.execution));
  CommandOutcome outcome;
  std::vector<Output> outputs;
  std::ostringstream report;
  report << "# schema_version=" << csv::kSchemaVersion << ",table=oracle_check\n"
         << "set,R,gamma,phi0,delta_phi,n_t,n_max,total_variation\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < comparisons.size(); ++i) {
    const auto& c = comparisons[i];
    report << i << ',' << csv::format_double(c.params.R) << ',' << csv::format_double(c.params.gamma) << ','
           << csv::format_double(c.params.phi0) << ',' << csv::format_double(c.params.delta_phi) << ','
           << csv::format_double(c.params.n_t) << ',' << c.params.n_max << ','
           << csv::format_double(c.total_variation) << '\n';
    outputs.push_back({"oracle_distribution_" + std::to_string(i) + ".csv",
                       to_csv([&](std::ostream& o) { csv::write_distribution(o, c.oracle, c.sampled); })});
    worst = std::max(worst, c.total_variation);
  }
  outputs.insert(outputs.begin(), Output{"oracle_check.csv", report.str()});
  outcome.summary = "oracle-check: worst total variation " + number(worst) + " over " +
                    std::to_string(comparisons.size()) + " parameter sets (limit " +
                    number(config.oracle_check.tv_limit) + ")";
  // The comparison is this command's purpose, so it always gates the exit code.
  if (worst >= config.oracle_check.tv_limit) {
    outcome.check_failures.push_back("total variation " + number(worst) + " exceeds limit");
    outcome.exit_code = 1;
  }
  return finish("oracle-check", config, options, std::move(outputs), "", std::move(outcome));
}

}  // namespace

CommandOutcome run_command(std::string_view command, const RunConfig& config, const CommandOptions& options) {
  if (command == "trajectory") return run_trajectory_command(config, options);
  if (command == "figure3") return run_figure3_command(config, options);
  if (command == "figure4") return run_figure4_command(config, options);
  if (command == "efficiency") return run_efficiency_command(config, options);
  if (command == "hysteresis") return run_hysteresis_command(config, options);
  if (command == "oracle-check") return run_oracle_check_command(config, options);
  throw std::invalid_argument("unknown command '" + std::string(command) + "'");
}

}  // namespace micromaser
