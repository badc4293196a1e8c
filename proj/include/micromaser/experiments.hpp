#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "micromaser/detection.hpp"
#include "micromaser/parallel.hpp"
#include "micromaser/simulation.hpp"

namespace micromaser {

struct EfficiencyPoint {
  double R = 0.0;
  TwoAtomMode two_atom_mode = TwoAtomMode::off;
  std::int64_t injected = 0;
  std::int64_t detected = 0;
  double efficiency = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_latency = 0.0;      // s, over detected injections
  std::int64_t false_triggers = 0;
  std::optional<std::string> error;  // set when the point failed inside a sweep

  double ci_half_width() const { return 0.5 * (ci_high - ci_low); }
};

struct EfficiencyOptions {
  double latency_window = 0.5;   // s after an injection in which a trigger counts
  double spacing_min = 2.0;      // injection gaps uniform in [min, max], s
  double spacing_max = 4.0;
  std::size_t block_size = 50;   // injections per independent co-simulation
  Execution execution = Execution::parallel;
};

// Scores how often a single injected photon produces a trigger. An injection
// counts as detected when the controller is armed at the arrival time and
// triggers within the latency window; triggers outside every window are false
// triggers. Injections are split into blocks run as independent trajectories
// (block b uses child_seed(seed, b)), folded in block order.
EfficiencyPoint efficiency_experiment(const SimParams& params, const ControllerConfig& config,
                                      std::int64_t n_injections, std::uint64_t seed,
                                      const EfficiencyOptions& options = {});

// One point per (mode, R): the off curve first, then the phenomenological
// curve. Both modes share child_seed(seed, i) at R_list[i], so the curves are
// paired. Failures are reported per point.
std::vector<EfficiencyPoint> efficiency_curve(const SimParams& params, const ControllerConfig& config,
                                              const std::vector<double>& R_list, std::int64_t n_injections,
                                              std::uint64_t seed, const EfficiencyOptions& options = {});

// Probability that an injected photon produces at least one emission before it
// is lost, from the phase-averaged rates at n = 1. No detector can beat it
// when there is no background.
double first_emission_bound(const SimParams& params);

struct RatePoint {
  double t = 0.0;
  int n = 0;
  double ground_rate = 0.0;
};

struct Figure3Options {
  double injection_time = 0.5;
  double t_end = 2.0;
  double rate_window = 0.25;
  double sample_step = 0.01;
};

struct Figure3Result {
  TrajectoryResult trajectory;
  std::vector<RatePoint> series;
  double injection_time = 0.0;
  double peak_rate = 0.0;          // max windowed ground rate after the injection
  double pre_injection_peak = 0.0;
  int max_photons_before_return = 0;
  bool confined = true;            // n stayed in {1,2,3} until the first return to 0
  double excursion_time = 0.0;     // time from injection to first return to 0 (or t_end)
  std::int64_t excursion_ground_clicks = 0;
};

Figure3Result figure3_run(const SimParams& params, std::uint64_t seed, const Figure3Options& options = {});

struct Figure4Options {
  std::int64_t n_injections = 20;
  double latency_window = 0.5;
  double spacing_min = 2.0;
  double spacing_max = 4.0;
};

struct Figure4Result {
  TrajectoryResult trajectory;
  std::vector<double> injection_times;
  std::vector<int> detections_per_injection;  // triggers inside each attribution window
  std::int64_t false_triggers = 0;
  double false_trigger_exposure = 0.0;       // armed time outside attribution windows, s

  std::int64_t injections_with_exactly_one() const;
};

Figure4Result figure4_run(const SimParams& params, const ControllerConfig& config, std::uint64_t seed,
                          const Figure4Options& options = {});

// Oracle rate of background-only triggers for a controller while armed.
double background_trigger_rate(const SimParams& params, const ControllerConfig& config);

}  // namespace micromaser
