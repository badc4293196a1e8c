#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "micromaser/detection.hpp"
#include "micromaser/trajectory.hpp"

namespace micromaser {

struct TrajectoryResult {
  std::vector<EventRecord> events;
  std::vector<ClickRecord> clicks;
  std::vector<DetectionEvent> detections;
  std::vector<PumpCommand> pump_log;
  // Controller armed at each injection (all true without a controller).
  std::vector<bool> injection_armed;
  long truncations = 0;
  std::vector<std::string> warnings;
  double t_end = 0.0;
};

struct TrajectoryOptions {
  CavityState initial{};
  std::optional<ControllerConfig> controller;
};

// Seeds derived from the trajectory seed: jump process, detector, schedule.
struct TrajectorySeeds {
  std::uint64_t jumps;
  std::uint64_t clicks;
  std::uint64_t schedule;
  static TrajectorySeeds from(std::uint64_t seed);
};

// Single-threaded co-simulation of the jump process, the injection schedule,
// the detector chain and (optionally) the threshold controller. A pump command
// issued at t changes the jump rates for all times after t. Deterministic in
// (params, schedule, t_end, seed, options).
TrajectoryResult run_trajectory(const SimParams& params, const InjectionSchedule& schedule, double t_end,
                                std::uint64_t seed, const TrajectoryOptions& options = {});

// Same, with injection times already realized.
TrajectoryResult run_trajectory_at(const SimParams& params, const std::vector<double>& injection_times,
                                   double t_end, std::uint64_t seed, const TrajectoryOptions& options = {});

// Photon number just after each event, starting from `initial_n`; the
// time-weighted histogram over [t_begin, t_end).
std::vector<double> occupation_histogram(const std::vector<EventRecord>& events, int initial_n, int n_max,
                                         double t_begin, double t_end);

}  // namespace micromaser
