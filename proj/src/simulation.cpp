#include "micromaser/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace micromaser {

TrajectorySeeds TrajectorySeeds::from(std::uint64_t seed) {
  return {child_seed(seed, 0), child_seed(seed, 1), child_seed(seed, 2)};
}

TrajectoryResult run_trajectory(const SimParams& params, const InjectionSchedule& schedule, double t_end,
                                std::uint64_t seed, const TrajectoryOptions& options) {
  if (!(t_end > 0.0)) throw std::invalid_argument("run_trajectory: t_end must be > 0");
  Rng schedule_rng(TrajectorySeeds::from(seed).schedule);
  return run_trajectory_at(params, schedule.realize(t_end, schedule_rng), t_end, seed, options);
}

TrajectoryResult run_trajectory_at(const SimParams& params, const std::vector<double>& injection_times,
                                   double t_end, std::uint64_t seed, const TrajectoryOptions& options) {
  if (!(t_end > 0.0)) throw std::invalid_argument("run_trajectory: t_end must be > 0");
  for (std::size_t i = 1; i < injection_times.size(); ++i)
    if (!(injection_times[i] > injection_times[i - 1]))
      throw std::invalid_argument("run_trajectory: injection times must be strictly increasing");

  constexpr double kNever = std::numeric_limits<double>::infinity();
  const auto seeds = TrajectorySeeds::from(seed);
  JumpProcess process(params, options.initial, seeds.jumps);
  ClickSource detector(params, seeds.clicks, options.initial.t);
  std::optional<ThresholdController> controller;
  if (options.controller) controller.emplace(*options.controller);

  TrajectoryResult out;
  out.t_end = t_end;
  if (controller && controller->config().threshold <= params.r_b) {
    std::ostringstream msg;
    msg << "threshold " << controller->config().threshold << "/s does not exceed the mean background rate "
        << params.r_b << "/s";
    out.warnings.push_back(msg.str());
  }

  auto apply = [&](const std::vector<PumpCommand>& commands) {
    for (const auto& command : commands) {
      out.pump_log.push_back(command);
      switch (command.action) {
        case PumpAction::pump_off: process.set_pump(false, command.t); break;
        case PumpAction::pump_on: process.set_pump(true, command.t); break;
        case PumpAction::clear_cavity: out.events.push_back(process.reset_to_vacuum(command.t)); break;
      }
    }
  };
  auto deliver = [&](const ClickRecord& click) {
    out.clicks.push_back(click);
    if (controller) apply(controller->on_click(click));
  };

  auto next_injection = injection_times.begin();
  while (next_injection != injection_times.end() && *next_injection < options.initial.t) ++next_injection;
  double t = options.initial.t;

  for (;;) {
    const double t_jump = t + process.draw_delay();
    const double t_inject = next_injection != injection_times.end() ? *next_injection : kNever;
    const double t_background = detector.next_background();
    const double t_timer = controller ? controller->next_timer() : kNever;
    const double t_external = std::min({t_inject, t_background, t_timer});
    const double t_next = std::min(t_jump, t_external);
    if (!(t_next < t_end)) break;

    if (t_jump < t_external) {
      const EventRecord event = process.jump_at(t_jump);
      out.events.push_back(event);
      for (const auto& click : detector.on_event(event)) deliver(click);
    } else if (t_background <= t_inject && t_background <= t_timer) {
      deliver(detector.pop_background());
    } else if (t_timer < t_inject) {
      apply(controller->on_timer(t_timer));
    } else {
      out.injection_armed.push_back(!controller || controller->armed());
      out.events.push_back(process.inject(t_inject));
      ++next_injection;
    }
    // Any undelivered candidate jump is discarded; the exponential clock is
    // memoryless, so redrawing from the new state is exact.
    t = t_next;
  }

  if (controller) out.detections = controller->detections();
  out.truncations = process.truncations();
  if (out.truncations > 0) {
    std::ostringstream msg;
    msg << out.truncations << " up-going transitions dropped at n_max=" << params.n_max;
    out.warnings.push_back(msg.str());
  }
  return out;
}

std::vector<double> occupation_histogram(const std::vector<EventRecord>& events, int initial_n, int n_max,
                                         double t_begin, double t_end) {
  std::vector<double> hist(static_cast<std::size_t>(n_max) + 1, 0.0);
  int n = initial_n;
  double last = t_begin;
  for (const auto& e : events) {
    if (e.t >= t_end) break;
    if (e.t > last) {
      hist[static_cast<std::size_t>(n)] += e.t - last;
      last = e.t;
    }
    n = e.n_after;
  }
  if (t_end > last) hist[static_cast<std::size_t>(n)] += t_end - last;
  double total = 0.0;
  for (double h : hist) total += h;
  if (total > 0.0)
    for (double& h : hist) h /= total;
  return hist;
}

}  // namespace micromaser
