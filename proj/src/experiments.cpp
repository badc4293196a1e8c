#include "micromaser/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "micromaser/oracle.hpp"
#include "micromaser/stats.hpp"

namespace micromaser {

namespace {

struct BlockScore {
  std::int64_t injected = 0;
  std::int64_t detected = 0;
  double latency_sum = 0.0;
  std::int64_t false_triggers = 0;
};

bool in_window(double t, double start, double length) { return t > start && t <= start + length; }

BlockScore score_block(const TrajectoryResult& run, const std::vector<double>& injections, double latency) {
  BlockScore s;
  s.injected = static_cast<std::int64_t>(injections.size());
  for (std::size_t i = 0; i < injections.size(); ++i) {
    if (!run.injection_armed.at(i)) continue;
    for (const auto& d : run.detections) {
      if (in_window(d.t_trigger, injections[i], latency)) {
        ++s.detected;
        s.latency_sum += d.t_trigger - injections[i];
        break;
      }
    }
  }
  for (const auto& d : run.detections) {
    const bool attributed = std::any_of(injections.begin(), injections.end(),
                                        [&](double t) { return in_window(d.t_trigger, t, latency); });
    if (!attributed) ++s.false_triggers;
  }
  return s;
}

// Total length of the union of half-open intervals clipped to [0, t_end].
double union_length(std::vector<std::pair<double, double>> intervals, double t_end) {
  std::sort(intervals.begin(), intervals.end());
  double total = 0.0;
  double cur_lo = 0.0;
  double cur_hi = -1.0;
  for (auto [lo, hi] : intervals) {
    lo = std::clamp(lo, 0.0, t_end);
    hi = std::clamp(hi, 0.0, t_end);
    if (hi <= lo) continue;
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (cur_hi > cur_lo) total += cur_hi - cur_lo;
  return total;
}

}  // namespace

EfficiencyPoint efficiency_experiment(const SimParams& params, const ControllerConfig& config,
                                      std::int64_t n_injections, std::uint64_t seed,
                                      const EfficiencyOptions& options) {
  require_valid(params);
  if (n_injections < 100) throw std::invalid_argument("efficiency_experiment: need at least 100 injections");
  if (options.block_size == 0) throw std::invalid_argument("efficiency_experiment: block_size must be > 0");
  const double required_gap = config.reset_duration + options.latency_window;
  if (options.spacing_min < required_gap)
    throw std::invalid_argument("efficiency_experiment: injection spacing " + std::to_string(options.spacing_min) +
                                " s is shorter than dead time + latency window (" + std::to_string(required_gap) +
                                " s)");
  const auto schedule = InjectionSchedule::uniform_spacing(options.spacing_min, options.spacing_max);

  const auto total = static_cast<std::size_t>(n_injections);
  const std::size_t blocks = (total + options.block_size - 1) / options.block_size;
  std::vector<BlockScore> scores(blocks);
  TrajectoryOptions run_options;
  run_options.controller = config;

  for_each_index(blocks, options.execution, [&](std::size_t b) {
    const std::uint64_t block_seed = child_seed(seed, b);
    const std::size_t count = std::min(options.block_size, total - b * options.block_size);
    Rng schedule_rng(TrajectorySeeds::from(block_seed).schedule);
    const auto injections = schedule.realize_count(count, schedule_rng);
    const double t_end = injections.back() + options.spacing_max;
    const auto run = run_trajectory_at(params, injections, t_end, block_seed, run_options);
    scores[b] = score_block(run, injections, options.latency_window);
  });

  EfficiencyPoint point;
  point.R = params.R;
  point.two_atom_mode = params.two_atom_mode;
  double latency_sum = 0.0;
  for (const auto& s : scores) {
    point.injected += s.injected;
    point.detected += s.detected;
    point.false_triggers += s.false_triggers;
    latency_sum += s.latency_sum;
  }
  point.efficiency = static_cast<double>(point.detected) / static_cast<double>(point.injected);
  const auto ci = wilson_interval(point.detected, point.injected);
  point.ci_low = ci.low;
  point.ci_high = ci.high;
  point.mean_latency = point.detected > 0 ? latency_sum / static_cast<double>(point.detected) : 0.0;
  return point;
}

std::vector<EfficiencyPoint> efficiency_curve(const SimParams& params, const ControllerConfig& config,
                                              const std::vector<double>& R_list, std::int64_t n_injections,
                                              std::uint64_t seed, const EfficiencyOptions& options) {
  if (R_list.empty()) throw std::invalid_argument("efficiency_curve: R_list must be nonempty");
  std::vector<EfficiencyPoint> out;
  for (auto mode : {TwoAtomMode::off, TwoAtomMode::phenomenological}) {
    for (std::size_t i = 0; i < R_list.size(); ++i) {
      SimParams at = params;
      at.R = R_list[i];
      at.two_atom_mode = mode;
      try {
        out.push_back(efficiency_experiment(at, config, n_injections, child_seed(seed, i), options));
      } catch (const std::exception& e) {
        EfficiencyPoint failed;
        failed.R = at.R;
        failed.two_atom_mode = mode;
        failed.error = e.what();
        out.push_back(failed);
      }
    }
  }
  return out;
}

double first_emission_bound(const SimParams& params) {
  const double emit = params.R * averaged_emission_probability(1, params.phi0, params.delta_phi);
  const double gain = params.gamma * params.n_t * 2.0;
  const double loss = params.gamma * (params.n_t + 1.0);
  const double up = emit + gain;
  return up > 0.0 ? up / (up + loss) : 0.0;
}

Figure3Result figure3_run(const SimParams& params, std::uint64_t seed, const Figure3Options& options) {
  if (!(options.injection_time < options.t_end)) throw std::invalid_argument("figure3_run: injection after t_end");
  Figure3Result out;
  out.injection_time = options.injection_time;
  out.trajectory = run_trajectory_at(params, {options.injection_time}, options.t_end, seed);
  const auto& events = out.trajectory.events;
  const auto& clicks = out.trajectory.clicks;

  // Photon-number staircase sampled on a grid.
  std::size_t next_event = 0;
  int n = 0;
  for (double t = 0.0; t <= options.t_end + 1e-12; t += options.sample_step) {
    while (next_event < events.size() && events[next_event].t <= t) n = events[next_event++].n_after;
    out.series.push_back({t, n, windowed_rate(clicks, Channel::ground, t, options.rate_window)});
  }

  // The windowed rate only rises at clicks, so the peak is attained at one.
  for (const auto& c : clicks) {
    if (c.channel != Channel::ground) continue;
    const double r = windowed_rate(clicks, Channel::ground, c.t, options.rate_window);
    if (c.t < options.injection_time) out.pre_injection_peak = std::max(out.pre_injection_peak, r);
    else out.peak_rate = std::max(out.peak_rate, r);
  }

  double returned_at = options.t_end;
  bool injected = false;
  for (const auto& e : events) {
    if (e.kind == JumpKind::Injection) {
      injected = true;
      continue;
    }
    if (!injected) continue;
    if (e.n_after == 0) {
      returned_at = e.t;
      break;
    }
    out.max_photons_before_return = std::max(out.max_photons_before_return, e.n_after);
    if (e.n_after < 1 || e.n_after > 3) out.confined = false;
  }
  out.max_photons_before_return = std::max(out.max_photons_before_return, injected ? 1 : 0);
  out.excursion_time = returned_at - options.injection_time;
  for (const auto& c : clicks)
    if (c.channel == Channel::ground && c.origin == ClickOrigin::atom && c.t > options.injection_time &&
        c.t <= returned_at)
      ++out.excursion_ground_clicks;
  return out;
}

std::int64_t Figure4Result::injections_with_exactly_one() const {
  return std::count(detections_per_injection.begin(), detections_per_injection.end(), 1);
}

Figure4Result figure4_run(const SimParams& params, const ControllerConfig& config, std::uint64_t seed,
                          const Figure4Options& options) {
  if (options.n_injections <= 0) throw std::invalid_argument("figure4_run: need at least one injection");
  if (options.spacing_min < config.reset_duration + options.latency_window)
    throw std::invalid_argument("figure4_run: injections closer than dead time + latency window");
  Figure4Result out;
  Rng schedule_rng(TrajectorySeeds::from(seed).schedule);
  out.injection_times = InjectionSchedule::uniform_spacing(options.spacing_min, options.spacing_max)
                            .realize_count(static_cast<std::size_t>(options.n_injections), schedule_rng);
  const double t_end = out.injection_times.back() + options.spacing_max;
  TrajectoryOptions run_options;
  run_options.controller = config;
  out.trajectory = run_trajectory_at(params, out.injection_times, t_end, seed, run_options);

  std::vector<std::pair<double, double>> excluded;
  for (double t : out.injection_times) {
    int count = 0;
    for (const auto& d : out.trajectory.detections)
      if (in_window(d.t_trigger, t, options.latency_window)) ++count;
    out.detections_per_injection.push_back(count);
    excluded.emplace_back(t, t + options.latency_window);
  }
  for (const auto& d : out.trajectory.detections) {
    excluded.emplace_back(d.t_trigger, d.t_rearmed);
    const bool attributed = std::any_of(out.injection_times.begin(), out.injection_times.end(),
                                        [&](double t) { return in_window(d.t_trigger, t, options.latency_window); });
    if (!attributed) ++out.false_triggers;
  }
  out.false_trigger_exposure = t_end - union_length(std::move(excluded), t_end);
  return out;
}

double background_trigger_rate(const SimParams& params, const ControllerConfig& config) {
  return poisson_trigger_rate(params.r_b, config.window, clicks_needed(config.threshold, config.window));
}

}  // namespace micromaser
