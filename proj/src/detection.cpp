#include "micromaser/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace micromaser {

std::string_view to_string(Channel channel) {
  return channel == Channel::ground ? "ground" : "excited";
}

std::string_view to_string(ClickOrigin origin) {
  return origin == ClickOrigin::atom ? "true" : "background";
}

std::string_view to_string(ResetMode mode) {
  return mode == ResetMode::free_decay ? "free_decay" : "clean_pulse";
}

ResetMode reset_mode_from_string(std::string_view text) {
  if (text == "free_decay") return ResetMode::free_decay;
  if (text == "clean_pulse") return ResetMode::clean_pulse;
  throw std::invalid_argument("unknown reset_mode '" + std::string(text) + "'");
}

std::string_view to_string(PumpAction action) {
  switch (action) {
    case PumpAction::pump_off: return "pump_off";
    case PumpAction::pump_on: return "pump_on";
    case PumpAction::clear_cavity: return "clear_cavity";
  }
  return "?";
}

ClickSource::ClickSource(const SimParams& params, std::uint64_t seed, double t_begin)
    : eta_g_(params.eta_g),
      eta_e_(params.eta_e),
      r_b_(params.r_b),
      thinning_(child_seed(seed, 0)),
      background_(child_seed(seed, 1)),
      next_background_(std::numeric_limits<double>::infinity()) {
  if (r_b_ > 0.0) next_background_ = t_begin + background_.exponential(r_b_);
}

std::vector<ClickRecord> ClickSource::on_event(const EventRecord& event) {
  std::vector<ClickRecord> out;
  switch (event.kind) {
    case JumpKind::AtomGround:
      if (thinning_.bernoulli(eta_g_)) out.push_back({event.t, Channel::ground, ClickOrigin::atom});
      break;
    case JumpKind::AtomExcited:
      if (thinning_.bernoulli(eta_e_)) out.push_back({event.t, Channel::excited, ClickOrigin::atom});
      break;
    case JumpKind::TwoAtomScramble:
      for (int i = 0; i < event.ground_atoms; ++i)
        if (thinning_.bernoulli(eta_g_)) out.push_back({event.t, Channel::ground, ClickOrigin::atom});
      for (int i = event.ground_atoms; i < 2; ++i)
        if (thinning_.bernoulli(eta_e_)) out.push_back({event.t, Channel::excited, ClickOrigin::atom});
      break;
    default:
      break;
  }
  return out;
}

ClickRecord ClickSource::pop_background() {
  const ClickRecord click{next_background_, Channel::ground, ClickOrigin::background};
  next_background_ += background_.exponential(r_b_);
  return click;
}

std::vector<ClickRecord> clicks_from_events(std::span<const EventRecord> events, const SimParams& params,
                                            std::uint64_t seed, double t_begin, double t_end) {
  ClickSource source(params, seed, t_begin);
  std::vector<ClickRecord> out;
  for (const auto& event : events) {
    while (source.next_background() <= event.t && source.next_background() < t_end)
      out.push_back(source.pop_background());
    for (const auto& click : source.on_event(event)) out.push_back(click);
  }
  while (source.next_background() < t_end) out.push_back(source.pop_background());
  return out;
}

double windowed_rate(std::span<const ClickRecord> clicks, Channel channel, double t, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("windowed_rate: window must be > 0");
  const auto before = [](double value, const ClickRecord& c) { return value < c.t; };
  // (t - window, t]
  auto first = std::upper_bound(clicks.begin(), clicks.end(), t - window, before);
  auto last = std::upper_bound(first, clicks.end(), t, before);
  const auto count = std::count_if(first, last, [channel](const ClickRecord& c) { return c.channel == channel; });
  return static_cast<double>(count) / window;
}

ControllerConfig ControllerConfig::defaults_for(const SimParams& params, ResetMode mode) {
  ControllerConfig c;
  c.reset_mode = mode;
  if (mode == ResetMode::free_decay) {
    c.reset_duration = params.gamma > 0.0 ? 5.0 / params.gamma : 0.25;
  } else {
    c.reset_duration = 0.010;
  }
  return c;
}

std::vector<std::string> validate(const ControllerConfig& c) {
  std::vector<std::string> errors;
  if (!(std::isfinite(c.threshold) && c.threshold > 0.0)) errors.emplace_back("threshold: must be finite and > 0");
  if (!(std::isfinite(c.window) && c.window > 0.0)) errors.emplace_back("window: must be finite and > 0");
  if (!(std::isfinite(c.reset_duration) && c.reset_duration >= 0.0))
    errors.emplace_back("reset_duration: must be finite and >= 0");
  if (!(c.rearm_rate >= 0.0)) errors.emplace_back("rearm_rate: must be >= 0");
  return errors;
}

ThresholdController::ThresholdController(ControllerConfig config) : config_(config) {
  const auto errors = validate(config_);
  if (!errors.empty()) throw std::invalid_argument("invalid ControllerConfig: " + errors.front());
}

double ThresholdController::rate_at(double t) {
  while (!window_.empty() && window_.front() <= t - config_.window) window_.pop_front();
  return static_cast<double>(window_.size()) / config_.window;
}

std::vector<PumpCommand> ThresholdController::on_click(const ClickRecord& click) {
  if (click.channel != Channel::ground) return {};
  window_.push_back(click.t);
  const double rate = rate_at(click.t);
  if (!armed_) return {};
  if (inhibited_) {
    if (rate < config_.rearm_rate) inhibited_ = false;
    else return {};
  }
  if (rate < config_.threshold) return {};

  armed_ = false;
  timer_ = click.t + config_.reset_duration;
  detections_.push_back({click.t, timer_, static_cast<int>(window_.size())});
  return {{click.t, PumpAction::pump_off}};
}

std::vector<PumpCommand> ThresholdController::on_timer(double t) {
  timer_ = std::numeric_limits<double>::infinity();
  armed_ = true;
  inhibited_ = rate_at(t) >= config_.rearm_rate;
  if (config_.reset_mode == ResetMode::clean_pulse)
    return {{t, PumpAction::clear_cavity}, {t, PumpAction::pump_on}};
  return {{t, PumpAction::pump_on}};
}

std::vector<DetectionEvent> run_controller(std::span<const ClickRecord> clicks, const ControllerConfig& config) {
  ThresholdController controller(config);
  for (const auto& click : clicks) {
    while (controller.next_timer() < click.t) controller.on_timer(controller.next_timer());
    controller.on_click(click);
  }
  return controller.detections();
}

}  // namespace micromaser
