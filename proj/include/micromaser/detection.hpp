#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "micromaser/core_model.hpp"
#include "micromaser/rng.hpp"
#include "micromaser/trajectory.hpp"

namespace micromaser {

enum class Channel : std::uint8_t { ground, excited };
enum class ClickOrigin : std::uint8_t { atom, background };

std::string_view to_string(Channel channel);
std::string_view to_string(ClickOrigin origin);

struct ClickRecord {
  double t = 0.0;
  Channel channel = Channel::ground;
  ClickOrigin origin = ClickOrigin::atom;  // diagnostics only; the controller never reads it
};

// Detector response to atom exits plus the ground-channel background. Holds
// two independent streams: one thins atom events, one generates background.
class ClickSource {
 public:
  ClickSource(const SimParams& params, std::uint64_t seed, double t_begin = 0.0);

  // Clicks caused by one event (empty for non-atom events), in channel order.
  std::vector<ClickRecord> on_event(const EventRecord& event);

  // Next background click time; +inf when r_b == 0.
  double next_background() const { return next_background_; }
  ClickRecord pop_background();

 private:
  double eta_g_;
  double eta_e_;
  double r_b_;
  Rng thinning_;
  Rng background_;
  double next_background_;
};

// Offline detector chain over a finished event list. Background covers
// [t_begin, t_end). Output is time ordered.
std::vector<ClickRecord> clicks_from_events(std::span<const EventRecord> events, const SimParams& params,
                                            std::uint64_t seed, double t_begin, double t_end);

// Clicks on `channel` inside (t - window, t], divided by window.
// `clicks` must be time ordered.
double windowed_rate(std::span<const ClickRecord> clicks, Channel channel, double t, double window);

enum class ResetMode { free_decay, clean_pulse };
std::string_view to_string(ResetMode mode);
ResetMode reset_mode_from_string(std::string_view text);

struct ControllerConfig {
  double threshold = 20.0;     // 1/s
  double window = 0.25;        // s
  ResetMode reset_mode = ResetMode::free_decay;
  double reset_duration = 0.25;  // pump-off interval (free_decay) or pulse length (clean_pulse), s
  // After re-arming, triggering stays inhibited until the windowed rate has been
  // seen below this level. Infinity disables the inhibit.
  double rearm_rate = std::numeric_limits<double>::infinity();

  // Defaults tied to the cavity: free decay for 5/gamma, or a 10 ms cleaning pulse.
  static ControllerConfig defaults_for(const SimParams& params, ResetMode mode = ResetMode::free_decay);
};

std::vector<std::string> validate(const ControllerConfig& config);

struct DetectionEvent {
  double t_trigger = 0.0;
  double t_rearmed = 0.0;
  int window_count = 0;

  double dead_time() const { return t_rearmed - t_trigger; }
};

enum class PumpAction : std::uint8_t { pump_off, pump_on, clear_cavity };
std::string_view to_string(PumpAction action);

struct PumpCommand {
  double t = 0.0;
  PumpAction action = PumpAction::pump_off;
};

// Threshold trigger with reset. Consumes ground clicks and timer expiries in
// time order and emits pump commands; output depends only on click times.
class ThresholdController {
 public:
  explicit ThresholdController(ControllerConfig config);

  const ControllerConfig& config() const { return config_; }
  bool armed() const { return armed_ && !inhibited_; }
  bool disarmed() const { return !armed_; }

  // Pending reset timer, +inf if none.
  double next_timer() const { return timer_; }

  std::vector<PumpCommand> on_click(const ClickRecord& click);
  std::vector<PumpCommand> on_timer(double t);

  const std::vector<DetectionEvent>& detections() const { return detections_; }

 private:
  double rate_at(double t);

  ControllerConfig config_;
  std::deque<double> window_;  // ground click times in the trailing window
  bool armed_ = true;
  bool inhibited_ = false;
  double timer_ = std::numeric_limits<double>::infinity();
  std::vector<DetectionEvent> detections_;
};

// Offline replay of the controller over a recorded click stream.
std::vector<DetectionEvent> run_controller(std::span<const ClickRecord> clicks, const ControllerConfig& config);

}  // namespace micromaser
