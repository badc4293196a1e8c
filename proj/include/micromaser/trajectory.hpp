#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "micromaser/core_model.hpp"
#include "micromaser/rng.hpp"

namespace micromaser {

struct EventRecord {
  double t = 0.0;
  JumpKind kind = JumpKind::AtomExcited;
  int n_after = 0;
  std::optional<double> phi_used;  // atom events only
  int ground_atoms = 0;            // atoms that left in |g>: 1 for AtomGround, 0..2 for scrambles
};

// Photon arrival times. Either an explicit list or a generator that is
// realized against a random stream.
class InjectionSchedule {
 public:
  enum class Kind { explicit_times, poisson, fixed_spacing, uniform_spacing };

  static InjectionSchedule at(std::vector<double> times);
  // Poisson arrivals of the given mean rate; gaps shorter than min_spacing are redrawn.
  static InjectionSchedule poisson(double rate, double min_spacing = 0.0);
  static InjectionSchedule fixed_spacing(double spacing, double first);
  // Gaps uniform in [lo, hi]; the first arrival is one gap after t = 0.
  static InjectionSchedule uniform_spacing(double lo, double hi);

  Kind kind() const { return kind_; }
  // Smallest gap the schedule can produce.
  double min_spacing() const;
  // Times in [0, t_end), strictly increasing. Explicit lists are validated here.
  std::vector<double> realize(double t_end, Rng& rng) const;
  // First `count` times, ignoring any horizon.
  std::vector<double> realize_count(std::size_t count, Rng& rng) const;

 private:
  Kind kind_ = Kind::explicit_times;
  std::vector<double> times_;
  double a_ = 0.0;
  double b_ = 0.0;
};

// phi0 + delta_phi * z with z standard normal. Exactly phi0 when delta_phi == 0.
double sample_phase(const SimParams& params, Rng& rng);

// n -> n + 1. At n_max the photon is dropped and `truncations` incremented;
// the returned record then carries the unchanged photon number.
EventRecord inject_photon(CavityState& state, const SimParams& params, long& truncations);

// True when the gap since the previous atom arrival is shorter than the transit
// time, i.e. two atoms share the cavity.
bool maybe_two_atom_event(const SimParams& params, double last_atom_gap);

// Replaces the Jaynes-Cummings outcome of a two-atom passage: each atom leaves
// in |g> or |e> with probability 1/2, weighted so that the number of photons
// deposited is uniform on {0, 1, 2}. The photon number is capped at n_max.
EventRecord apply_two_atom_scramble(CavityState& state, const SimParams& params, Rng& rng,
                                    long& truncations);

// Markov jump process on the photon number with its own random stream.
class JumpProcess {
 public:
  JumpProcess(const SimParams& params, CavityState initial, std::uint64_t seed);

  const CavityState& state() const { return state_; }
  const SimParams& params() const { return params_; }
  long truncations() const { return truncations_; }
  Rng& rng() { return rng_; }

  // Total jump rate at the current photon number and pump setting.
  double total_rate() const;
  // Exponential waiting time from the current state, +inf when quiescent.
  double draw_delay();
  // Selects and applies a jump at time t >= state().t. Requires total_rate() > 0.
  EventRecord jump_at(double t);
  // draw_delay + jump_at; nullopt when the process is quiescent.
  std::optional<EventRecord> step();

  EventRecord inject(double t);
  // Pump commands take effect for all times after t.
  void set_pump(bool on, double t);
  // Empties the cavity at time t (mode-cleaning pulse).
  EventRecord reset_to_vacuum(double t);

 private:
  SimParams params_;
  CavityState state_;
  Rng rng_;
  long truncations_ = 0;
  double last_atom_t_ = -std::numeric_limits<double>::infinity();
};

}  // namespace micromaser
