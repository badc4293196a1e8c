#include "micromaser/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace micromaser {

InjectionSchedule InjectionSchedule::at(std::vector<double> times) {
  InjectionSchedule s;
  s.kind_ = Kind::explicit_times;
  s.times_ = std::move(times);
  return s;
}

InjectionSchedule InjectionSchedule::poisson(double rate, double min_spacing) {
  if (!(rate > 0.0)) throw std::invalid_argument("poisson schedule: rate must be > 0");
  if (min_spacing < 0.0) throw std::invalid_argument("poisson schedule: min_spacing must be >= 0");
  InjectionSchedule s;
  s.kind_ = Kind::poisson;
  s.a_ = rate;
  s.b_ = min_spacing;
  return s;
}

InjectionSchedule InjectionSchedule::fixed_spacing(double spacing, double first) {
  if (!(spacing > 0.0)) throw std::invalid_argument("fixed schedule: spacing must be > 0");
  if (first < 0.0) throw std::invalid_argument("fixed schedule: first time must be >= 0");
  InjectionSchedule s;
  s.kind_ = Kind::fixed_spacing;
  s.a_ = spacing;
  s.b_ = first;
  return s;
}

InjectionSchedule InjectionSchedule::uniform_spacing(double lo, double hi) {
  if (!(lo > 0.0) || hi < lo) throw std::invalid_argument("uniform schedule: need 0 < lo <= hi");
  InjectionSchedule s;
  s.kind_ = Kind::uniform_spacing;
  s.a_ = lo;
  s.b_ = hi;
  return s;
}

double InjectionSchedule::min_spacing() const {
  switch (kind_) {
    case Kind::explicit_times: {
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < times_.size(); ++i) gap = std::min(gap, times_[i] - times_[i - 1]);
      return gap;
    }
    case Kind::poisson: return b_;
    case Kind::fixed_spacing: return a_;
    case Kind::uniform_spacing: return a_;
  }
  return 0.0;
}

namespace {

template <class Stop>
std::vector<double> generate(const InjectionSchedule& s, double a, double b,
                             const std::vector<double>& explicit_times, Rng& rng, Stop stop) {
  std::vector<double> out;
  switch (s.kind()) {
    case InjectionSchedule::Kind::explicit_times:
      for (std::size_t i = 0; i < explicit_times.size(); ++i) {
        const double t = explicit_times[i];
        if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("injection times must be finite and >= 0");
        if (i > 0 && !(t > explicit_times[i - 1]))
          throw std::invalid_argument("injection times must be strictly increasing");
        if (stop(t, out.size())) break;
        out.push_back(t);
      }
      break;
    case InjectionSchedule::Kind::poisson: {
      double t = 0.0;
      for (;;) {
        double gap;
        do {
          gap = rng.exponential(a);
        } while (gap < b || gap <= 0.0);
        t += gap;
        if (stop(t, out.size())) break;
        out.push_back(t);
      }
      break;
    }
    case InjectionSchedule::Kind::fixed_spacing:
      for (double t = b;; t += a) {
        if (stop(t, out.size())) break;
        out.push_back(t);
      }
      break;
    case InjectionSchedule::Kind::uniform_spacing: {
      double t = 0.0;
      for (;;) {
        t += a + (b - a) * rng.uniform();
        if (stop(t, out.size())) break;
        out.push_back(t);
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<double> InjectionSchedule::realize(double t_end, Rng& rng) const {
  return generate(*this, a_, b_, times_, rng, [t_end](double t, std::size_t) { return t >= t_end; });
}

std::vector<double> InjectionSchedule::realize_count(std::size_t count, Rng& rng) const {
  return generate(*this, a_, b_, times_, rng, [count](double, std::size_t k) { return k >= count; });
}

double sample_phase(const SimParams& params, Rng& rng) {
  if (params.delta_phi == 0.0) return params.phi0;
  return params.phi0 + params.delta_phi * rng.normal();
}

EventRecord inject_photon(CavityState& state, const SimParams& params, long& truncations) {
  if (state.n < params.n_max) {
    ++state.n;
  } else {
    ++truncations;
  }
  return EventRecord{state.t, JumpKind::Injection, state.n, std::nullopt, 0};
}

bool maybe_two_atom_event(const SimParams& params, double last_atom_gap) {
  return last_atom_gap < params.tau();
}

EventRecord apply_two_atom_scramble(CavityState& state, const SimParams& params, Rng& rng,
                                    long& truncations) {
  const int requested = static_cast<int>(rng.below(3));
  const int room = params.n_max - state.n;
  const int deposited = std::min(requested, room);
  truncations += requested - deposited;
  state.n += deposited;
  return EventRecord{state.t, JumpKind::TwoAtomScramble, state.n, std::nullopt, deposited};
}

JumpProcess::JumpProcess(const SimParams& params, CavityState initial, std::uint64_t seed)
    : params_(params), state_(initial), rng_(seed) {
  require_valid(params_);
  if (state_.n < 0 || state_.n > params_.n_max)
    throw std::invalid_argument("initial photon number outside [0, n_max]");
}

double JumpProcess::total_rate() const {
  return rates_at(params_, params_.phi0, state_.pump_on, state_.n).total();
}

double JumpProcess::draw_delay() {
  const double rate = total_rate();
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return rng_.exponential(rate);
}

EventRecord JumpProcess::jump_at(double t) {
  const StateRates r = rates_at(params_, params_.phi0, state_.pump_on, state_.n);
  const double atoms = r.atom_ground + r.atom_excited;
  const double x = rng_.uniform() * (r.loss + r.thermal + atoms);
  state_.t = t;

  if (x < r.loss) {
    --state_.n;
    return EventRecord{t, JumpKind::PhotonLoss, state_.n, std::nullopt, 0};
  }
  if (x < r.loss + r.thermal) {
    ++state_.n;
    return EventRecord{t, JumpKind::ThermalGain, state_.n, std::nullopt, 0};
  }

  const double gap = t - last_atom_t_;
  last_atom_t_ = t;
  if (params_.two_atom_mode == TwoAtomMode::phenomenological && maybe_two_atom_event(params_, gap)) {
    return apply_two_atom_scramble(state_, params_, rng_, truncations_);
  }

  const double phi = sample_phase(params_, rng_);
  const double p_emit = emission_probability(state_.n, phi);
  // u is drawn from (0, 1] so that an emission probability of a few ulp at an
  // exact trap can never fire.
  if (rng_.uniform_open_low() <= p_emit) {
    if (state_.n < params_.n_max) {
      ++state_.n;
      return EventRecord{t, JumpKind::AtomGround, state_.n, phi, 1};
    }
    ++truncations_;
  }
  return EventRecord{t, JumpKind::AtomExcited, state_.n, phi, 0};
}

std::optional<EventRecord> JumpProcess::step() {
  const double delay = draw_delay();
  if (!std::isfinite(delay)) return std::nullopt;
  return jump_at(state_.t + delay);
}

EventRecord JumpProcess::inject(double t) {
  state_.t = t;
  return inject_photon(state_, params_, truncations_);
}

void JumpProcess::set_pump(bool on, double t) {
  state_.t = t;
  state_.pump_on = on;
}

EventRecord JumpProcess::reset_to_vacuum(double t) {
  state_.t = t;
  state_.n = 0;
  return EventRecord{t, JumpKind::CavityReset, 0, std::nullopt, 0};
}

}  // namespace micromaser
