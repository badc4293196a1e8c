#include "micromaser/core_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace micromaser {

std::string_view to_string(TwoAtomMode mode) {
  switch (mode) {
    case TwoAtomMode::off: return "off";
    case TwoAtomMode::phenomenological: return "phenomenological";
  }
  return "?";
}

TwoAtomMode two_atom_mode_from_string(std::string_view text) {
  if (text == "off") return TwoAtomMode::off;
  if (text == "phenomenological") return TwoAtomMode::phenomenological;
  throw std::invalid_argument("unknown two_atom_mode '" + std::string(text) + "'");
}

std::string_view to_string(JumpKind kind) {
  switch (kind) {
    case JumpKind::PhotonLoss: return "PhotonLoss";
    case JumpKind::AtomExcited: return "AtomExcited";
    case JumpKind::AtomGround: return "AtomGround";
    case JumpKind::ThermalGain: return "ThermalGain";
    case JumpKind::Injection: return "Injection";
    case JumpKind::TwoAtomScramble: return "TwoAtomScramble";
    case JumpKind::CavityReset: return "CavityReset";
  }
  return "?";
}

JumpKind jump_kind_from_string(std::string_view text) {
  for (auto kind : {JumpKind::PhotonLoss, JumpKind::AtomExcited, JumpKind::AtomGround,
                    JumpKind::ThermalGain, JumpKind::Injection, JumpKind::TwoAtomScramble,
                    JumpKind::CavityReset}) {
    if (to_string(kind) == text) return kind;
  }
  throw std::invalid_argument("unknown jump kind '" + std::string(text) + "'");
}

std::vector<std::string> validate(const SimParams& p) {
  std::vector<std::string> errors;
  auto check = [&](bool ok, const char* key, const char* what) {
    if (!ok) errors.push_back(std::string(key) + ": " + what);
  };
  check(std::isfinite(p.g) && p.g > 0.0, "g", "must be finite and > 0");
  check(std::isfinite(p.phi0) && p.phi0 > 0.0, "phi0", "must be finite and > 0");
  check(std::isfinite(p.delta_phi) && p.delta_phi >= 0.0, "delta_phi", "must be finite and >= 0");
  check(std::isfinite(p.R) && p.R >= 0.0, "R", "must be finite and >= 0");
  check(std::isfinite(p.gamma) && p.gamma >= 0.0, "gamma", "must be finite and >= 0");
  check(std::isfinite(p.n_t) && p.n_t >= 0.0, "n_t", "must be finite and >= 0");
  check(p.eta_g >= 0.0 && p.eta_g <= 1.0, "eta_g", "must lie in [0, 1]");
  check(p.eta_e >= 0.0 && p.eta_e <= 1.0, "eta_e", "must lie in [0, 1]");
  check(std::isfinite(p.r_b) && p.r_b >= 0.0, "r_b", "must be finite and >= 0");
  check(p.n_max >= 4, "n_max", "must be >= 4");
  return errors;
}

void require_valid(const SimParams& params) {
  const auto errors = validate(params);
  if (errors.empty()) return;
  std::ostringstream msg;
  msg << "invalid SimParams:";
  for (const auto& e : errors) msg << ' ' << e << ';';
  throw std::invalid_argument(msg.str());
}

double emission_probability(int n, double phi) {
  const double s = std::sin(phi * std::sqrt(static_cast<double>(n) + 1.0));
  return s * s;
}

double trapping_phase(int n, int k) {
  if (k <= 0) throw std::invalid_argument("trapping_phase: k must be >= 1");
  if (n < 0) throw std::invalid_argument("trapping_phase: n must be >= 0");
  return k * std::numbers::pi / std::sqrt(static_cast<double>(n) + 1.0);
}

StateRates rates_at(const SimParams& p, double phi, bool pump_on, int n) {
  StateRates r;
  const double nd = n;
  r.loss = p.gamma * (p.n_t + 1.0) * nd;
  r.thermal = p.gamma * p.n_t * (nd + 1.0);
  if (pump_on) {
    const double c = std::cos(phi * std::sqrt(nd + 1.0));
    const double excited = c * c;
    r.atom_excited = p.R * excited;
    // Closure: ground + excited == R exactly.
    r.atom_ground = p.R - r.atom_excited;
  }
  // The truncated top state cannot accept a photon: atoms leave it excited.
  if (n >= p.n_max) {
    r.thermal = 0.0;
    r.atom_excited += r.atom_ground;
    r.atom_ground = 0.0;
  }
  return r;
}

RateTable build_rate_table(const SimParams& params, double phi, bool pump_on) {
  RateTable table;
  table.rates.reserve(static_cast<std::size_t>(params.n_max) + 1);
  for (int n = 0; n <= params.n_max; ++n) table.rates.push_back(rates_at(params, phi, pump_on, n));
  SimParams untruncated = params;
  untruncated.n_max = params.n_max + 1;
  const StateRates top = rates_at(untruncated, phi, pump_on, params.n_max);
  if (top.thermal > 0.0) ++table.truncated_channels;
  if (top.atom_ground > 0.0) ++table.truncated_channels;
  return table;
}

}  // namespace micromaser
