#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace micromaser {

enum class TwoAtomMode { off, phenomenological };

std::string_view to_string(TwoAtomMode mode);
TwoAtomMode two_atom_mode_from_string(std::string_view text);

// Physical and instrumental parameters. The atom-field interaction is
// expressed through the dimensionless phase phi = g * tau; g is kept only to
// recover the physical transit time.
struct SimParams {
  double g = 4.0e4;              // rad/s
  double phi0 = std::numbers::pi;
  double delta_phi = 0.0;        // standard deviation of phi
  double R = 100.0;              // atoms/s
  double gamma = 20.0;           // cavity field decay, 1/s
  double n_t = 0.0;              // thermal photon number
  double eta_g = 1.0;
  double eta_e = 1.0;
  double r_b = 0.0;              // ground-channel background clicks, 1/s
  int n_max = 20;
  TwoAtomMode two_atom_mode = TwoAtomMode::off;

  // Atom transit time through the cavity.
  double tau() const { return phi0 / g; }
};

// Returns one message per violated invariant; empty when valid.
std::vector<std::string> validate(const SimParams& params);
// Throws std::invalid_argument listing every violation.
void require_valid(const SimParams& params);

struct CavityState {
  int n = 0;
  double t = 0.0;
  bool pump_on = true;
};

enum class JumpKind : std::uint8_t {
  PhotonLoss,
  AtomExcited,
  AtomGround,
  ThermalGain,
  Injection,
  TwoAtomScramble,
  CavityReset,  // mode-cleaning pulse empties the cavity
};

std::string_view to_string(JumpKind kind);
JumpKind jump_kind_from_string(std::string_view text);

struct StateRates {
  double loss = 0.0;
  double thermal = 0.0;
  double atom_ground = 0.0;
  double atom_excited = 0.0;

  double total() const { return loss + thermal + atom_ground + atom_excited; }
};

struct RateTable {
  std::vector<StateRates> rates;   // indexed by photon number 0..n_max
  int truncated_channels = 0;      // up-going channels zeroed at n_max

  const StateRates& at(int n) const { return rates.at(static_cast<std::size_t>(n)); }
  int n_max() const { return static_cast<int>(rates.size()) - 1; }
};

// sin^2(phi * sqrt(n + 1)): probability that an excited atom leaves a photon
// behind in a cavity already holding n photons.
double emission_probability(int n, double phi);

// Phase at which n photons form a trap after k full Rabi cycles:
// k * pi / sqrt(n + 1). Throws for k <= 0 or n < 0.
double trapping_phase(int n, int k);

// Rates of the four jump channels for every photon number at a fixed phase.
StateRates rates_at(const SimParams& params, double phi, bool pump_on, int n);
RateTable build_rate_table(const SimParams& params, double phi, bool pump_on);

}  // namespace micromaser
