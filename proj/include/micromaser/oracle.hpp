#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "micromaser/core_model.hpp"

namespace micromaser {

// E[sin^2(phi * sqrt(n + 1))] for phi ~ Normal(phi0, delta_phi), closed form
// 1/2 * (1 - cos(2 phi0 sqrt(n+1)) * exp(-2 delta_phi^2 (n+1))).
double averaged_emission_probability(int n, double phi0, double delta_phi);

// Birth-death generator over photon number 0..n_max with the phase spread
// averaged out. Row n holds the rates out of state n.
struct GeneratorMatrix {
  SimParams params;
  bool pump_on = true;
  Eigen::MatrixXd q;

  int n_max() const { return static_cast<int>(q.rows()) - 1; }
  double up(int n) const { return n < n_max() ? q(n, n + 1) : 0.0; }
  double down(int n) const { return n > 0 ? q(n, n - 1) : 0.0; }
  // Rate of atoms leaving in |g> from state n (zero at the truncation row).
  double ground_atom_rate(int n) const;
  double excited_atom_rate(int n) const;
};

GeneratorMatrix build_generator(const SimParams& params, bool pump_on);

struct StationaryResult {
  std::vector<double> probability;
  double ground_atom_rate = 0.0;     // atoms/s leaving in |g>
  double ground_click_rate = 0.0;    // eta_g * ground_atom_rate + r_b
  double excited_click_rate = 0.0;   // eta_e * excited atom rate
  double dominance_gap = 0.0;        // |second eigenvalue| (steady state) or decay rate (quasi-stationary)
  double residual = 0.0;             // max-norm of pi * Q on the solved support
};

// Raised when the chain has more than one closed class and no support is declared.
class ReducibleChainError : public std::runtime_error {
 public:
  ReducibleChainError(const std::string& what, std::vector<std::vector<int>> classes)
      : std::runtime_error(what), closed_classes(std::move(classes)) {}
  std::vector<std::vector<int>> closed_classes;
};

// Closed communicating classes of the generator, each sorted ascending.
std::vector<std::vector<int>> closed_classes(const GeneratorMatrix& gen);

// Stationary distribution by dense solve with a normalization row. With a
// single closed class the solve runs on that class and transient states get
// zero mass. `support`, when given, must be a closed set and is used instead.
StationaryResult steady_state(const GeneratorMatrix& gen, const std::optional<std::vector<int>>& support = {});

struct QuasiStationaryOptions {
  int max_iterations = 2'000'000;
  double tolerance = 1e-14;
};

// Leading left eigenvector of the generator restricted to the complement of
// `excluded`, by shifted power iteration. Throws std::runtime_error if the
// iteration cap is hit before convergence.
StationaryResult quasi_stationary(const GeneratorMatrix& gen, const std::vector<int>& excluded,
                                  const QuasiStationaryOptions& options = {});

// p(t) = p(0) exp(Q t) by uniformization.
std::vector<double> evolve(const GeneratorMatrix& gen, std::vector<double> p, double t);

// Ground-atom and click rates of an arbitrary occupation distribution.
StationaryResult rates_of(const GeneratorMatrix& gen, std::vector<double> probability);

enum class SweepBranch { up, down };
std::string_view to_string(SweepBranch branch);

struct HysteresisPoint {
  double R = 0.0;
  SweepBranch branch = SweepBranch::up;
  double ground_atom_rate = 0.0;
  double vacuum_probability = 0.0;
  double mean_photons = 0.0;
};

struct HysteresisOptions {
  double dwell = 0.0;          // per sweep point; 0 selects 10 / gamma
  bool kick_at_top = true;     // add one photon before the down sweep
};

// Sweeps R through `R_values` (ascending) from the vacuum and then back down,
// carrying the occupation distribution from point to point and holding each
// R for the dwell time.
std::vector<HysteresisPoint> hysteresis_sweep(const SimParams& params, const std::vector<double>& R_values,
                                              const HysteresisOptions& options = {});

struct BistableWindow {
  double R_low = 0.0;
  double R_high = 0.0;
};

// R range over which the down branch exceeds the up branch by more than
// `relative_tolerance * R`; nullopt when the branches coincide everywhere.
std::optional<BistableWindow> bistable_window(const std::vector<HysteresisPoint>& sweep,
                                              double relative_tolerance = 0.01);

}  // namespace micromaser
