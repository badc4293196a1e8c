#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <string_view>
#include <vector>

#include "micromaser/simulation.hpp"

namespace micromaser {

// serial is the reference; parallel must produce identical results.
enum class Execution { serial, parallel };

std::string_view to_string(Execution execution);
int worker_threads();

// Calls fn(i) for i in [0, count). Each index must write only to its own
// output slot. The first exception (lowest index) is rethrown after the loop.
template <class Fn>
void for_each_index(std::size_t count, Execution execution, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::int64_t>(count);
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// `count` independent trajectories; trajectory i uses child_seed(seed, i).
std::vector<TrajectoryResult> run_batch(const SimParams& params, const InjectionSchedule& schedule, double t_end,
                                        std::uint64_t seed, std::size_t count, const TrajectoryOptions& options,
                                        Execution execution);

// Time-weighted photon-number occupation after `n_events` jumps of a free
// process (no injections, pump on), discarding the first `burn_in` jumps.
std::vector<double> sampled_occupation(const SimParams& params, std::uint64_t n_events, std::uint64_t burn_in,
                                       std::uint64_t seed, int initial_n = 0);

// The same estimate split over `chains` independent chains (chain i seeded
// with child_seed(seed, i), 1% burn-in each); occupation times are pooled.
std::vector<double> sampled_occupation_chains(const SimParams& params, std::uint64_t n_events, std::size_t chains,
                                              std::uint64_t seed, Execution execution);

}  // namespace micromaser
