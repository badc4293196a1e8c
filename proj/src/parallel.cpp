#include "micromaser/parallel.hpp"

#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace micromaser {

std::string_view to_string(Execution execution) {
  return execution == Execution::serial ? "serial" : "parallel";
}

int worker_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<TrajectoryResult> run_batch(const SimParams& params, const InjectionSchedule& schedule, double t_end,
                                        std::uint64_t seed, std::size_t count, const TrajectoryOptions& options,
                                        Execution execution) {
  std::vector<TrajectoryResult> results(count);
  for_each_index(count, execution, [&](std::size_t i) {
    results[i] = run_trajectory(params, schedule, t_end, child_seed(seed, i), options);
  });
  return results;
}

namespace {

std::vector<double> occupation_time(const SimParams& params, std::uint64_t n_events, std::uint64_t burn_in,
                                    std::uint64_t seed, int initial_n) {
  JumpProcess process(params, CavityState{initial_n, 0.0, true}, seed);
  std::vector<double> time(static_cast<std::size_t>(params.n_max) + 1, 0.0);
  for (std::uint64_t i = 0; i < burn_in; ++i)
    if (!process.step()) return time;
  for (std::uint64_t i = 0; i < n_events; ++i) {
    const int n = process.state().n;
    const double t = process.state().t;
    if (!process.step()) break;
    time[static_cast<std::size_t>(n)] += process.state().t - t;
  }
  return time;
}

std::vector<double> normalized(std::vector<double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total > 0.0)
    for (double& x : v) x /= total;
  return v;
}

}  // namespace

std::vector<double> sampled_occupation(const SimParams& params, std::uint64_t n_events, std::uint64_t burn_in,
                                       std::uint64_t seed, int initial_n) {
  return normalized(occupation_time(params, n_events, burn_in, seed, initial_n));
}

std::vector<double> sampled_occupation_chains(const SimParams& params, std::uint64_t n_events, std::size_t chains,
                                              std::uint64_t seed, Execution execution) {
  std::vector<std::vector<double>> parts(chains);
  const std::uint64_t per_chain = n_events / chains;
  const std::uint64_t burn_in = per_chain / 100;
  for_each_index(chains, execution, [&](std::size_t i) {
    parts[i] = occupation_time(params, per_chain, burn_in, child_seed(seed, i), 0);
  });
  std::vector<double> total(static_cast<std::size_t>(params.n_max) + 1, 0.0);
  for (const auto& part : parts)
    for (std::size_t n = 0; n < total.size(); ++n) total[n] += part[n];
  return normalized(total);
}

}  // namespace micromaser
