#pragma once

#include <cstdint>

namespace micromaser {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval for a binomial proportion (z = 1.96 gives 95%).
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

// P(N >= k) for N ~ Poisson(mean).
double poisson_tail(double mean, int k);

// Long-run rate of sliding-window threshold crossings on a homogeneous Poisson
// click stream of the given rate: a click fires when the trailing window
// (including itself) holds at least `count` clicks, i.e. when the other
// clicks in the preceding window number at least count - 1.
double poisson_trigger_rate(double rate, double window, int count);

// Smallest click count in a window that meets `threshold` (a rate).
int clicks_needed(double threshold, double window);

}  // namespace micromaser
