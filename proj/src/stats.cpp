#include "micromaser/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace micromaser {

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  if (successes < 0 || successes > trials) throw std::invalid_argument("wilson_interval: successes out of range");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double poisson_tail(double mean, int k) {
  if (k <= 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  // 1 - P(N <= k - 1)
  double term = std::exp(-mean);
  double cdf = term;
  for (int i = 1; i < k; ++i) {
    term *= mean / i;
    cdf += term;
  }
  return std::max(0.0, 1.0 - cdf);
}

double poisson_trigger_rate(double rate, double window, int count) {
  return rate * poisson_tail(rate * window, count - 1);
}

int clicks_needed(double threshold, double window) {
  // Guard against threshold * window landing a hair above an integer.
  const double exact = threshold * window;
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) < 1e-9) return static_cast<int>(rounded);
  return static_cast<int>(std::ceil(exact));
}

}  // namespace micromaser
