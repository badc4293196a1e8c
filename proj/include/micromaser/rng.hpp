#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace micromaser {

// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Child seed for stream `index` of a parent seed. Every trajectory, block and
// experiment index gets its own child; nested splitting composes.
constexpr std::uint64_t child_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

// Portable random stream. std::mt19937_64 output is fully specified by the
// standard; the standard distributions are not, so every variate here is
// built from raw engine output by explicit formulas.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }

  // Inverse-CDF exponential variate.
  double exponential(double rate) { return -std::log(uniform_open_low()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, count).
  std::uint64_t below(std::uint64_t count) {
    // Lemire-style rejection keeps the draw exactly uniform.
    const std::uint64_t limit = (0 - count) % count;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x < limit);
    return x % count;
  }

  // Standard normal via Box-Muller (one output per call).
  double normal() {
    const double u1 = uniform_open_low();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace micromaser
