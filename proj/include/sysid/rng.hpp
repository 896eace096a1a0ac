#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace sysid {

// SplitMix64 output function (Steele, Lea & Flood 2014). Used to turn
// structured seeds such as (master, n, N, trial) into well-mixed 64-bit seeds.
std::uint64_t mix64(std::uint64_t z);

// derive_seed(master, a, b, c) = mix64(mix64(mix64(mix64(master) ^ a') ^ b') ^ c')
// where x' = x + 0x9E3779B97F4A7C15. The schedule is part of the output format:
// changing it changes every Monte Carlo result.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

// Standard normal stream: std::mt19937_64 (fully specified by the standard)
// feeding the basic Box-Muller transform. Uniforms take the top 53 bits of an
// engine draw; the pair (r cos t, r sin t) is emitted cosine first.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform();

  std::mt19937_64 engine_;
  std::optional<double> cached_;
};

}  // namespace sysid
