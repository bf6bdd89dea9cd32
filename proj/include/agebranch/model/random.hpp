#pragma once

#include <cstdint>
#include <random>

namespace agebranch::model {

std::uint64_t splitmix64(std::uint64_t x);

// Stream seed for replicate `replicate` on lane `lane` (0 = branching,
// 1 = immigration). Mixing: splitmix64(splitmix64(master) ^
// (replicate * 0x9E3779B97F4A7C15 + lane)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate,
                          std::uint64_t lane);

// All variates are built from the 64-bit engine output with in-repo
// transforms so that a seed reproduces the same draws on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0,1], 53-bit resolution.
  double uniform_open_closed() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }
  // Uniform on [0,1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double exponential(double rate);
  double normal();
  // Gamma(shape, scale = 1), Marsaglia-Tsang.
  double gamma(double shape);
  // Poisson by sequential inversion; mean must be <= 700.
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace agebranch::model
