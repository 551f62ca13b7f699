#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace covpolar {

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic generator: mt19937_64 with fixed conversions to doubles, so
// streams are bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Independent sub-stream: seed' = splitmix64(seed ^ splitmix64(stream + golden)).
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return eng_(); }
  // 53-bit uniform on [0, 1).
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Box-Muller; the second variate is cached.
  double normal();
  double exponential() { return -std::log1p(-uniform01()); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 eng_;
  double cached_ = 0;
  bool has_cached_ = false;
};

}  // namespace covpolar
