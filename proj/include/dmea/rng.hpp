#ifndef DMEA_RNG_HPP
#define DMEA_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace dmea {

// Seedable generator with explicit, library-independent draw logic so that
// runs are reproducible bit-for-bit from a seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Derives a seed for an independent child generator.
  std::uint64_t next_seed() { return gen_(); }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n) {
    // Rejection-free modulo is fine here; n is always tiny relative to 2^64.
    return static_cast<std::size_t>(gen_() % n);
  }

  // Standard normal via Box-Muller. Stateless across calls.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dmea

#endif
