#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace salmix {

// Seeded generator with a fixed, portable draw discipline: every normal
// consumes exactly two uniforms (Box-Muller, cosine branch) and every
// exponential consumes one (inverse CDF). Sampling code documents its
// stream order in terms of these primitives.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Exponential with mean 1.
  double exponential() { return -std::log(uniform()); }

  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

 private:
  std::mt19937_64 eng_;
};

// splitmix64 step; used to derive independent streams for restarts,
// datasets and sweep jobs from one user seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace salmix
