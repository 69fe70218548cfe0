#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>

namespace gridwalk {

/// splitmix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words,
/// used for seed derivation so distinct inputs can never collide.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-episode seed for a sweep cell. Packs (agents, grid_dim, run_index)
/// injectively into one word, whitens it with splitmix64 and xors the base
/// seed. Every stage is injective for fixed base_seed, so all episodes of a
/// sweep get distinct seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, int agents,
                                    int grid_dim, int run_index) {
  const std::uint64_t packed = (static_cast<std::uint64_t>(agents) << 48) |
                               (static_cast<std::uint64_t>(grid_dim) << 32) |
                               static_cast<std::uint64_t>(run_index);
  return base_seed ^ splitmix64(packed);
}

/// Deterministic random stream: a std::mt19937_64 engine behind portable
/// draw helpers. The engine is fully specified by the standard, and the
/// value mappings below avoid <random> distributions (whose algorithms are
/// implementation-defined), so a seed reproduces the same sequence on any
/// conforming toolchain.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in {0, ..., n-1}. n must be >= 1.
  int uniform_index(int n) {
    const int k = static_cast<int>(uniform01() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  /// Gaussian draw via the Box-Muller transform. Consumes exactly two
  /// uniforms per call, which keeps replay alignment trivial.
  double gaussian(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1]: keeps log() finite
    const double u2 = uniform01();
    const double z =
        std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gridwalk
