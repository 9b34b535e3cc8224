#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace daa {

// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic RNG. mt19937_64 is fully specified by the standard, and the
// distributions below are implemented by hand so that sampled sequences are
// identical across standard-library implementations and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Child stream `index` of a master seed. Splitting rule:
  //   seed_i = mix64(master ^ mix64(index + 1))
  // Batch code derives one child per work item so results are independent of
  // worker count and iteration order.
  static Rng child(std::uint64_t master, std::uint64_t index) {
    return Rng(mix64(master ^ mix64(index + 1)));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe to feed into log().
  double uniform_pos() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, size). size must be > 0; modulo bias is below
  // 2^-53 for the small sizes used here.
  std::uint64_t uniform_index(std::uint64_t size) { return eng_() % size; }

  // Box-Muller without caching the second variate: always two draws.
  double normal(double mean, double stddev) {
    constexpr double two_pi = 6.283185307179586476925287;
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // Gamma with integer shape as a sum of exponentials (exact for shape 2, 3).
  double gamma_int(int shape, double scale) {
    double acc = 0.0;
    for (int i = 0; i < shape; ++i) acc -= std::log(uniform_pos());
    return scale * acc;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace daa
