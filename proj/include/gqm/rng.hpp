#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gqm {

// Deterministic random source used everywhere in the library.
//
// Engine: std::mt19937_64 (Mersenne Twister, 64-bit), whose output sequence
// is fully pinned by the standard, seeded directly with the given value.
// All variate transforms are implemented here explicitly (instead of using
// std::*_distribution, whose algorithms are implementation-defined) so that
// a (seed, call sequence) pair produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Raw engine output.
  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound); unbiased via rejection. bound >= 1.
  std::uint64_t uniform_index(std::uint64_t bound) {
    const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via the Marsaglia polar method (uses only uniform(),
  // sqrt and log). The second deviate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double a, b, q;
    do {
      a = 2.0 * uniform() - 1.0;
      b = 2.0 * uniform() - 1.0;
      q = a * a + b * b;
    } while (q >= 1.0 || q == 0.0);
    const double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = b * f;
    has_spare_ = true;
    return a * f;
  }

  // Gamma(shape, scale 1), shape > 0, via Marsaglia-Tsang squeeze
  // (boosted by u^(1/shape) for shape < 1).
  double gamma(double shape) {
    if (shape < 1.0) {
      double u;
      do {
        u = uniform();
      } while (u == 0.0);
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Chi-square with dof degrees of freedom (dof > 0).
  double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derived seed for an auxiliary stream (bootstrap replicates, per-block
// simulation streams, ...). splitmix64-style mixing of (base, stream) so
// sub-streams do not trivially overlap the base + index convention used for
// simulation data seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace gqm
