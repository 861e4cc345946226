// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace haarflow {

// Deterministic RNG keyed by (seed, stream). The engine is std::mt19937_64,
// whose output sequence is pinned by the standard; all variates are derived
// here from raw engine words, never from std::*_distribution, so the sequence
// is identical across standard libraries and runs. Distinct stream ids give
// statistically independent streams.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
        0x9e3779b9u};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe under log().
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the pair partner is cached.
  double gauss() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 2.0 * kPi * uniform();
    cached_ = r * std::sin(phi);
    has_cached_ = true;
    return r * std::cos(phi);
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t x = next_u64();
    while (x > limit) x = next_u64();
    return x % n;
  }

  // Stable mixing for sub-stream ids, e.g. per (depth index, trial index).
  static std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b,
                                     std::uint64_t c = 0) {
    std::uint64_t h = mix(a + 0x9e3779b97f4a7c15ull);
    h = mix(h ^ b);
    h = mix(h ^ c);
    return h;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace haarflow
