#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dialseg {

// Deterministic randomness used everywhere seeds appear.  The engine is
// std::mt19937_64 (fully specified by the standard) and all value mappings
// below are hand-rolled, so streams are reproducible across platforms and
// standard-library implementations.  FORMAT.md documents the exact scheme.

/// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream `tag` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n) {
    auto v = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return v < n ? v : n - 1;
  }

  bool chance(double p) { return uniform01() < p; }

  /// Index sampled from nonnegative weights (need not sum to one).
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dialseg
