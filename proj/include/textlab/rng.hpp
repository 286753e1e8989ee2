#pragma once

#include <cstdint>
#include <vector>

namespace textlab {

// Repo-wide PRNG: xoshiro256** 1.0, seeded through SplitMix64.
// Every seeded behavior in the project (shuffles, inits, sampling, dropout)
// draws from this generator, never from std::mt19937 or rand(), so runs
// reproduce bit-for-bit across platforms and standard libraries.
//
// Substreams are derived with Rng::derive(seed, stream): mixing is the
// SplitMix64 finalizer, so (seed, 0), (seed, 1), ... are independent streams.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform in [0,1) with 53 random mantissa bits.
  double uniform();

  // Uniform integer in [0, n). n must be > 0. Unbiased (rejection sampling).
  uint64_t uniform_int(uint64_t n);

  // Standard normal via Box-Muller; generates pairs, caches the second.
  double gaussian();

  // Fisher-Yates, consumes n-1 uniform_int draws.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (size_t i = v.size() - 1; i > 0; --i) {
      size_t j = static_cast<size_t>(uniform_int(i + 1));
      std::swap(v[i], v[j]);
    }
  }

  // SplitMix64 finalizer of (seed, stream); used wherever a module needs a
  // child seed (k-means restart i, per-epoch shuffle, per-doc Gibbs stream).
  static uint64_t derive(uint64_t seed, uint64_t stream);
  static uint64_t derive(uint64_t seed, uint64_t a, uint64_t b) {
    return derive(derive(seed, a), b);
  }

 private:
  uint64_t s_[4];
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace textlab
