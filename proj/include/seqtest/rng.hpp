#pragma once

#include <cstdint>
#include <limits>

namespace seqtest {

// SplitMix64 run in counter mode: the i-th output is the SplitMix64 finalizer
// applied to key + i * golden_gamma. Any (key, counter) pair can be evaluated
// independently, so per-trial substreams need no coordination.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0) : key_(mix(key)) {}

  // Substream for one trial of an experiment seeded with `seed`.
  static CounterRng substream(std::uint64_t seed, std::uint64_t index) {
    return CounterRng(mix(seed ^ mix(index + kGoldenGamma)));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * kGoldenGamma); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace seqtest
