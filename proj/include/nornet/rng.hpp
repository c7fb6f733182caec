#pragma once

#include <cstdint>

namespace nornet {

// SplitMix64 (Steele, Lea & Flood 2014). Frozen as the project's only source
// of randomness: every stream is a pure function of its 64-bit seed, so a
// per-case seed reproduces the same draws regardless of scheduling.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return UINT64_MAX; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 bits of precision.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // True with probability p; p = 0 never fires and p = 1 always fires.
  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [lo, hi], by rejection so there is no modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>((*this)());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace nornet
