// Deterministic 64-bit random stream. Every randomized routine in this
// library draws from an explicit RandomSource, never from ambient entropy,
// so any run is replayable from its seed on any platform.
#pragma once

#include <cstdint>

namespace privmst {

// splitmix64: the state advances by the golden-ratio increment and the
// output is the finalizer of the new state. Period 2^64.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1); rejects the exact-zero draw.
  double next_unit_open() {
    for (;;) {
      double f = next_unit();
      if (f != 0.0) return f;
    }
  }

  // Unbiased integer in [0, n), n >= 1, by rejection on the low residue.
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Independent stream for one trial: seeded with seed ^ trial_index.
  // Distinct indices give distinct seeds; the splitmix64 finalizer
  // decorrelates nearby states.
  RandomSource split(std::uint64_t trial_index) const {
    return RandomSource(seed_ ^ trial_index);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace privmst
