#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace rsgd {

// Deterministic RNG with a fixed published algorithm so that every seeded
// result is reproducible bit-for-bit across platforms and compilers.
//
//   seeding     splitmix64 (Steele/Lea/Flood, "Fast splittable PRNGs", 2014)
//   stream      xoshiro256** 1.0 (Blackman/Vigna, 2018)
//   doubles     (x >> 11) * 2^-53, uniform on [0, 1)
//   bounded int power-of-two mask rejection (unbiased)
//   normals     Box-Muller, two uniform draws per call, no cached state

inline uint64_t splitmix64_next(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives a child seed from a master seed and up to three stream labels by
// chaining splitmix64: s = sm64(sm64(sm64(master + a) + b) + c).
inline uint64_t mix_seed(uint64_t master, uint64_t a, uint64_t b = 0,
                         uint64_t c = 0) {
  uint64_t s = master + a;
  uint64_t v = splitmix64_next(s);
  s = v + b;
  v = splitmix64_next(s);
  s = v + c;
  return splitmix64_next(s);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with full 53-bit mantissa resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., n-1}; draws are rejected above the smallest
  // power-of-two mask covering n, which keeps the result unbiased.
  uint64_t uniform_below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    uint64_t v;
    do {
      v = next_u64() & mask;
    } while (v >= n);
    return v;
  }

  // Standard normal via Box-Muller on two fresh uniforms.
  double normal() {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  uint64_t state_[4];
};

// In-place Fisher-Yates shuffle driven by the shared stream.
template <class T>
void fisher_yates(std::vector<T>& items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.uniform_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace rsgd
