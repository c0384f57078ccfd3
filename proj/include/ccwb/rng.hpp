#pragma once

#include <cstdint>
#include <initializer_list>

namespace ccwb {

// 64-bit finalizer with full avalanche (SplitMix64 mixing function).
constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t mix64(uint64_t a, uint64_t b) { return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL)); }

// Counter-based generator: the stream is a pure function of (key, counter),
// so any (seed, row) / (seed, sample) pair can be opened independently and in
// parallel without sharing state.  SplitMix64 stream underneath.
class CounterRng {
 public:
  explicit CounterRng(uint64_t key) : key_(mix64(key)) {}

  static CounterRng keyed(std::initializer_list<uint64_t> parts) {
    uint64_t acc = 0x8000000000000001ULL;
    for (uint64_t p : parts) acc = mix64(acc, p);
    return CounterRng(acc);
  }

  uint64_t next() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = counter_ ^ key_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, bound) without modulo bias (rejection sampling).
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      uint64_t v = next();
      if (v >= threshold) return v % bound;
    }
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace ccwb
