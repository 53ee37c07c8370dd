#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qdibp {

/// Deterministic random stream. All randomness in the project flows through
/// this wrapper; bounded draws use rejection sampling instead of
/// std::uniform_int_distribution, whose output is implementation-defined, so
/// seeded runs reproduce bit-for-bit on any conforming standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Stream derived from a master seed and a stable label. Actors and
  /// subsystems each get their own stream, so replay does not depend on the
  /// order in which they happen to draw.
  static Rng derive(std::uint64_t master, std::string_view label) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : label) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return Rng(mix(master ^ h));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection from the top of the range keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

  bool bit() {
    if (bits_left_ == 0) {
      bit_buf_ = next_u64();
      bits_left_ = 64;
    }
    bool b = bit_buf_ & 1;
    bit_buf_ >>= 1;
    --bits_left_;
    return b;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer; decorrelates nearby seeds and label hashes.
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  std::uint64_t bit_buf_ = 0;
  int bits_left_ = 0;
};

}  // namespace qdibp
