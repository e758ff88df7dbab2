#pragma once

#include <array>
#include <cstdint>

namespace permstat {

/// splitmix64 finalizer; bijective 64-bit mixer used for seeding and
/// substream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// splitmix64 (Steele/Lea/Flood); only used to expand seeds.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256++ pseudorandom stream with counter-based substream derivation.
///
/// substream(seed, c) is a pure function of (seed, c). A Monte Carlo run that
/// assigns substream counter c to sample c therefore produces identical
/// results no matter how samples are partitioned across threads.
///
/// Draw accounting (each call below consumes exactly one 64-bit output):
/// next_u64, next_double, next_below, coin.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : RngStream(seed, 0) {}

  static RngStream substream(std::uint64_t seed, std::uint64_t counter) {
    return RngStream(seed, counter);
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// 53-bit uniform double in [0, 1).
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n) by 128-bit multiply-shift. Always one stream
  /// draw; bias is below n / 2^64 and far under statistical resolution.
  std::uint32_t next_below(std::uint32_t n) noexcept {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Fair coin in {0, 1} from the top bit.
  int coin() noexcept { return static_cast<int>(next_u64() >> 63); }

 private:
  RngStream(std::uint64_t seed, std::uint64_t counter) {
    SplitMix64 sm(mix64(seed) ^ mix64(counter ^ 0x94d049bb133111ebULL));
    for (auto& w : s_) w = sm.next();
  }

  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_;
};

}  // namespace permstat
