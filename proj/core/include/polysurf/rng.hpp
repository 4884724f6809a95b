#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace polysurf {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ stream with explicit seeding. Every Monte Carlo loop takes
/// one of these by reference so callers control determinism; identical seeds
/// yield identical draws on every platform (no libm-dependent distributions).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate (Box-Muller, spare cached in the stream state).
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  void fill_normal(std::span<double> out) noexcept {
    for (auto& v : out) v = normal();
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent substream from (seed, stream_id). Monte Carlo
/// sample spaces are split into fixed-size chunks whose streams come from
/// here, so results do not depend on how chunks are scheduled.
inline RngStream derive_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept {
  std::uint64_t sm = seed;
  const std::uint64_t a = splitmix64(sm);
  sm = stream_id ^ 0xD1B54A32D192ED03ULL;
  const std::uint64_t b = splitmix64(sm);
  return RngStream(a ^ (b * 0x9E3779B97F4A7C15ULL + 0x165667B19E3779F9ULL));
}

/// Number of samples per deterministic chunk in all Monte Carlo loops.
inline constexpr std::int64_t kMcChunk = 8192;

}  // namespace polysurf
