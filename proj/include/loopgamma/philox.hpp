#pragma once

// Counter-based Philox4x32-10 generator (Salmon et al., SC'11). Every draw is
// a pure function of (key, counter), which is what makes sampling
// reproducible under any parallel schedule.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace loopgamma {

struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

/// Uniform double in the open interval (0, 1) from the top 53 bits.
constexpr double uniform_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Stream tags keep unrelated uses of one seed disjoint.
enum class RngStream : std::uint32_t { path_increments = 0, auxiliary = 1 };

/// Two independent standard normals keyed by (seed, sample index, pair index).
inline std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t index,
                                         std::uint32_t pair,
                                         RngStream stream = RngStream::path_increments) noexcept {
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                            static_cast<std::uint32_t>(seed >> 32)};
  const Philox4x32::Counter ctr{pair, static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32),
                                static_cast<std::uint32_t>(stream)};
  const auto out = Philox4x32::generate(ctr, key);
  const double u1 = uniform_open((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
  const double u2 = uniform_open((static_cast<std::uint64_t>(out[2]) << 32) | out[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace loopgamma
