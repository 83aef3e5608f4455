#pragma once

#include <array>
#include <cstdint>

namespace fpp {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr PhiloxCounter philox4x32(PhiloxCounter c, PhiloxKey k) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }
  return c;
}

// Independent draw families. Each gets its own fourth counter word.
enum class Stream : std::uint32_t {
  kEdges = 1,
  kFresh = 2,
  kUniforms = 3,
  kPenalty = 4,
  kVertexWeights = 5,
  kSpare = 6,
};

// Counter layout {index, sample_lo, sample_hi, stream}, key {seed_lo, seed_hi}.
struct DrawAddress {
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  Stream stream = Stream::kEdges;

  PhiloxKey key() const noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }
  PhiloxCounter counter(std::uint32_t idx) const noexcept {
    return {idx, static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32),
            static_cast<std::uint32_t>(stream)};
  }
  // 64 uniform bits for a single index: w0 | w1 << 32.
  std::uint64_t draw(std::uint32_t idx) const noexcept {
    const PhiloxCounter r = philox4x32(counter(idx), key());
    return static_cast<std::uint64_t>(r[0]) | (static_cast<std::uint64_t>(r[1]) << 32);
  }
};

}  // namespace fpp
