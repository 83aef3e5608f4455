#include <bit>

#include "fpp/simd.hpp"

namespace fpp::simd {

namespace {

void philox_fill(std::uint64_t* out, std::size_t count, std::uint32_t first, const DrawAddress& addr) {
  const PhiloxKey key = addr.key();
  for (std::size_t i = 0; i < count; ++i) {
    const PhiloxCounter r = philox4x32(addr.counter(first + static_cast<std::uint32_t>(i)), key);
    out[i] = static_cast<std::uint64_t>(r[0]) | (static_cast<std::uint64_t>(r[1]) << 32);
  }
}

void select_two_point(Capacity* out, const std::uint64_t* draws, std::size_t count, std::uint64_t below,
                      bool always, Capacity va, Capacity vb) {
  for (std::size_t i = 0; i < count; ++i) out[i] = (always || draws[i] < below) ? va : vb;
}

void blend_below(Capacity* out, const Capacity* base, const Capacity* fresh, const std::uint64_t* u,
                 std::size_t count, std::uint64_t below, bool always) {
  for (std::size_t i = 0; i < count; ++i) out[i] = (always || u[i] < below) ? fresh[i] : base[i];
}

void gather(Capacity* out, const Capacity* values, const std::uint32_t* idx, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) out[i] = values[idx[i]];
}

std::int64_t gather_sum(const Capacity* values, const std::uint32_t* idx, std::size_t count) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < count; ++i) s += values[idx[i]];
  return s;
}

void moments_i32(const std::int32_t* x, std::size_t count, __int128* sum, __int128* sumsq) {
  __int128 s = 0, q = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::int64_t v = x[i];
    s += v;
    q += v * v;
  }
  *sum = s;
  *sumsq = q;
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return c;
}

constexpr KernelTable kScalar{"scalar",   philox_fill, select_two_point, blend_below,
                              gather,     gather_sum,  moments_i32,      and_popcount};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace fpp::simd
