#pragma once

#include <cstddef>
#include <cstdint>

#include "fpp/philox.hpp"
#include "fpp/types.hpp"

namespace fpp::simd {

// Hot loops of the sampling and estimation pipeline. Every variant must agree bit for bit
// with the scalar reference table.
struct KernelTable {
  const char* name;

  // out[i] = Philox(counter(first + i), key) packed as w0 | w1 << 32.
  void (*philox_fill)(std::uint64_t* out, std::size_t count, std::uint32_t first,
                      const DrawAddress& addr);

  // out[i] = (always || draws[i] < below) ? va : vb.
  void (*select_two_point)(Capacity* out, const std::uint64_t* draws, std::size_t count,
                           std::uint64_t below, bool always, Capacity va, Capacity vb);

  // out[i] = (always || u[i] < below) ? fresh[i] : base[i].
  void (*blend_below)(Capacity* out, const Capacity* base, const Capacity* fresh,
                      const std::uint64_t* u, std::size_t count, std::uint64_t below, bool always);

  // out[i] = values[idx[i]].
  void (*gather)(Capacity* out, const Capacity* values, const std::uint32_t* idx, std::size_t count);

  // Σ values[idx[i]].
  std::int64_t (*gather_sum)(const Capacity* values, const std::uint32_t* idx, std::size_t count);

  // Exact Σ x and Σ x² for |x| < 2^24.
  void (*moments_i32)(const std::int32_t* x, std::size_t count, __int128* sum, __int128* sumsq);

  // popcount(a & b) over 64-bit words.
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
};

const KernelTable& scalar_kernels() noexcept;
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;
// Best supported table; FPP_SIMD=scalar in the environment forces the reference path.
const KernelTable& kernels() noexcept;

}  // namespace fpp::simd
