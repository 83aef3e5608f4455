// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "fpp/simd.hpp"

namespace fpp::simd {

namespace {

const KernelTable& ref() { return scalar_kernels(); }

// 32x32 -> (hi, lo) on all eight lanes.
inline void mulhilo8(__m256i a, __m256i m, __m256i& hi, __m256i& lo) {
  const __m256i pe = _mm256_mul_epu32(a, m);
  const __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  lo = _mm256_blend_epi32(pe, _mm256_slli_epi64(po, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(pe, 32), po, 0xAA);
}

void philox_fill(std::uint64_t* out, std::size_t count, std::uint32_t first, const DrawAddress& addr) {
  const PhiloxKey key0 = addr.key();
  const PhiloxCounter base = addr.counter(0);
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kPhiloxM1));
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    __m256i c0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(first + static_cast<std::uint32_t>(i))), lane);
    __m256i c1 = _mm256_set1_epi32(static_cast<int>(base[1]));
    __m256i c2 = _mm256_set1_epi32(static_cast<int>(base[2]));
    __m256i c3 = _mm256_set1_epi32(static_cast<int>(base[3]));
    std::uint32_t k0 = key0[0], k1 = key0[1];
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
      }
      __m256i hi0, lo0, hi1, lo1;
      mulhilo8(c0, m0, hi0, lo0);
      mulhilo8(c2, m1, hi1, lo1);
      const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), _mm256_set1_epi32(static_cast<int>(k0)));
      const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), _mm256_set1_epi32(static_cast<int>(k1)));
      c0 = n0;
      c1 = lo1;
      c2 = n2;
      c3 = lo0;
    }
    const __m256i lo = _mm256_unpacklo_epi32(c0, c1);  // lanes 0,1 | 4,5
    const __m256i hi = _mm256_unpackhi_epi32(c0, c1);  // lanes 2,3 | 6,7
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_permute2x128_si256(lo, hi, 0x20));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i + 4), _mm256_permute2x128_si256(lo, hi, 0x31));
  }
  if (i < count) ref().philox_fill(out + i, count - i, first + static_cast<std::uint32_t>(i), addr);
}

// Eight unsigned 64-bit comparisons draws[0..8) < below, packed into 32-bit lane masks.
inline __m256i below_mask8(const std::uint64_t* draws, __m256i below_biased) {
  const __m256i sign = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ull));
  const __m256i d0 = _mm256_xor_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(draws)), sign);
  const __m256i d1 = _mm256_xor_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(draws + 4)), sign);
  const __m256i m0 = _mm256_cmpgt_epi64(below_biased, d0);
  const __m256i m1 = _mm256_cmpgt_epi64(below_biased, d1);
  const __m256i pick = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);
  const __m256i p0 = _mm256_permutevar8x32_epi32(m0, pick);
  const __m256i p1 = _mm256_permutevar8x32_epi32(m1, pick);
  return _mm256_permute2x128_si256(p0, p1, 0x20);
}

inline __m256i bias(std::uint64_t below) {
  return _mm256_set1_epi64x(static_cast<long long>(below ^ 0x8000000000000000ull));
}

void select_two_point(Capacity* out, const std::uint64_t* draws, std::size_t count, std::uint64_t below,
                      bool always, Capacity va, Capacity vb) {
  if (always) {
    for (std::size_t i = 0; i < count; ++i) out[i] = va;
    return;
  }
  const __m256i a = _mm256_set1_epi32(va);
  const __m256i b = _mm256_set1_epi32(vb);
  const __m256i lim = bias(below);
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    const __m256i m = below_mask8(draws + i, lim);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_blendv_epi8(b, a, m));
  }
  if (i < count) ref().select_two_point(out + i, draws + i, count - i, below, always, va, vb);
}

void blend_below(Capacity* out, const Capacity* base, const Capacity* fresh, const std::uint64_t* u,
                 std::size_t count, std::uint64_t below, bool always) {
  if (always) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fresh[i];
    return;
  }
  const __m256i lim = bias(below);
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    const __m256i m = below_mask8(u + i, lim);
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base + i));
    const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(fresh + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_blendv_epi8(x, y, m));
  }
  if (i < count) ref().blend_below(out + i, base + i, fresh + i, u + i, count - i, below, always);
}

void gather(Capacity* out, const Capacity* values, const std::uint32_t* idx, std::size_t count) {
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    const __m256i ix = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_i32gather_epi32(values, ix, 4));
  }
  if (i < count) ref().gather(out + i, values, idx + i, count - i);
}

std::int64_t gather_sum(const Capacity* values, const std::uint32_t* idx, std::size_t count) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    const __m256i ix = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + i));
    const __m256i v = _mm256_i32gather_epi32(values, ix, 4);
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(v)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(v, 1)));
  }
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::int64_t s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  if (i < count) s += ref().gather_sum(values, idx + i, count - i);
  return s;
}

void moments_i32(const std::int32_t* x, std::size_t count, __int128* sum, __int128* sumsq) {
  // Squares stay below 2^48, so 2^15 of them fit in a signed 64-bit lane.
  constexpr std::size_t kBlock = std::size_t{1} << 15;
  __int128 s = 0, q = 0;
  std::size_t i = 0;
  while (i + 8 <= count) {
    const std::size_t stop = (count - i) / 8 * 8 > kBlock ? i + kBlock : i + (count - i) / 8 * 8;
    __m256i as = _mm256_setzero_si256();
    __m256i aq = _mm256_setzero_si256();
    for (; i < stop; i += 8) {
      const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
      const __m256i lo = _mm256_cvtepi32_epi64(_mm256_castsi256_si128(v));
      const __m256i hi = _mm256_cvtepi32_epi64(_mm256_extracti128_si256(v, 1));
      as = _mm256_add_epi64(as, _mm256_add_epi64(lo, hi));
      aq = _mm256_add_epi64(aq, _mm256_mul_epi32(lo, lo));
      aq = _mm256_add_epi64(aq, _mm256_mul_epi32(hi, hi));
    }
    alignas(32) std::int64_t ls[4], lq[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(ls), as);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lq), aq);
    for (int k = 0; k < 4; ++k) {
      s += ls[k];
      q += lq[k];
    }
  }
  if (i < count) {
    __int128 ts = 0, tq = 0;
    ref().moments_i32(x + i, count - i, &ts, &tq);
    s += ts;
    q += tq;
  }
  *sum = s;
  *sumsq = q;
}

// Nibble-table popcount with byte sums folded by SAD (Mula, Kurz, Lemire).
std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i v = _mm256_and_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)),
                                       _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)));
    const __m256i c = _mm256_add_epi8(_mm256_shuffle_epi8(table, _mm256_and_si256(v, low)),
                                      _mm256_shuffle_epi8(table, _mm256_and_si256(_mm256_srli_epi16(v, 4), low)));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(c, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  if (i < words) total += ref().and_popcount(a + i, b + i, words - i);
  return total;
}

constexpr KernelTable kAvx2{"avx2", philox_fill, select_two_point, blend_below,
                            gather, gather_sum,  moments_i32,      and_popcount};

}  // namespace

const KernelTable* avx2_table_unchecked() noexcept { return &kAvx2; }

}  // namespace fpp::simd
