#include <random>

#include "doctest.h"
#include "fpp/simd.hpp"

using namespace fpp;

TEST_CASE("philox4x32-10 known-answer vectors") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("active kernel table falls back to a known variant") {
  const auto& k = simd::kernels();
  const std::string name = k.name;
  CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const simd::KernelTable* fast = simd::avx2_kernels();
  if (fast == nullptr) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(12345);

  for (std::size_t count : {0u, 1u, 7u, 8u, 9u, 63u, 1000u}) {
    const DrawAddress addr{rng(), rng(), Stream::kFresh};
    const std::uint32_t first = static_cast<std::uint32_t>(rng());
    std::vector<std::uint64_t> x(count), y(count);
    ref.philox_fill(x.data(), count, first, addr);
    fast->philox_fill(y.data(), count, first, addr);
    CHECK(x == y);

    for (const std::uint64_t below : {std::uint64_t{0}, std::uint64_t{1} << 63, ~std::uint64_t{0}, rng()}) {
      for (bool always : {false, true}) {
        std::vector<Capacity> s1(count), s2(count);
        ref.select_two_point(s1.data(), x.data(), count, below, always, 3, 7);
        fast->select_two_point(s2.data(), x.data(), count, below, always, 3, 7);
        CHECK(s1 == s2);

        std::vector<Capacity> base(count), fresh(count), b1(count), b2(count);
        for (std::size_t i = 0; i < count; ++i) {
          base[i] = static_cast<Capacity>(rng() % 100);
          fresh[i] = static_cast<Capacity>(rng() % 100);
        }
        ref.blend_below(b1.data(), base.data(), fresh.data(), x.data(), count, below, always);
        fast->blend_below(b2.data(), base.data(), fresh.data(), x.data(), count, below, always);
        CHECK(b1 == b2);
      }
    }

    std::vector<Capacity> values(257);
    for (auto& v : values) v = static_cast<Capacity>(rng() % 1000000);
    std::vector<std::uint32_t> idx(count);
    for (auto& i : idx) i = static_cast<std::uint32_t>(rng() % values.size());
    std::vector<Capacity> g1(count), g2(count);
    ref.gather(g1.data(), values.data(), idx.data(), count);
    fast->gather(g2.data(), values.data(), idx.data(), count);
    CHECK(g1 == g2);
    CHECK(ref.gather_sum(values.data(), idx.data(), count) == fast->gather_sum(values.data(), idx.data(), count));

    std::vector<std::uint64_t> wa(count), wb(count);
    for (std::size_t i = 0; i < count; ++i) {
      wa[i] = rng();
      wb[i] = rng();
    }
    CHECK(ref.and_popcount(wa.data(), wb.data(), count) == fast->and_popcount(wa.data(), wb.data(), count));
  }

  // Exercise the block flush with extreme values.
  for (std::size_t count : {5u, 40000u, 100003u}) {
    std::vector<std::int32_t> v(count);
    for (auto& x : v) x = static_cast<std::int32_t>(rng() % (2u << 24)) - (1 << 24) + 1;
    for (std::size_t i = 0; i < count; i += 3) v[i] = (1 << 24) - 1;
    __int128 s1, q1, s2, q2;
    ref.moments_i32(v.data(), count, &s1, &q1);
    fast->moments_i32(v.data(), count, &s2, &q2);
    CHECK(s1 == s2);
    CHECK(q1 == q2);
  }
}
