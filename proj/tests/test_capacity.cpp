#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fpp/capacity.hpp"

using namespace fpp;

TEST_CASE("ratio parsing") {
  CHECK(Ratio::parse("1/2") == Ratio{1, 2});
  CHECK(Ratio::parse("2/4") == Ratio{1, 2});
  CHECK(Ratio::parse("0.25") == Ratio{1, 4});
  CHECK(Ratio::parse("1") == Ratio{1, 1});
  CHECK(Ratio::parse("0") == Ratio{0, 1});
  CHECK(Ratio::parse("3/10").str() == "3/10");
  CHECK_THROWS_AS(Ratio::parse("x"), DomainError);
  CHECK_THROWS_AS(Ratio::parse("1/0"), DomainError);
  CHECK(Ratio::of(1, 3) < Ratio::of(1, 2));
}

TEST_CASE("two-point law scaling") {
  const auto d = TwoPointDist::from_rationals(Ratio::parse("1/2"), Ratio::parse("3/4"), Ratio::of(1, 3));
  CHECK(d.a == 2);
  CHECK(d.b == 3);
  CHECK_THROWS_AS(TwoPointDist::from_rationals(Ratio::of(2, 1), Ratio::of(1, 1), Ratio::of(1, 2)), DomainError);
  CHECK(TwoPointDist{1, 2, Ratio::of(1, 2)}.edge_variance() == Ratio{1, 4});
  CHECK(TwoPointDist{1, 3, Ratio::of(1, 3)}.edge_variance() == Ratio{8, 9});
}

TEST_CASE("bernoulli thresholds are exact") {
  CHECK(BernoulliCut::of(Ratio::of(1, 2)).below == (std::uint64_t{1} << 63));
  CHECK(BernoulliCut::of(Ratio::of(0, 1)).below == 0);
  CHECK(BernoulliCut::of(Ratio::of(1, 1)).always);
  CHECK(BernoulliCut::of(Ratio::of(1, 4)).below == (std::uint64_t{1} << 62));
  // ceil(2^64 / 3)
  CHECK(BernoulliCut::of(Ratio::of(1, 3)).below == 0x5555555555555556ull);
}

TEST_CASE("sampling edge cases and determinism") {
  const Lattice L({2, 5, 7});
  auto all_a = sample_field(L, {1, 2, Ratio::of(1, 1)}, 1, 0);
  for (Capacity v : all_a.values) CHECK(v == 1);
  auto all_b = sample_field(L, {1, 2, Ratio::of(0, 1)}, 1, 0);
  for (Capacity v : all_b.values) CHECK(v == 2);
  const TwoPointDist half{1, 2, Ratio::of(1, 2)};
  CHECK(sample_field(L, half, 42, 3) == sample_field(L, half, 42, 3));
  CHECK_FALSE(sample_field(L, half, 42, 3) == sample_field(L, half, 42, 4));
}

TEST_CASE("empirical frequency of a matches p_a") {
  const Lattice L({2, 200, 250});
  REQUIRE(L.num_edges() >= 100000);
  for (const Ratio p : {Ratio::of(1, 2), Ratio::of(1, 5), Ratio::of(9, 10)}) {
    const auto f = sample_field(L, {1, 2, p}, 2024, 0);
    std::size_t hits = 0;
    for (Capacity v : f.values) hits += v == 1;
    const double n = static_cast<double>(f.size());
    const double pa = p.to_double();
    const double se = std::sqrt(pa * (1 - pa) / n);
    CHECK(std::abs(hits / n - pa) <= 4 * se);
  }
}

TEST_CASE("flip_edge") {
  const Lattice L({2, 2, 2});
  const TwoPointDist dist{1, 2, Ratio::of(1, 2)};
  const auto f = sample_field(L, dist, 5, 0);
  const EdgeId e{3};
  CHECK(flip_edge(f, e, f[e]) == f);
  const Capacity other = f[e] == 1 ? 2 : 1;
  const auto g = flip_edge(f, e, other);
  std::size_t diff = 0;
  for (std::size_t i = 0; i < f.size(); ++i) diff += f.values[i] != g.values[i];
  CHECK(diff == 1);
  CHECK(flip_edge(g, e, f[e]) == f);
  CHECK_THROWS_AS(flip_edge(f, e, 3), DomainError);
}

TEST_CASE("noise coupling is monotone in t") {
  const Lattice L({2, 6, 12});
  const TwoPointDist dist{1, 2, Ratio::of(1, 2)};
  const auto c = make_coupling(L, dist, 77, 9);
  CHECK(realize_noise(c, Ratio::of(0, 1)) == c.base);
  CHECK(realize_noise(c, Ratio::of(1, 1)) == c.fresh);
  // Resampled sets are nested: an edge switches source exactly once as t grows.
  std::vector<int> first_switch(L.num_edges(), -1);
  for (int k = 0; k <= 20; ++k) {
    const BernoulliCut cut = BernoulliCut::of(Ratio::of(k, 20));
    for (std::size_t i = 0; i < L.num_edges(); ++i) {
      const bool resampled = cut.hit(c.thresholds[i]);
      if (resampled && first_switch[i] < 0) first_switch[i] = k;
      if (first_switch[i] >= 0) CHECK(resampled);
    }
    const auto f = realize_noise(c, Ratio::of(k, 20));
    for (std::size_t i = 0; i < L.num_edges(); ++i) {
      CHECK(f.values[i] == (cut.hit(c.thresholds[i]) ? c.fresh.values[i] : c.base.values[i]));
    }
  }
}

TEST_CASE("binary and CSV round trips") {
  const CylinderSpec spec{3, 2, 3};
  const Lattice L(spec);
  const auto f = sample_field(L, {2, 5, Ratio::of(1, 3)}, 99, 4);
  std::stringstream bin;
  write_field_binary(bin, spec, f);
  const auto [spec2, g] = read_field_binary(bin);
  CHECK(spec2 == spec);
  CHECK(g == f);
  CHECK(g.seed == 99);
  CHECK(g.sample_index == 4);
  CHECK(g.dist.p_a == f.dist.p_a);

  std::stringstream csv;
  write_field_csv(csv, L, f);
  CHECK(read_field_csv(csv, L, f.dist) == f);
}
