#include <algorithm>
#include <limits>
#include <random>

#include "doctest.h"
#include "fpp/flow.hpp"

using namespace fpp;

namespace {

bool separates(const Lattice& L, std::uint32_t removed, std::span<const std::uint8_t> role) {
  std::vector<std::uint8_t> seen(L.num_vertices(), 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t v = 0; v < L.num_vertices(); ++v) {
    if (role[v] == kSource) {
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const std::uint32_t u = stack.back();
    stack.pop_back();
    if (role[u] == kSink) return false;
    for (int dir = 0; dir < L.num_directions(); ++dir) {
      if (!L.has_neighbor(VertexId{u}, dir)) continue;
      if ((removed >> index(L.edge_along(VertexId{u}, dir))) & 1u) continue;
      const std::uint32_t w = index(L.neighbor(VertexId{u}, dir));
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return true;
}

struct Brute {
  FlowValue min_capacity = std::numeric_limits<FlowValue>::max();
  std::vector<std::uint32_t> min_cuts;
};

Brute brute_cuts(const Lattice& L, std::span<const Capacity> caps, std::span<const std::uint8_t> role) {
  Brute b;
  const std::uint32_t E = L.num_edges();
  REQUIRE(E <= 20);
  for (std::uint32_t m = 0; m < (1u << E); ++m) {
    FlowValue c = 0;
    for (std::uint32_t e = 0; e < E; ++e) c += ((m >> e) & 1u) ? caps[e] : 0;
    if (c > b.min_capacity) continue;
    if (!separates(L, m, role)) continue;
    if (c < b.min_capacity) {
      b.min_capacity = c;
      b.min_cuts.clear();
    }
    b.min_cuts.push_back(m);
  }
  return b;
}

std::uint32_t mask_of(const EdgeSet& s) {
  std::uint32_t m = 0;
  for (EdgeId e : s) m |= 1u << index(e);
  return m;
}

}  // namespace

TEST_CASE("unit square, all capacities one") {
  const Lattice L({2, 1, 1});
  const TwoPointDist dist{1, 2, Ratio::of(1, 1)};
  const auto f = uniform_field(L, dist, 1);
  const auto [bottom, top] = boundary_sets(L);
  const auto r = max_flow(L, f, bottom, top);
  CHECK(r.value == 2);
  CHECK(canonical_min_cut(L, f.values, r).capacity == 2);
}

TEST_CASE("single column") {
  const Lattice L({2, 0, 4});
  const TwoPointDist dist{1, 2, Ratio::of(1, 2)};
  const auto [bottom, top] = boundary_sets(L);
  CapacityField f = uniform_field(L, dist, 2);
  auto r = max_flow(L, f, bottom, top);
  CHECK(r.value == 2);
  auto cut = canonical_min_cut(L, f.values, r);
  CHECK(cut.edges == EdgeSet{EdgeId{0}});
  CHECK(essential_set(L, f, bottom, top).empty());
  // With every other edge at b, each edge is pivotal.
  CHECK(pivotal_set(L, f, bottom, top).size() == 4);

  f.values = {2, 2, 1, 2};
  r = max_flow(L, f, bottom, top);
  CHECK(r.value == 1);
  CHECK(canonical_min_cut(L, f.values, r).edges == EdgeSet{EdgeId{2}});
  CHECK(essential_set(L, f, bottom, top) == EdgeSet{EdgeId{2}});
  CHECK(pivotal_set(L, f, bottom, top) == EdgeSet{EdgeId{2}});

  f.values = {2, 1, 1, 2};
  CHECK(essential_set(L, f, bottom, top).empty());
  CHECK(pivotal_set(L, f, bottom, top).empty());
}

TEST_CASE("capacity scaling homogeneity") {
  for (const CylinderSpec s : {CylinderSpec{2, 3, 4}, CylinderSpec{3, 2, 3}}) {
    const Lattice L(s);
    const auto role = cylinder_roles(L);
    std::vector<Capacity> ones(L.num_edges(), 1), fives(L.num_edges(), 5);
    CHECK(flow_value(L, fives, role) == 5 * flow_value(L, ones, role));
    CHECK(flow_value(L, ones, role) == static_cast<FlowValue>(s.base_count()));
  }
}

TEST_CASE("disjointness is enforced") {
  const Lattice L({2, 1, 1});
  CHECK_THROWS_AS(make_roles(L, {VertexId{0}}, {VertexId{0}}), DomainError);
  CHECK_THROWS_AS(make_roles(L, {}, {VertexId{0}}), DomainError);
}

TEST_CASE("anchored flow on the 2x3 strip") {
  const Lattice L({2, 1, 2});
  CHECK(L.num_edges() == 7);
  const TwoPointDist dist{1, 2, Ratio::of(1, 2)};
  const auto role = anchored_roles(L);
  const auto ones = uniform_field(L, dist, 1);
  const Brute b = brute_cuts(L, ones.values, role);
  const auto r = anchored_flow(L, ones);
  CHECK(r.value == b.min_capacity);
  CHECK(r.value == 2);
  const auto twos = uniform_field(L, dist, 2);
  CHECK(anchored_flow(L, twos).value == 2 * r.value);
}

TEST_CASE("random tiny instances against subset enumeration") {
  std::mt19937_64 rng(7);
  const std::vector<CylinderSpec> specs{{2, 1, 1}, {2, 1, 2}, {2, 2, 1}, {2, 1, 3}, {2, 2, 2}, {2, 0, 5}, {3, 1, 1}};
  for (const auto& s : specs) {
    const Lattice L(s);
    for (int trial = 0; trial < 30; ++trial) {
      const TwoPointDist dist{1, 1 + static_cast<Capacity>(rng() % 3 + 1), Ratio::of(1, 2)};
      const auto f = sample_field(L, dist, rng(), trial);
      for (int kind = 0; kind < 2; ++kind) {
        if (kind == 1 && s.H < 2) continue;
        const auto role = kind == 0 ? cylinder_roles(L) : anchored_roles(L);
        const Brute b = brute_cuts(L, f.values, role);
        const auto r = solve_flow(L, f.values, role);
        CHECK(r.value == b.min_capacity);
        const auto cut = canonical_min_cut(L, f.values, r);
        CHECK(cut.capacity == r.value);
        CHECK(std::count(b.min_cuts.begin(), b.min_cuts.end(), mask_of(cut.edges)) == 1);
        const auto sink_cut = sink_side_min_cut(L, f.values, r);
        CHECK(sink_cut.capacity == r.value);

        std::uint32_t inter = ~0u;
        for (auto m : b.min_cuts) inter &= m;
        inter &= (L.num_edges() == 32 ? ~0u : (1u << L.num_edges()) - 1);
        CHECK(mask_of(essential_edges(L, r)) == inter);
        CHECK(essential_edges(L, r) == essential_by_perturbation(L, f.values, role));

        const EdgeSet piv = pivotal_edges(L, f.values, f.dist, role, r);
        CHECK(piv == pivotal_set_definitional(L, f.values, f.dist, role));
        CHECK((mask_of(piv) & inter) == inter);
      }
    }
  }
}

TEST_CASE("flow conservation and capacity bounds") {
  const Lattice L({3, 3, 5});
  const TwoPointDist dist{2, 5, Ratio::of(1, 2)};
  const auto f = sample_field(L, dist, 31, 2);
  const auto role = cylinder_roles(L);
  const auto r = solve_flow(L, f.values, role);
  std::vector<FlowValue> net(L.num_vertices(), 0);
  for (std::uint32_t e = 0; e < L.num_edges(); ++e) {
    CHECK(std::llabs(r.edge_flows[e]) <= f.values[e]);
    net[index(L.edge_base(EdgeId{e}))] -= r.edge_flows[e];
    net[index(L.edge_head(EdgeId{e}))] += r.edge_flows[e];
  }
  FlowValue into_sinks = 0;
  for (std::uint32_t v = 0; v < L.num_vertices(); ++v) {
    if (role[v] == kInner) CHECK(net[v] == 0);
    if (role[v] == kSink) into_sinks += net[v];
  }
  CHECK(into_sinks == r.value);
}

TEST_CASE("monotonicity and tau >= phi") {
  std::mt19937_64 rng(99);
  const Lattice L({2, 4, 6});
  const TwoPointDist dist{1, 2, Ratio::of(1, 2)};
  for (int trial = 0; trial < 20; ++trial) {
    auto f = sample_field(L, dist, rng(), 0);
    const auto role = cylinder_roles(L);
    const FlowValue base = flow_value(L, f.values, role);
    CHECK(anchored_flow(L, f).value >= base);
    const std::uint32_t e = static_cast<std::uint32_t>(rng() % L.num_edges());
    f.values[e] += 1;
    CHECK(flow_value(L, f.values, role) >= base);
  }
}
