#include <set>
#include <sstream>

#include "doctest.h"
#include "fpp/lattice.hpp"

using namespace fpp;

namespace {

// Independent count: walk every integer point and every unit step inside the closed box.
std::pair<std::uint64_t, std::uint64_t> naive_counts(int d, int n, int H) {
  std::uint64_t vertices = 0, edges = 0;
  std::vector<int> x(d, 0);
  auto upper = [&](int k) { return k == d - 1 ? H : n; };
  while (true) {
    ++vertices;
    for (int k = 0; k < d; ++k) edges += x[k] + 1 <= upper(k);
    int k = 0;
    while (k < d && ++x[k] > upper(k)) x[k++] = 0;
    if (k == d) break;
  }
  return {vertices, edges};
}

}  // namespace

TEST_CASE("cylinder counts match naive enumeration") {
  CHECK(Lattice({2, 1, 1}).num_vertices() == 4);
  CHECK(Lattice({2, 1, 1}).num_edges() == 4);
  CHECK(Lattice({3, 2, 1}).num_vertices() == 18);
  CHECK(Lattice({3, 2, 1}).num_edges() == 33);
  CHECK(Lattice({2, 3, 2}).num_vertices() == 12);
  CHECK(Lattice({2, 3, 2}).num_edges() == 17);
  for (int d = 2; d <= 4; ++d) {
    for (int n = 0; n <= 3; ++n) {
      for (int H = 1; H <= 4; ++H) {
        const CylinderSpec s{d, n, H};
        const Lattice L(s);
        const auto [v, e] = naive_counts(d, n, H);
        CHECK(L.num_vertices() == v);
        CHECK(L.num_edges() == e);
        CHECK(s.vertex_count() == v);
        CHECK(s.edge_count() == e);
      }
    }
  }
}

TEST_CASE("vertex ids are row-major with the vertical axis slowest") {
  const Lattice L({3, 2, 3});
  for (std::uint32_t v = 0; v < L.num_vertices(); ++v) {
    const Coords x = L.coords(VertexId{v});
    CHECK(index(L.vertex(x)) == v);
    CHECK(x[0] + 3 * x[1] + 9 * x[2] == static_cast<int>(v));
  }
}

TEST_CASE("edge ids biject with (base, axis)") {
  const Lattice L({3, 2, 2});
  std::set<std::pair<std::uint32_t, int>> seen;
  for (std::uint32_t e = 0; e < L.num_edges(); ++e) {
    const EdgeId id{e};
    const auto base = L.edge_base(id);
    const int axis = L.edge_axis(id);
    Coords x = L.coords(base);
    ++x[axis];
    CHECK(L.contains(x));
    CHECK(L.edge_head(id) == L.vertex(x));
    CHECK(L.edge(base, axis) == id);
    CHECK(seen.insert({index(base), axis}).second);
  }
}

TEST_CASE("degree sum is twice the edge count") {
  for (const CylinderSpec s : {CylinderSpec{2, 3, 5}, CylinderSpec{3, 2, 4}, CylinderSpec{4, 1, 2}, CylinderSpec{2, 0, 4}}) {
    const Lattice L(s);
    std::uint64_t degrees = 0;
    for (std::uint32_t v = 0; v < L.num_vertices(); ++v) {
      for (int dir = 0; dir < L.num_directions(); ++dir) {
        if (!L.has_neighbor(VertexId{v}, dir)) continue;
        ++degrees;
        const VertexId w = L.neighbor(VertexId{v}, dir);
        const EdgeId e = L.edge_along(VertexId{v}, dir);
        CHECK(((L.edge_base(e) == VertexId{v} && L.edge_head(e) == w) ||
               (L.edge_head(e) == VertexId{v} && L.edge_base(e) == w)));
      }
    }
    CHECK(degrees == 2ull * L.num_edges());
  }
}

TEST_CASE("boundary sets are the extremal layers") {
  const Lattice L({2, 1, 1});
  const auto [bottom, top] = boundary_sets(L);
  CHECK(bottom == VertexSet{L.vertex({0, 0}), L.vertex({1, 0})});
  CHECK(top == VertexSet{L.vertex({0, 1}), L.vertex({1, 1})});
  CHECK(boundary_sets(Lattice({3, 1, 2})).first.size() == 4);
  const Lattice L2({2, 3, 5});
  for (VertexId v : boundary_sets(L2).first) CHECK(L2.height_of(v) == 0);
  CHECK(boundary_sets(L2).first.size() == 4);
}

TEST_CASE("shift_edge") {
  const Lattice L({2, 0, 3});
  const EdgeId e = *L.edge(L.vertex({0, 0}), 1);
  CHECK(shift_edge(L, e, 1) == L.edge(L.vertex({0, 1}), 1));
  CHECK(shift_edge(L, e, 0) == e);
  const EdgeId top = *L.edge(L.vertex({0, 2}), 1);
  CHECK_FALSE(shift_edge(L, top, 1).has_value());

  const Lattice L3({3, 2, 4});
  for (std::uint32_t i = 0; i < L3.num_edges(); ++i) {
    for (int k = -4; k <= 4; ++k) {
      const auto s = shift_edge(L3, EdgeId{i}, k);
      if (!s) continue;
      CHECK(L3.edge_axis(*s) == L3.edge_axis(EdgeId{i}));
      const auto back = shift_edge(L3, *s, -k);
      REQUIRE(back.has_value());
      CHECK(*back == EdgeId{i});
    }
  }
}

TEST_CASE("dual plaquettes") {
  const Lattice L({2, 1, 1});
  auto p = dual_plaquette(L, *L.edge(L.vertex({0, 0}), 1));
  CHECK(p.normal_axis == 1);
  REQUIRE(p.corners2.size() == 2);
  CHECK(p.corners2[0][0] == -1);
  CHECK(p.corners2[0][1] == 1);
  CHECK(p.corners2[1][0] == 1);
  CHECK(p.corners2[1][1] == 1);

  p = dual_plaquette(L, *L.edge(L.vertex({0, 0}), 0));
  CHECK(p.corners2[0][0] == 1);
  CHECK(p.corners2[0][1] == -1);
  CHECK(p.corners2[1][0] == 1);
  CHECK(p.corners2[1][1] == 1);

  const Lattice L3({3, 2, 1});
  p = dual_plaquette(L3, *L3.edge(L3.vertex({1, 1, 0}), 2));
  CHECK(p.center2[0] == 2);
  CHECK(p.center2[1] == 2);
  CHECK(p.center2[2] == 1);
  REQUIRE(p.corners2.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& c = p.corners2[i];
    const auto& nx = p.corners2[(i + 1) % 4];
    CHECK(c[2] == 1);
    // Consecutive corners share a side of length one.
    CHECK(std::abs(c[0] - nx[0]) + std::abs(c[1] - nx[1]) == 2);
  }
}

TEST_CASE("slab edge boundary") {
  const CylinderSpec s{3, 2, 1};
  std::vector<std::uint8_t> mask(9, 0);
  CHECK(slab_edge_boundary(s, mask) == 0);
  mask.assign(9, 1);
  CHECK(slab_edge_boundary(s, mask) == 0);
  mask.assign(9, 0);
  mask[0] = 1;
  CHECK(slab_edge_boundary(s, mask) == 2);
  mask[4] = 1;
  CHECK(slab_edge_boundary(s, mask) == 6);

  // Complement symmetry on every subset of a 3x3 grid.
  for (unsigned bits = 0; bits < 512; ++bits) {
    std::vector<std::uint8_t> m(9), c(9);
    for (int i = 0; i < 9; ++i) {
      m[i] = (bits >> i) & 1u;
      c[i] = !m[i];
    }
    CHECK(slab_edge_boundary(s, m) == slab_edge_boundary(s, c));
  }
}

TEST_CASE("plaquette export formats") {
  const Lattice L({2, 1, 1});
  const EdgeSet edges{*L.edge(L.vertex({0, 0}), 1)};
  std::ostringstream csv, poly;
  write_plaquettes_csv(csv, L, edges);
  CHECK(csv.str() == "edge,normal_axis,corner0,corner1\n1,1,-0.5 0.5,0.5 0.5\n");
  write_plaquettes_polygons(poly, L, edges);
  CHECK(poly.str() == "PLAQ 2 2 1\n-0.5 0.5\n0.5 0.5\n2 0 1\n");
}

TEST_CASE("extract_box maps back to the parent") {
  const Lattice L({3, 3, 5});
  const SubLattice sub = extract_box(L, {1, 0, 2}, {3, 2, 4});
  CHECK(sub.lattice.num_vertices() == 27);
  for (std::uint32_t e = 0; e < sub.lattice.num_edges(); ++e) {
    const EdgeId pe = sub.parent_edge[e];
    CHECK(L.edge_axis(pe) == sub.lattice.edge_axis(EdgeId{e}));
    Coords x = sub.lattice.coords(sub.lattice.edge_base(EdgeId{e}));
    Coords y = L.coords(L.edge_base(pe));
    for (int k = 0; k < 3; ++k) CHECK(y[k] == x[k] + sub.lo[k]);
  }
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(Lattice({1, 2, 2}), DomainError);
  CHECK_THROWS_AS(Lattice({2, 2, 0}), DomainError);
  CHECK_THROWS_AS(Lattice({2, -1, 2}), DomainError);
  CHECK_THROWS_AS(Lattice({3, 100000, 100000}), CapacityError);
}
