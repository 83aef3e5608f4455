#include <cmath>

#include "doctest.h"
#include "fpp/penalized.hpp"

using namespace fpp;

TEST_CASE("penalty M is the exact integer part of n^epsilon") {
  CHECK(penalty_M(1024, Ratio::of(1, 10)) == 2);
  CHECK(penalty_M(1023, Ratio::of(1, 10)) == 1);
  CHECK(penalty_M(59049, Ratio::of(1, 10)) == 3);
  CHECK(penalty_M(59048, Ratio::of(1, 10)) == 2);
  CHECK(penalty_M(8, Ratio::of(1, 3)) == 2);
  CHECK(penalty_M(2, Ratio::of(1, 5)) == 1);
}

TEST_CASE("penalty exponents are validated") {
  PenaltyParams p;
  p.validate();
  p.delta = Ratio::of(1, 4);
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.delta = Ratio::of(1, 20);
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.delta = Ratio::of(1, 5);
  p.epsilon = Ratio::of(0, 1);
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("penalty profile vanishes near its centre and grows linearly past the plateau") {
  const PenaltyParams params;
  const PenaltyProfile p = penalty_profile_from_draws(params, 3, 16, 20, {1});
  CHECK(p.i0 == 11);
  CHECK(p.y(p.i0) == 0.0);
  const double nd = std::pow(16.0, 0.2);
  CHECK(p.n_delta == doctest::Approx(nd));
  CHECK(p.scale == doctest::Approx(16.0 / std::log(16.0)));
  for (int i = 1; i <= 20; ++i) {
    const double dist = std::abs(p.i0 - i);
    if (dist <= 10 - nd) {
      CHECK(p.y(i) == 0.0);
    } else {
      CHECK(p.y(i) == doctest::Approx(p.scale * (dist - 10 + nd) / nd));
    }
  }
  // At distance H/2 the penalty equals the full scale.
  CHECK(penalty_value(1, 11, 20, nd, p.scale) == doctest::Approx(p.scale));
}

TEST_CASE("all-a penalty draws shift the centre down by M") {
  const auto dist = TwoPointDist{1, 2, Ratio::of(1, 1)};
  const PenaltyProfile p = penalty_profile(PenaltyParams{}, 2, 1024, 10, dist, 5, 0);
  CHECK(p.M == 2);
  CHECK(p.S_M == -2);
  CHECK(p.i0 == 3);
}

TEST_CASE("a full-height slab reproduces the cylinder flow") {
  const Lattice L(CylinderSpec{2, 5, 6});
  const auto dist = TwoPointDist{1, 2, Ratio::of(1, 2)};
  const SlabFamily slabs(L, 6);
  CHECK(slabs.count() == 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CapacityField f = sample_field(L, dist, 3, s);
    CHECK(slabs.sliced_flow(f.values, 1) == flow_value(L, f.values, cylinder_roles(L)));
  }
}

TEST_CASE("slab values dominate the cylinder flow and equal aN for constant fields") {
  const Lattice L(CylinderSpec{3, 3, 7});
  const auto dist = TwoPointDist{2, 5, Ratio::of(1, 3)};
  const auto role = cylinder_roles(L);
  for (int s = 1; s <= 7; ++s) {
    const SlabFamily slabs(L, s);
    CHECK(slabs.count() == 8 - s);
    const CapacityField flat = uniform_field(L, dist, 2);
    for (int i = 1; i <= slabs.count(); ++i) CHECK(slabs.sliced_flow(flat.values, i) == 2 * 16);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const CapacityField f = sample_field(L, dist, 11, k);
      const FlowValue phi = flow_value(L, f.values, role);
      for (int i = 1; i <= slabs.count(); ++i) CHECK(slabs.sliced_flow(f.values, i) >= phi);
    }
  }
}

TEST_CASE("slabs_containing matches the slab edge maps") {
  const Lattice L(CylinderSpec{2, 3, 6});
  const SlabFamily slabs(L, 2);
  for (std::uint32_t e = 0; e < L.num_edges(); ++e) {
    const auto [first, last] = slabs.slabs_containing(EdgeId{e});
    for (int i = 1; i <= slabs.count(); ++i) {
      const auto map = slabs.parent_edges(i);
      const bool in = std::find(map.begin(), map.end(), e) != map.end();
      CHECK(in == (i >= first && i <= last));
    }
  }
}

TEST_CASE("penalized minimum sits within the gap bound of the flow") {
  const auto dist = TwoPointDist{1, 2, Ratio::of(1, 2)};
  for (const CylinderSpec spec : {CylinderSpec{2, 8, 8}, CylinderSpec{3, 4, 6}}) {
    const Lattice L(spec);
    PenaltyParams params;
    params.slab_height = spec.H;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const CapacityField f = sample_field(L, dist, 21, s);
      const PenaltyProfile p = penalty_profile(params, spec.d, spec.n, spec.H, dist, 21, s);
      const PenalizedResult r = penalized_minimum(L, f, p, params);
      const double phi = static_cast<double>(flow_value(L, f.values, cylinder_roles(L)));
      CHECK(r.phi_tilde >= phi);
      CHECK(r.phi_tilde <= phi + p.scale * (1.0 + (p.M - 1) / p.n_delta) + 1e-9);
      CHECK(r.E_min.capacity == r.X[static_cast<std::size_t>(r.j0 - 1)]);
    }
  }
}

TEST_CASE("incremental edge updates agree with a full recompute") {
  const Lattice L(CylinderSpec{2, 4, 8});
  const auto dist = TwoPointDist{1, 3, Ratio::of(1, 2)};
  PenaltyParams params;
  params.slab_height = 3;
  const SlabFamily slabs(L, params.slab_height);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const CapacityField f = sample_field(L, dist, 9, s);
    const PenaltyProfile p = penalty_profile(params, 2, 4, 8, dist, 9, s);
    const PenalizedResult base = penalized_minimum(slabs, f.values, p);
    CHECK(penalized_with_profile(base, p, slabs.count()) == base.phi_tilde);
    for (std::uint32_t e = 0; e < L.num_edges(); ++e) {
      for (Capacity v : {dist.a, dist.b}) {
        const CapacityField g = flip_edge(f, EdgeId{e}, v);
        const double direct = penalized_minimum(slabs, g.values, p).phi_tilde;
        CHECK(penalized_with_edge(slabs, f.values, p, base, EdgeId{e}, v) == doctest::Approx(direct));
      }
    }
  }
}
