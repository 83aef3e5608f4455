#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fpp/oracle.hpp"

using namespace fpp;

namespace {

const TwoPointDist kHalf{1, 2, Ratio::of(1, 2)};

std::string var_of(const CylinderSpec& spec, const TwoPointDist& dist, Quantity q = Quantity::kPhi) {
  return mpq_str(exact_moments(spec, dist, q).variance);
}

}  // namespace

TEST_CASE("single edge moments are the Bernoulli moments") {
  const auto m = exact_moments(CylinderSpec{2, 0, 1}, kHalf, Quantity::kPhi);
  CHECK(mpq_str(m.mean) == "3/2");
  CHECK(mpq_str(m.variance) == "1/4");
  CHECK(var_of(CylinderSpec{2, 0, 1}, TwoPointDist{1, 4, Ratio::of(1, 3)}) == "2");
}

TEST_CASE("degenerate fields have zero variance") {
  CHECK(var_of(CylinderSpec{2, 1, 2}, TwoPointDist{1, 2, Ratio::of(1, 1)}) == "0");
  CHECK(var_of(CylinderSpec{2, 1, 2}, TwoPointDist{1, 2, Ratio::of(0, 1)}) == "0");
}

TEST_CASE("hand-derived moments on the smallest cylinders") {
  // n = 1, H = 1: the horizontal edges join terminals of one kind, so Φ = t_1 + t_2.
  const auto unit = exact_moments(CylinderSpec{2, 1, 1}, kHalf, Quantity::kPhi);
  CHECK(mpq_str(unit.mean) == "3");
  CHECK(mpq_str(unit.variance) == "1/2");
  CHECK(var_of(CylinderSpec{2, 1, 1}, TwoPointDist{1, 3, Ratio::of(1, 3)}) == "16/9");
  // Series column: Φ = min(t_1, t_2).
  const auto column = exact_moments(CylinderSpec{2, 0, 2}, kHalf, Quantity::kPhi);
  CHECK(mpq_str(column.mean) == "5/4");
  CHECK(mpq_str(column.variance) == "3/16");
}

TEST_CASE("exact moments agree with Monte Carlo on the unit square") {
  const QuantityEvaluator f(Quantity::kPhi, CylinderSpec{2, 1, 1}, kHalf);
  const int N = 20000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    const double v = f.sample(99, static_cast<std::uint64_t>(i));
    s += v;
    s2 += v * v;
  }
  const double mean = s / N;
  const double var = (s2 - N * mean * mean) / (N - 1);
  CHECK(std::abs(mean - 3.0) < 4 * std::sqrt(0.5 / N));
  CHECK(std::abs(var - 0.5) < 4 * std::sqrt(2.0 * 0.25 / N) + 0.05);
}

TEST_CASE("derivative norms of a single edge") {
  const QuantityEvaluator f(Quantity::kPhi, CylinderSpec{2, 0, 1}, TwoPointDist{1, 3, Ratio::of(1, 2)});
  const ExactNorms n = exact_derivative_norms(tabulate(f));
  REQUIRE(n.l1.size() == 1);
  CHECK(mpq_str(n.l1[0]) == "1");
  CHECK(mpq_str(n.l2_squared[0]) == "1");
}

TEST_CASE("chaos integral reproduces the variance exactly") {
  SUBCASE("single edge") {
    const auto c = exact_chaos_integral(CylinderSpec{2, 0, 1}, kHalf, Quantity::kPhi);
    CHECK(mpq_str(c.pivotal) == "1/4");
    CHECK(mpq_str(c.weighted) == "1/4");
  }
  SUBCASE("series column") {
    const auto c = exact_chaos_integral(CylinderSpec{2, 0, 2}, kHalf, Quantity::kPhi);
    CHECK(mpq_str(c.pivotal) == "3/16");
    CHECK(mpq_str(c.weighted) == "3/16");
  }
  SUBCASE("small cylinders and other quantities") {
    for (const CylinderSpec spec : {CylinderSpec{2, 1, 1}, CylinderSpec{2, 1, 2}, CylinderSpec{2, 2, 1}, CylinderSpec{2, 0, 5}}) {
      for (const TwoPointDist dist : {kHalf, TwoPointDist{2, 3, Ratio::of(1, 3)}, TwoPointDist{1, 3, Ratio::of(3, 4)}}) {
        const ExactTable t = tabulate(QuantityEvaluator(Quantity::kPhi, spec, dist));
        const auto m = exact_moments(t);
        const auto c = exact_chaos_integral(t);
        CHECK(c.weighted == m.variance);
        if (dist.b - dist.a == 1) {
          CHECK(c.pivotal == m.variance);
        } else {
          CHECK(c.pivotal >= m.variance);
        }
      }
    }
    const ExactTable tau = tabulate(QuantityEvaluator(Quantity::kTau, CylinderSpec{2, 1, 2}, kHalf));
    CHECK(exact_chaos_integral(tau).pivotal == exact_moments(tau).variance);
    const ExactTable lip = tabulate(QuantityEvaluator(Quantity::kPsiLip, CylinderSpec{2, 2, 2}, kHalf));
    CHECK(exact_chaos_integral(lip).weighted == exact_moments(lip).variance);
  }
}

TEST_CASE("oracle guards refuse large instances") {
  CHECK_THROWS_AS(exact_moments(CylinderSpec{2, 3, 4}, kHalf, Quantity::kPhi), GuardError);
  CHECK_THROWS_AS(exact_chaos_integral(CylinderSpec{2, 2, 3}, kHalf, Quantity::kPhi), GuardError);
  const Lattice L(CylinderSpec{2, 3, 4});
  const CapacityField f = uniform_field(L, kHalf, 1);
  CHECK_THROWS_AS(enumerate_min_cuts(L, f.values, cylinder_roles(L)), GuardError);
  CHECK_THROWS_AS(tabulate(QuantityEvaluator(Quantity::kPhiTilde, CylinderSpec{2, 2, 2}, kHalf)), DomainError);
}

TEST_CASE("min cut enumeration on a single column") {
  const Lattice L(CylinderSpec{2, 0, 2});
  const auto role = cylinder_roles(L);
  SUBCASE("unique minimum") {
    const std::vector<Capacity> caps{2, 1};
    const auto cuts = enumerate_min_cuts(L, caps, role);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0].edges == EdgeSet{EdgeId{1}});
    CHECK(cuts[0].capacity == 1);
  }
  SUBCASE("two equal minima") {
    const std::vector<Capacity> caps{1, 1};
    const auto cuts = enumerate_min_cuts(L, caps, role);
    CHECK(cuts.size() == 2);
    const auto g = enumerate_ground_truth(L, caps, kHalf, role);
    CHECK(g.essential.empty());
    CHECK(g.pivotal.empty());
    CHECK(g.canonical == EdgeSet{EdgeId{0}});
  }
}

TEST_CASE("enumerated ground truth matches the flow engine") {
  for (const CylinderSpec spec : {CylinderSpec{2, 1, 1}, CylinderSpec{2, 1, 3}, CylinderSpec{2, 2, 2}, CylinderSpec{3, 1, 1}, CylinderSpec{2, 4, 1}}) {
    const Lattice L(spec);
    for (const auto& role : {cylinder_roles(L), spec.H >= 2 ? anchored_roles(L) : cylinder_roles(L)}) {
      for (std::uint64_t s = 0; s < 20; ++s) {
        const CapacityField f = sample_field(L, kHalf, 5, s);
        const FlowResult r = solve_flow(L, f.values, role);
        const auto cuts = enumerate_min_cuts(L, f.values, role);
        REQUIRE(!cuts.empty());
        CHECK(cuts.front().capacity == r.value);
        const CutSet canon = canonical_min_cut(L, f.values, r);
        CHECK(std::any_of(cuts.begin(), cuts.end(), [&](const EnumeratedCut& c) { return c.edges == canon.edges; }));
        const auto g = enumerate_ground_truth(L, f.values, kHalf, role);
        CHECK(g.min_capacity == r.value);
        CHECK(g.canonical == canon.edges);
        CHECK(g.essential == essential_edges(L, r));
        CHECK(g.pivotal == pivotal_edges(L, f.values, kHalf, role, r));
      }
    }
  }
}
