#include <cmath>

#include "doctest.h"
#include "fpp/estimators.hpp"
#include "fpp/oracle.hpp"

using namespace fpp;

namespace {

MonteCarloPlan plan_for(CylinderSpec spec, TwoPointDist dist, std::uint64_t n, Quantity q = Quantity::kPhi) {
  MonteCarloPlan p;
  p.quantity = q;
  p.spec = spec;
  p.dist = dist;
  p.n_samples = n;
  p.master_seed = 2024;
  return p;
}

const TwoPointDist kHalf{1, 2, Ratio::of(1, 2)};

}  // namespace

TEST_CASE("summary statistics") {
  const std::vector<double> xs{1, 2, 3, 4};
  const Estimate e = summarize(xs);
  CHECK(e.mean == 2.5);
  CHECK(e.variance == doctest::Approx(5.0 / 3));
  CHECK(e.stderr_of_mean == doctest::Approx(std::sqrt(5.0 / 12)));
  CHECK_THROWS_AS(estimate_variance(plan_for({2, 1, 1}, kHalf, 1)), DomainError);
}

TEST_CASE("degenerate field has zero variance") {
  const Estimate e = estimate_variance(plan_for({2, 3, 4}, TwoPointDist{1, 2, Ratio::of(1, 1)}, 50));
  CHECK(e.variance == 0.0);
  CHECK(e.mean == 4.0);
}

TEST_CASE("single edge variance is the Bernoulli variance") {
  const TwoPointDist dist{1, 4, Ratio::of(1, 3)};
  const Estimate e = estimate_variance(plan_for({2, 0, 1}, dist, 20000));
  CHECK(std::abs(e.variance - 2.0) <= 4 * e.stderr_of_variance);
}

TEST_CASE("Monte Carlo variance matches the exact oracle on tiny instances") {
  for (const CylinderSpec spec : {CylinderSpec{2, 1, 2}, CylinderSpec{2, 2, 1}, CylinderSpec{2, 0, 3}}) {
    for (Quantity q : {Quantity::kPhi, Quantity::kTau}) {
      if (q == Quantity::kTau && spec.H < 2) continue;
      const Estimate e = estimate_variance(plan_for(spec, kHalf, 20000, q));
      const double exact = exact_moments(spec, kHalf, q).variance.get_d();
      CHECK(std::abs(e.variance - exact) <= 4 * e.stderr_of_variance);
    }
  }
  const CylinderSpec lip{2, 2, 2};
  const Estimate e = estimate_variance(plan_for(lip, kHalf, 20000, Quantity::kPsiLip));
  CHECK(std::abs(e.variance - exact_moments(lip, kHalf, Quantity::kPsiLip).variance.get_d()) <= 4 * e.stderr_of_variance);
}

TEST_CASE("Efron–Stein is exact for a single edge and matches exact norms") {
  const TwoPointDist dist{1, 3, Ratio::of(1, 4)};
  const Estimate single = efron_stein_rhs(plan_for({2, 0, 1}, dist, 100));
  CHECK(single.mean == doctest::Approx(4.0 * 3 / 16));
  CHECK(single.stderr_of_mean == doctest::Approx(0.0));

  const CylinderSpec spec{2, 1, 2};
  const ExactNorms norms = exact_derivative_norms(tabulate(QuantityEvaluator(Quantity::kPhi, spec, kHalf)));
  mpq_class rhs = 0;
  for (const auto& l2 : norms.l2_squared) rhs += 4 * l2;
  rhs *= mpq_class(1, 4);
  const Estimate es = efron_stein_rhs(plan_for(spec, kHalf, 20000));
  CHECK(std::abs(es.mean - rhs.get_d()) <= 4 * es.stderr_of_mean);
}

TEST_CASE("Newman–Piza on a single column has a closed form") {
  // The canonical cut carries b only when the whole column is at b, and then it is the bottom edge.
  const VarianceBounds v = variance_bounds(plan_for({2, 0, 2}, kHalf, 40000));
  CHECK(std::abs(v.newman_piza.mean - 1.0 / 64) <= 4 * v.newman_piza.stderr_of_mean + 1e-12);
  CHECK(newman_piza_lhs(plan_for({2, 2, 3}, TwoPointDist{1, 2, Ratio::of(1, 1)}, 20)).mean == 0.0);
}

TEST_CASE("variance lies between the Newman–Piza and Efron–Stein estimates") {
  for (Quantity q : {Quantity::kPhi, Quantity::kTau, Quantity::kPhiTilde}) {
    MonteCarloPlan p = plan_for({2, 4, 8}, kHalf, 1500, q);
    const VarianceBounds v = variance_bounds(p);
    const double s1 = std::hypot(v.variance.stderr_of_variance, v.efron_stein.stderr_of_mean);
    const double s2 = std::hypot(v.variance.stderr_of_variance, v.newman_piza.stderr_of_mean);
    CHECK(v.variance.variance <= v.efron_stein.mean + 4 * s1);
    CHECK(v.newman_piza.mean - 4 * s2 <= v.variance.variance);
  }
}

TEST_CASE("chaos curve on a single edge is constant") {
  const std::vector<Ratio> grid{Ratio::of(0, 1), Ratio::of(1, 2), Ratio::of(1, 1)};
  const ChaosCurve c = chaos_curve(plan_for({2, 0, 1}, kHalf, 200), grid);
  for (const auto& pt : c.points) CHECK(pt.pivotal.mean == 1.0);
  CHECK(c.integral == doctest::Approx(0.25));
}

TEST_CASE("chaos curve properties on a small cylinder") {
  std::vector<Ratio> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(Ratio::of(k, 10));
  const MonteCarloPlan p = plan_for({2, 2, 2}, kHalf, 6000);
  const ChaosCurve c = chaos_curve(p, grid);
  CHECK(c.points.front().pivotal.mean >= c.points.back().pivotal.mean);
  for (std::size_t k = 1; k < c.points.size(); ++k) CHECK(c.points[k].drop >= -4 * c.points[k].drop_stderr);
  for (const auto& pt : c.points) CHECK(pt.essential.mean <= pt.pivotal.mean);
  // b - a = 1, so both forms integrate to the variance.
  const double exact = exact_moments(p.spec, kHalf, Quantity::kPhi).variance.get_d();
  CHECK(std::abs(c.integral - exact) <= 4 * c.integral_stderr + 0.01);
  CHECK(std::abs(c.weighted_integral - exact) <= 4 * c.weighted_integral_stderr + 0.01);
}

TEST_CASE("influence profile invariants") {
  MonteCarloPlan p = plan_for({2, 6, 12}, kHalf, 300, Quantity::kPhiTilde);
  p.penalty.slab_height = 6;
  InfluenceOptions opt;
  opt.derivative_norms = true;
  const InfluenceProfile prof = influence_profile(p, opt);
  for (double h : prof.hit) CHECK((h >= 0 && h <= 1));
  CHECK(prof.hit_sum <= 2.0 * 7 + 1e-9);
  REQUIRE(prof.l1.size() == prof.l2.size());
  for (std::size_t j = 0; j < prof.l1.size(); ++j) CHECK(prof.l1[j] <= prof.l2[j] + 1e-12);
  std::uint64_t total = 0;
  for (auto c : prof.j0_histogram) total += c;
  CHECK(total == p.n_samples);
  CHECK(prof.shift_max <= 1.0);
  CHECK(talagrand_rhs(prof.l1, prof.l2) >= 0);
}

TEST_CASE("Talagrand sum on dictator and constant functions") {
  const std::vector<double> dict{0.5};
  CHECK(talagrand_rhs(dict, dict) == doctest::Approx(0.25));
  const std::vector<double> zero{0.0, 0.0};
  CHECK(talagrand_rhs(zero, zero) == 0.0);
  CHECK(penalty_bit_derivative_bound(2, 16, Ratio::of(1, 5)) ==
        doctest::Approx(2 * 4.0 / (std::pow(16.0, 0.2) * std::log(16.0))));
}

TEST_CASE("localization fraction is non-increasing in C") {
  const std::vector<int> C{0, 1, 2, 4, 8};
  const LocalizationReport r = anchored_localization(plan_for({2, 6, 12}, kHalf, 300, Quantity::kTau), C);
  for (std::size_t k = 1; k < C.size(); ++k) CHECK(r.outside_fraction[k] <= r.outside_fraction[k - 1]);
  CHECK(r.outside_fraction.back() == 0.0);
}

TEST_CASE("sub-cylinder boxes partition the base") {
  const CylinderSpec spec{3, 7, 3};
  const auto boxes = subcylinder_boxes(spec, 3);
  CHECK(boxes.size() == 4);
  int covered = 0;
  for (const auto& [lo, hi] : boxes) covered += (hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1);
  CHECK(covered == 64);
  CHECK(subcylinder_boxes(spec, 7).size() == 1);
  CHECK_THROWS_AS(subcylinder_boxes(spec, 8), DomainError);
}

TEST_CASE("subadditivity defects are non-negative") {
  const SubadditivityReport whole = subadditivity_defect(plan_for({2, 6, 6}, kHalf, 50), 6);
  CHECK(whole.defect.mean == 0.0);
  CHECK(whole.defect.variance == 0.0);
  const SubadditivityReport flat = subadditivity_defect(plan_for({3, 4, 4}, TwoPointDist{1, 2, Ratio::of(1, 1)}, 10), 2);
  CHECK(flat.defect.mean == 0.0);
  const SubadditivityReport r = subadditivity_defect(plan_for({3, 4, 4}, kHalf, 100), 2);
  CHECK(r.violations == 0);
  CHECK(r.defect.mean >= 0);
}

TEST_CASE("chimney statistics on random cuts") {
  const ChimneyReport r = chimney_statistics(plan_for({2, 8, 12}, TwoPointDist{1, 3, Ratio::of(1, 2)}, 100));
  CHECK(r.cuts == 200);
  CHECK(r.violations == 0);
  CHECK(r.empty_A == 0);
  CHECK(r.max_extent >= 1);
}

TEST_CASE("penalization sweep has no violations") {
  MonteCarloPlan p = plan_for({2, 8, 16}, kHalf, 200, Quantity::kPhiTilde);
  const PenalizationReport r = penalization_sweep(p);
  CHECK(r.gap_violations == 0);
  CHECK(r.slab_identity_violations == 0);
  CHECK(r.full_slab_identity_violations == 0);
  CHECK(r.size_violations == 0);
  CHECK(r.slab_height == std::min(16, 2 * r.max_extent));
}

TEST_CASE("estimates are reproducible and independent of the worker count") {
  MonteCarloPlan p = plan_for({2, 4, 8}, kHalf, 600);
  const VarianceBounds a = variance_bounds(p);
  p.jobs = 3;
  const VarianceBounds b = variance_bounds(p);
  CHECK(a.variance.variance == b.variance.variance);
  CHECK(a.efron_stein.mean == b.efron_stein.mean);
  CHECK(a.newman_piza.mean == b.newman_piza.mean);
}
