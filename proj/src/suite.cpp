#include "fpp/suite.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <random>

#include "fpp/estimators.hpp"
#include "fpp/experiment.hpp"
#include "fpp/flow.hpp"
#include "fpp/format.hpp"
#include "fpp/lipschitz.hpp"
#include "fpp/oracle.hpp"
#include "fpp/parallel.hpp"
#include "fpp/surface.hpp"

namespace fpp {

namespace {

// Seeds for instance selection; sample capacities always come from Philox streams.
constexpr std::uint64_t kSuiteSeed = 20240611;

std::string num(double v) { return fmt_double(v); }
std::string num(std::uint64_t v) {
  std::string s;
  append_int(s, v);
  return s;
}

std::string fixed6(double v) {
  std::string s;
  append_fixed(s, v, 6);
  return s;
}

struct Detail {
  std::string text;
  Detail& add(const std::string& key, const std::string& value) {
    if (!text.empty()) text += ", ";
    text += key + "=" + value;
    return *this;
  }
};

struct RandomInstance {
  CylinderSpec spec;
  TwoPointDist dist;
};

RandomInstance random_instance(std::mt19937_64& rng, int max_n, int max_H) {
  RandomInstance r;
  r.spec.d = 2 + static_cast<int>(rng() % 2);
  const int n_cap = r.spec.d == 3 ? std::min(max_n, 5) : max_n;
  r.spec.n = static_cast<int>(rng() % static_cast<std::uint64_t>(n_cap + 1));
  r.spec.H = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_H));
  r.dist.a = 1 + static_cast<Capacity>(rng() % 3);
  r.dist.b = r.dist.a + 1 + static_cast<Capacity>(rng() % 4);
  r.dist.p_a = Ratio::of(1 + static_cast<std::int64_t>(rng() % 7), 8);
  return r;
}

// 1: capacity of the canonical cut equals the flow value, for both boundary conventions.
CriterionResult duality(const SuiteOptions& opt) {
  CriterionResult res{1, "duality", true, "", 0, ""};
  std::mt19937_64 rng(kSuiteSeed + 1);
  std::vector<RandomInstance> inst;
  for (int k = 0; k < 1000; ++k) inst.push_back(random_instance(rng, 8, 16));
  std::vector<std::uint8_t> bad(inst.size(), 0);
  parallel_for(inst.size(), opt.jobs, [&](std::size_t k) {
    const Lattice L(inst[k].spec);
    const CapacityField f = sample_field(L, inst[k].dist, kSuiteSeed, k);
    std::vector<std::vector<std::uint8_t>> roles{cylinder_roles(L)};
    if (inst[k].spec.n >= 1 && inst[k].spec.H >= 2) roles.push_back(anchored_roles(L));
    for (const auto& role : roles) {
      const FlowResult r = solve_flow(L, f.values, role);
      const CutSet cut = canonical_min_cut(L, f.values, r);
      if (cut.capacity != r.value || !validate_cutset(L, cut.edges, role)) bad[k] = 1;
    }
  });
  const auto failures = static_cast<std::uint64_t>(std::count(bad.begin(), bad.end(), 1));
  res.pass = failures == 0;
  res.detail = Detail{}.add("instances", num(std::uint64_t{inst.size()})).add("mismatches", num(failures)).text;
  return res;
}

// Every cylinder with at most 20 edges, with d = 2 or 3.
std::vector<CylinderSpec> tiny_family() {
  std::vector<CylinderSpec> v;
  for (int d = 2; d <= 3; ++d) {
    for (int n = 0; n <= 20; ++n) {
      for (int H = 1; H <= 20; ++H) {
        const CylinderSpec s{d, n, H};
        if (s.edge_count() > 20) break;
        if (d == 3 && n == 0) continue;  // same column as d = 2
        v.push_back(s);
      }
    }
  }
  return v;
}

// Standard error of the unbiased sample variance over `samples` draws, from the exact second and
// fourth central moments. The plug-in estimate collapses to 0 when every draw hits the modal value,
// which happens on long columns where Var f is of order 2^-H.
double exact_variance_stderr(const ExactTable& t, const ExactMoments& m, std::uint64_t samples) {
  const long double p = t.dist.p_a.to_double(), q = 1 - p;
  const long double mean = m.mean.get_d();
  long double mu2 = 0, mu4 = 0;
  for (std::size_t mask = 0; mask < t.values.size(); ++mask) {
    const int high = std::popcount(mask);
    const long double w = std::pow(p, t.bits - high) * std::pow(q, high);
    const long double c = static_cast<long double>(t.values[mask]) - mean;
    mu2 += w * c * c;
    mu4 += w * c * c * c * c;
  }
  const long double N = static_cast<long double>(samples);
  return static_cast<double>(std::sqrt((mu4 - (N - 3) / (N - 1) * mu2 * mu2) / N));
}

// 2: Monte Carlo variance against exact moments, and the flow engine's sets against enumeration.
CriterionResult oracle_equivalence(const SuiteOptions& opt) {
  CriterionResult res{2, "oracle equivalence", true, "", 0, ""};
  const TwoPointDist mc_dist{1, 2, Ratio::of(1, 2)};
  const std::vector<TwoPointDist> gt_dists{{1, 2, Ratio::of(1, 2)}, {1, 3, Ratio::of(1, 3)}, {2, 3, Ratio::of(3, 4)}};
  const std::vector<CylinderSpec> family = tiny_family();
  std::uint64_t mc_fail = 0, plugin_fail = 0, set_fail = 0, cuts_checked = 0;
  double worst_z = 0;
  for (const CylinderSpec& spec : family) {
    const ExactTable table = tabulate(QuantityEvaluator(Quantity::kPhi, spec, mc_dist), {}, opt.jobs);
    const ExactMoments m = exact_moments(table);
    MonteCarloPlan plan;
    plan.spec = spec;
    plan.dist = mc_dist;
    plan.n_samples = 100000;
    plan.master_seed = kSuiteSeed + 2;
    plan.jobs = opt.jobs;
    const Estimate e = estimate_variance(plan);
    const double diff = std::abs(e.variance - m.variance.get_d());
    const double z = diff / exact_variance_stderr(table, m, plan.n_samples);
    worst_z = std::max(worst_z, z);
    mc_fail += !(z <= 4);
    plugin_fail += !(diff <= 4 * e.stderr_of_variance);

    const Lattice L(spec);
    std::vector<std::vector<std::uint8_t>> roles{cylinder_roles(L)};
    if (spec.n >= 1 && spec.H >= 2) roles.push_back(anchored_roles(L));
    for (const TwoPointDist& dist : gt_dists) {
      for (std::uint64_t s = 0; s < 8; ++s) {
        const CapacityField f = sample_field(L, dist, kSuiteSeed + 2, s);
        for (const auto& role : roles) {
          const CutGroundTruth g = enumerate_ground_truth(L, f.values, dist, role);
          const FlowResult r = solve_flow(L, f.values, role);
          const CutSet cut = canonical_min_cut(L, f.values, r);
          const bool ok = r.value == g.min_capacity && cut.edges == g.canonical &&
                          essential_edges(L, r) == g.essential &&
                          pivotal_edges(L, f.values, dist, role, r) == g.pivotal;
          set_fail += !ok;
          ++cuts_checked;
        }
      }
    }
  }
  res.pass = mc_fail == 0 && set_fail == 0;
  res.detail = Detail{}
                   .add("instances", num(std::uint64_t{family.size()}))
                   .add("variance_outside_4se", num(mc_fail))
                   .add("max_z", num(worst_z))
                   .add("outside_4_plugin_se", num(plugin_fail))
                   .add("set_checks", num(cuts_checked))
                   .add("set_mismatches", num(set_fail))
                   .text;
  return res;
}

// 3: Var(t_e) ∫ E|P_0 ∩ P_t| dt = Var f as exact rationals. The pivotal form needs b - a = 1;
// the Δ-weighted form is checked on every distribution.
CriterionResult chaos_identity(const SuiteOptions& opt) {
  CriterionResult res{3, "chaos identity", true, "", 0, ""};
  struct Case {
    CylinderSpec spec;
    Quantity q;
    TwoPointDist dist;
  };
  const std::vector<CylinderSpec> specs{{2, 0, 1}, {2, 0, 3}, {2, 0, 6}, {2, 0, 12}, {2, 1, 1},
                                        {2, 1, 2}, {2, 1, 3}, {2, 2, 1}, {2, 3, 1},  {3, 1, 1}};
  const std::vector<TwoPointDist> unit{{1, 2, Ratio::of(1, 2)}, {2, 3, Ratio::of(1, 3)}, {3, 4, Ratio::of(3, 4)}};
  const std::vector<TwoPointDist> wide{{1, 3, Ratio::of(1, 2)}, {1, 4, Ratio::of(2, 3)}};
  std::vector<Case> unit_cases, wide_cases;
  for (const CylinderSpec& s : specs) {
    for (const TwoPointDist& d : unit) unit_cases.push_back({s, Quantity::kPhi, d});
    wide_cases.push_back({s, Quantity::kPhi, wide[unit_cases.size() % wide.size()]});
  }
  for (const TwoPointDist& d : unit) {
    unit_cases.push_back({{2, 1, 2}, Quantity::kTau, d});
    unit_cases.push_back({{2, 1, 3}, Quantity::kTau, d});
    unit_cases.push_back({{2, 1, 2}, Quantity::kPsiLip, d});
  }
  std::uint64_t pivotal_fail = 0, weighted_fail = 0, wide_pivotal_equal = 0;
  auto check = [&](const Case& c, bool unit_gap) {
    const ExactTable t = tabulate(QuantityEvaluator(c.q, c.spec, c.dist), {}, opt.jobs);
    const ExactMoments m = exact_moments(t);
    const ExactChaos ch = exact_chaos_integral(t);
    weighted_fail += ch.weighted != m.variance;
    if (unit_gap) pivotal_fail += ch.pivotal != m.variance;
    else wide_pivotal_equal += ch.pivotal == m.variance;
  };
  for (const Case& c : unit_cases) check(c, true);
  for (const Case& c : wide_cases) check(c, false);
  res.pass = pivotal_fail == 0 && weighted_fail == 0;
  res.detail = Detail{}
                   .add("unit_gap_instances", num(std::uint64_t{unit_cases.size()}))
                   .add("pivotal_mismatches", num(pivotal_fail))
                   .add("weighted_instances", num(std::uint64_t{unit_cases.size() + wide_cases.size()}))
                   .add("weighted_mismatches", num(weighted_fail))
                   .add("wide_gap_pivotal_equal", num(wide_pivotal_equal))
                   .text;
  return res;
}

// 4: non-increasing pivotal overlap and essential ≤ pivotal along a 6-point grid.
CriterionResult chaos_monotonicity(const SuiteOptions& opt) {
  CriterionResult res{4, "chaos monotonicity", true, "", 0, ""};
  MonteCarloPlan plan;
  plan.spec = CylinderSpec{2, 6, 12};
  plan.dist = TwoPointDist{1, 2, Ratio::of(1, 2)};
  plan.n_samples = 4000;
  plan.master_seed = kSuiteSeed + 4;
  plan.jobs = opt.jobs;
  const std::vector<Ratio> grid{Ratio::of(0, 1), Ratio::of(1, 5), Ratio::of(2, 5),
                                Ratio::of(3, 5), Ratio::of(4, 5), Ratio::of(1, 1)};
  const ChaosCurve c = chaos_curve(plan, grid);
  std::uint64_t rises = 0, order = 0;
  std::string curve;
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    const ChaosPoint& p = c.points[k];
    if (k > 0 && p.drop < -4 * p.drop_stderr) ++rises;
    if (p.essential.mean > p.pivotal.mean) ++order;
    if (!curve.empty()) curve += ' ';
    curve += p.t.str() + ":" + num(p.pivotal.mean);
  }
  res.pass = rises == 0 && order == 0;
  res.detail = Detail{}
                   .add("samples", num(plan.n_samples))
                   .add("rises_beyond_4se", num(rises))
                   .add("essential_above_pivotal", num(order))
                   .add("curve", "[" + curve + "]")
                   .text;
  return res;
}

struct SweepTotals {
  std::uint64_t instances = 0;
  std::uint64_t gap = 0, slab = 0, full_slab = 0, size = 0;
  double worst_gap_ratio = 0;
  std::string slab_heights;
  std::vector<std::string> logged;
};

// Shared by criteria 5–7: one 10⁴-instance penalization sweep.
const SweepTotals& penalization_totals(const SuiteOptions& opt) {
  static std::optional<SweepTotals> cache;
  if (cache) return *cache;
  struct Part {
    CylinderSpec spec;
    std::uint64_t samples;
  };
  const std::vector<Part> parts{{{2, 8, 16}, 4000}, {{2, 16, 32}, 3000}, {{3, 4, 8}, 3000}};
  SweepTotals t;
  for (const Part& part : parts) {
    MonteCarloPlan plan;
    plan.quantity = Quantity::kPhiTilde;
    plan.spec = part.spec;
    plan.dist = TwoPointDist{1, 2, Ratio::of(1, 2)};
    plan.n_samples = part.samples;
    plan.master_seed = kSuiteSeed + 5;
    plan.jobs = opt.jobs;
    const PenalizationReport r = penalization_sweep(plan);
    t.instances += part.samples;
    t.gap += r.gap_violations;
    t.slab += r.slab_identity_violations;
    t.full_slab += r.full_slab_identity_violations;
    t.size += r.size_violations;
    t.worst_gap_ratio = std::max(t.worst_gap_ratio, r.max_gap / r.bound);
    if (!t.slab_heights.empty()) t.slab_heights += ' ';
    t.slab_heights += std::to_string(part.spec.d) + "/" + std::to_string(part.spec.n) + ":" +
                      std::to_string(r.slab_height);
    for (std::uint64_t s : r.violating_samples) {
      t.logged.push_back(std::to_string(part.spec.d) + "/" + std::to_string(part.spec.n) + "#" + std::to_string(s));
    }
  }
  cache = std::move(t);
  return *cache;
}

std::string logged_samples(const SweepTotals& t) {
  std::string s;
  for (std::size_t k = 0; k < std::min<std::size_t>(t.logged.size(), 10); ++k) s += (k ? " " : "") + t.logged[k];
  return "[" + s + "]";
}

CriterionResult penalization_bound(const SuiteOptions& opt) {
  CriterionResult res{5, "penalization bound", true, "", 0, ""};
  const SweepTotals& t = penalization_totals(opt);
  res.pass = t.gap == 0;
  res.detail = Detail{}
                   .add("instances", num(t.instances))
                   .add("violations", num(t.gap))
                   .add("max_gap_over_bound", fixed6(t.worst_gap_ratio))
                   .text;
  return res;
}

CriterionResult slab_identity(const SuiteOptions& opt) {
  CriterionResult res{6, "slab identity", true, "", 0, ""};
  const SweepTotals& t = penalization_totals(opt);
  res.pass = t.slab == 0 && t.full_slab == 0;
  res.detail = Detail{}
                   .add("instances", num(t.instances))
                   .add("slab_heights", "[" + t.slab_heights + "]")
                   .add("violations_full_height", num(t.full_slab))
                   .add("violations_twice_extent", num(t.slab))
                   .add("logged", logged_samples(t))
                   .text;
  return res;
}

CriterionResult size_bound(const SuiteOptions& opt) {
  CriterionResult res{7, "size bound", true, "", 0, ""};
  const SweepTotals& t = penalization_totals(opt);
  res.pass = t.size == 0;
  res.detail = Detail{}.add("instances", num(t.instances)).add("violations", num(t.size)).text;
  return res;
}

// 8: patched cut-sets, ΔA(i) ⊆ E ∩ U_i and the layer identity on 1,000 minimal cuts.
CriterionResult chimney(const SuiteOptions& opt) {
  CriterionResult res{8, "chimney scan", true, "", 0, ""};
  std::uint64_t cuts = 0, violations = 0;
  for (const CylinderSpec& spec : {CylinderSpec{2, 8, 16}, CylinderSpec{3, 4, 8}}) {
    MonteCarloPlan plan;
    plan.spec = spec;
    plan.dist = TwoPointDist{1, 2, Ratio::of(1, 2)};
    plan.n_samples = 250;  // source-side and sink-side cut per sample
    plan.master_seed = kSuiteSeed + 8;
    plan.jobs = opt.jobs;
    const ChimneyReport r = chimney_statistics(plan);
    cuts += r.cuts;
    violations += r.violations;
  }
  res.pass = violations == 0 && cuts >= 1000;
  res.detail = Detail{}.add("cuts", num(cuts)).add("violations", num(violations)).text;
  return res;
}

// 9: Newman–Piza − 4σ ≤ Var ≤ Efron–Stein + 4σ.
CriterionResult sandwich(const SuiteOptions& opt) {
  CriterionResult res{9, "variance sandwich", true, "", 0, ""};
  Detail det;
  for (int n : {4, 8, 16}) {
    MonteCarloPlan plan;
    plan.spec = CylinderSpec{2, n, 2 * n};
    plan.dist = TwoPointDist{1, 2, Ratio::of(1, 2)};
    plan.n_samples = 10000;
    plan.master_seed = kSuiteSeed + 9;
    plan.jobs = opt.jobs;
    const VarianceBounds b = variance_bounds(plan);
    const double v = b.variance.variance;
    const double lo = b.newman_piza.mean - 4 * std::hypot(b.newman_piza.stderr_of_mean, b.variance.stderr_of_variance);
    const double hi = b.efron_stein.mean + 4 * std::hypot(b.efron_stein.stderr_of_mean, b.variance.stderr_of_variance);
    const bool ok = lo <= v && v <= hi;
    res.pass = res.pass && ok;
    det.add("n" + std::to_string(n), "[" + num(b.newman_piza.mean) + " <= " + num(v) + " <= " +
                                          num(b.efron_stein.mean) + (ok ? "]" : " FAIL]"));
  }
  res.detail = det.text;
  return res;
}

// 10: layered min-cut solver against exhaustive search, and anchoring never lowers the value.
CriterionResult lipschitz(const SuiteOptions& opt) {
  CriterionResult res{10, "lipschitz solver", true, "", 0, ""};
  const std::vector<CylinderSpec> shapes{{2, 1, 2}, {2, 1, 4}, {2, 2, 3}, {2, 3, 3}, {2, 4, 2}, {2, 5, 2}, {3, 1, 3}, {3, 2, 1}};
  const std::vector<TwoPointDist> dists{{1, 2, Ratio::of(1, 2)}, {1, 5, Ratio::of(1, 3)}, {2, 3, Ratio::of(3, 4)}};
  constexpr std::size_t kInstances = 500;
  std::vector<std::uint8_t> mismatch(kInstances, 0), below(kInstances, 0);
  parallel_for(kInstances, opt.jobs, [&](std::size_t k) {
    const CylinderSpec& spec = shapes[k % shapes.size()];
    const TwoPointDist& dist = dists[(k / shapes.size()) % dists.size()];
    const VertexWeightField w = sample_vertex_weights(spec, dist, kSuiteSeed + 10, k);
    const LipschitzSolution free = solve_lipschitz(w);
    const int pin = spec.H / 2;
    const LipschitzSolution anchored = solve_anchored_lipschitz(w, pin);
    mismatch[k] = free.value != brute_force_lipschitz(w) ||
                  anchored.value != brute_force_anchored_lipschitz(w, pin) ||
                  evaluate(w, free.psi) != free.value || !is_lipschitz(spec, free.psi);
    below[k] = anchored.value < free.value;
  });
  const auto m = static_cast<std::uint64_t>(std::count(mismatch.begin(), mismatch.end(), 1));
  const auto b = static_cast<std::uint64_t>(std::count(below.begin(), below.end(), 1));
  res.pass = m == 0 && b == 0;
  res.detail = Detail{}
                   .add("instances", num(std::uint64_t{kInstances}))
                   .add("mismatches", num(m))
                   .add("anchored_below_free", num(b))
                   .text;
  return res;
}

// 11: boundary avoidance of the winning slab and shift regularity of the hit probabilities.
CriterionResult boundary(const SuiteOptions& opt) {
  CriterionResult res{11, "boundary avoidance", true, "", 0, ""};
  MonteCarloPlan plan;
  plan.quantity = Quantity::kPhiTilde;
  const int n = 16;
  plan.spec = CylinderSpec{2, n, 4 * n};
  plan.dist = TwoPointDist{1, 2, Ratio::of(1, 2)};
  plan.n_samples = 10000;
  plan.master_seed = kSuiteSeed + 11;
  plan.jobs = opt.jobs;
  const InfluenceProfile p = influence_profile(plan);
  const double bottom_limit = 2 / std::sqrt(static_cast<double>(n)) + 4 * p.bottom_stderr;
  const double shift_limit = 2 / std::pow(static_cast<double>(n), plan.penalty.epsilon.to_double() / 2);
  const bool bottom_ok = p.bottom <= bottom_limit;
  const bool shift_ok = p.shift_excess <= shift_limit;
  res.pass = bottom_ok && shift_ok;
  res.detail = Detail{}
                   .add("slab_height", std::to_string(p.slab_height))
                   .add("P(j0<=2)", num(p.bottom))
                   .add("limit", num(bottom_limit))
                   .add("shift_max", num(p.shift_max))
                   .add("shift_minus_4se", num(p.shift_excess))
                   .add("shift_limit", num(shift_limit))
                   .text;
  return res;
}

// 12: Φ(A, H) ≥ Σ_i Φ(A_i, H) over sub-cylinders of side m = n/2.
CriterionResult subadditivity(const SuiteOptions& opt) {
  CriterionResult res{12, "subadditivity", true, "", 0, ""};
  std::uint64_t instances = 0, violations = 0;
  Detail det;
  for (const CylinderSpec& spec : {CylinderSpec{2, 8, 16}, CylinderSpec{2, 16, 32}, CylinderSpec{3, 4, 8}}) {
    MonteCarloPlan plan;
    plan.spec = spec;
    plan.dist = TwoPointDist{1, 3, Ratio::of(1, 2)};
    plan.n_samples = spec.n == 16 ? 300 : 350;
    plan.master_seed = kSuiteSeed + 12;
    plan.jobs = opt.jobs;
    const SubadditivityReport r = subadditivity_defect(plan, spec.n / 2);
    instances += plan.n_samples;
    violations += r.violations;
    det.add("mean_defect_per_area_d" + std::to_string(spec.d) + "n" + std::to_string(spec.n), num(r.defect_per_area));
  }
  res.pass = violations == 0;
  res.detail = Detail{}.add("instances", num(instances)).add("violations", num(violations)).text + ", " + det.text;
  return res;
}

// 13: Var(Φ) log n / n^{d-1} trend, rendered twice and compared byte for byte.
CriterionResult trend(const SuiteOptions& opt) {
  CriterionResult res{13, "variance trend", true, "", 0, ""};
  ExperimentConfig cfg;
  cfg.command = "variance";
  cfg.d = 2;
  cfg.n = {4, 8, 16, 32};
  cfg.aspect = Ratio::of(2, 1);
  cfg.n_samples = 2000;
  cfg.master_seed = kSuiteSeed + 13;
  cfg.jobs = opt.jobs;
  const std::string first = render_csv(cfg, run_experiment(cfg));
  const std::string second = render_csv(cfg, run_experiment(cfg));
  res.pass = !first.empty() && first == second;
  res.artifact = first;
  res.detail = Detail{}
                   .add("rows", num(static_cast<std::uint64_t>(std::count(first.begin(), first.end(), '\n') - 1)))
                   .add("byte_identical", first == second ? "yes" : "no")
                   .text;
  return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const SuiteOptions& options) {
  const std::vector<std::function<CriterionResult(const SuiteOptions&)>> all{
      duality, oracle_equivalence, chaos_identity, chaos_monotonicity, penalization_bound, slab_identity, size_bound,
      chimney, sandwich,           lipschitz,      boundary,           subadditivity,      trend};
  std::vector<CriterionResult> out;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = all[k](options);
    } catch (const std::exception& e) {
      r = CriterionResult{id, "error", false, e.what(), 0, ""};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.progress) *options.progress << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::string s = r.pass ? "PASS" : "FAIL";
  s += " criterion ";
  append_int(s, r.id);
  s += " (" + r.title + ") ";
  s += r.detail;
  s += " [";
  append_fixed(s, r.seconds, 1);
  s += "s]";
  return s;
}

}  // namespace fpp
