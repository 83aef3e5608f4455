#include "fpp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>

#include "fpp/flow.hpp"
#include "fpp/parallel.hpp"
#include "fpp/surface.hpp"

namespace fpp {

namespace {

// Runs make(i) for every sample in blocks, folding each block in index order.
template <typename Record, typename Make, typename Fold>
void sample_fold(std::uint64_t n, int jobs, Make&& make, Fold&& fold) {
  constexpr std::uint64_t kBlock = 256;
  std::vector<Record> slots;
  for (std::uint64_t start = 0; start < n; start += kBlock) {
    const std::uint64_t count = std::min(kBlock, n - start);
    slots.assign(count, Record{});
    parallel_for(count, jobs, [&](std::size_t k) { slots[k] = make(start + k); });
    for (std::uint64_t k = 0; k < count; ++k) fold(start + k, slots[k]);
  }
}

double edge_variance(const TwoPointDist& dist) { return dist.edge_variance().to_double(); }

double pq(const TwoPointDist& dist) {
  const double p = dist.p_a.to_double();
  return p * (1 - p);
}

bool is_flow_quantity(Quantity q) { return q == Quantity::kPhi || q == Quantity::kTau; }

std::vector<std::uint8_t> roles_for(const Lattice& L, Quantity q) {
  return q == Quantity::kTau ? anchored_roles(L) : cylinder_roles(L);
}

int resolve_slab_height(const MonteCarloPlan& plan) {
  if (plan.penalty.slab_height != 0) return plan.penalty.slab_height;
  return pilot_slab_height(plan, std::min<std::uint64_t>(plan.n_samples, 200));
}

double binomial_stderr(double p, std::uint64_t n) { return std::sqrt(std::max(0.0, p * (1 - p)) / static_cast<double>(n)); }

}  // namespace

void MonteCarloPlan::validate() const {
  if (n_samples < 2) throw DomainError("a plan needs at least 2 samples");
  dist.validate();
  penalty.validate();
  if (spec.d < 2 || spec.d > kMaxDim || spec.n < 0 || spec.H < 1) throw DomainError("invalid cylinder spec");
}

Estimate summarize(std::span<const double> xs, std::uint64_t master_seed) {
  Estimate e;
  e.n_samples = xs.size();
  e.master_seed = master_seed;
  if (xs.empty()) return e;
  long double s = 0;
  for (double x : xs) s += x;
  const long double N = static_cast<long double>(xs.size());
  const long double mean = s / N;
  long double m2 = 0, m4 = 0;
  for (double x : xs) {
    const long double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  e.mean = static_cast<double>(mean);
  if (xs.size() < 2) return e;
  const long double var = m2 / (N - 1);
  e.variance = static_cast<double>(var);
  e.stderr_of_mean = static_cast<double>(std::sqrt(var / N));
  const long double mu4 = m4 / N;
  const long double v4 = mu4 - (N - 3) / (N - 1) * var * var;
  e.stderr_of_variance = static_cast<double>(std::sqrt(std::max<long double>(0, v4) / N));
  return e;
}

std::vector<double> sample_values(const MonteCarloPlan& plan) {
  plan.validate();
  const QuantityEvaluator f(plan.quantity, plan.spec, plan.dist, plan.penalty);
  std::vector<double> out(plan.n_samples);
  parallel_for(out.size(), plan.jobs, [&](std::size_t i) { out[i] = f.sample(plan.master_seed, i); });
  return out;
}

Estimate estimate_variance(const MonteCarloPlan& plan) { return summarize(sample_values(plan), plan.master_seed); }

VarianceBounds variance_bounds(const MonteCarloPlan& plan) {
  plan.validate();
  const QuantityEvaluator f(plan.quantity, plan.spec, plan.dist, plan.penalty);
  const Lattice& L = f.lattice();
  const auto role = roles_for(L, plan.quantity);
  const bool with_np = plan.quantity != Quantity::kPsiLip;
  std::unique_ptr<SlabFamily> slabs;
  if (plan.quantity == Quantity::kPhiTilde) {
    slabs = std::make_unique<SlabFamily>(L, plan.penalty.slab_height == 0 ? plan.spec.H : plan.penalty.slab_height);
  }
  struct Record {
    double value = 0;
    double es = 0;
    std::vector<std::uint32_t> at_b;  // edges of E_min carrying b
  };
  const double w = pq(plan.dist);
  std::vector<double> values, es;
  values.reserve(plan.n_samples);
  es.reserve(plan.n_samples);
  std::vector<std::vector<std::uint32_t>> np_sets;
  std::vector<std::uint64_t> counts(L.num_edges(), 0);
  sample_fold<Record>(
      plan.n_samples, plan.jobs,
      [&](std::uint64_t i) {
        Record r;
        const auto bits = f.draw(plan.master_seed, i);
        const Evaluation ev = f.evaluate_with_derivatives(bits);
        r.value = ev.value;
        for (double d : ev.delta) r.es += d * d;
        r.es *= w;
        if (!with_np) return r;
        const auto caps = std::span<const Capacity>(bits).first(L.num_edges());
        EdgeSet cut;
        if (is_flow_quantity(plan.quantity)) {
          cut = canonical_min_cut(L, caps, solve_flow(L, caps, role)).edges;
        } else {
          const PenaltyProfile profile = penalty_profile(plan.penalty, plan.spec.d, plan.spec.n, plan.spec.H, plan.dist,
                                                         plan.master_seed, i);
          cut = penalized_minimum(*slabs, caps, profile).E_min.edges;
        }
        for (EdgeId e : cut) {
          if (caps[index(e)] == plan.dist.b) r.at_b.push_back(index(e));
        }
        return r;
      },
      [&](std::uint64_t, Record& r) {
        values.push_back(r.value);
        es.push_back(r.es);
        for (std::uint32_t e : r.at_b) ++counts[e];
        if (with_np) np_sets.push_back(std::move(r.at_b));
      });

  VarianceBounds out;
  out.variance = summarize(values, plan.master_seed);
  out.efron_stein = summarize(es, plan.master_seed);
  if (with_np) {
    const double N = static_cast<double>(plan.n_samples);
    const double c = edge_variance(plan.dist);
    double sum = 0;
    for (std::uint64_t s : counts) sum += static_cast<double>(s) * (static_cast<double>(s) - 1);
    std::vector<double> z(np_sets.size(), 0);
    for (std::size_t k = 0; k < np_sets.size(); ++k) {
      for (std::uint32_t e : np_sets[k]) z[k] += static_cast<double>(counts[e]) / N;
    }
    const Estimate zs = summarize(z);
    out.newman_piza.mean = c * sum / (N * (N - 1));
    out.newman_piza.stderr_of_mean = 2 * c * zs.stderr_of_mean;
    out.newman_piza.n_samples = plan.n_samples;
    out.newman_piza.master_seed = plan.master_seed;
  }
  return out;
}

Estimate efron_stein_rhs(const MonteCarloPlan& plan) { return variance_bounds(plan).efron_stein; }

Estimate newman_piza_lhs(const MonteCarloPlan& plan) {
  if (plan.quantity == Quantity::kPsiLip) throw DomainError("the Newman–Piza term needs a cut quantity");
  return variance_bounds(plan).newman_piza;
}

ChaosCurve chaos_curve(const MonteCarloPlan& plan, std::span<const Ratio> grid) {
  plan.validate();
  if (!is_flow_quantity(plan.quantity)) throw DomainError("chaos curves are defined for Φ and τ");
  if (grid.empty()) throw DomainError("empty t grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] <= Ratio::of(1, 1))) throw DomainError("t must lie in [0, 1]");
    if (k > 0 && !(grid[k - 1] < grid[k])) throw DomainError("t grid must be strictly increasing");
  }
  const Lattice L(plan.spec);
  const auto role = roles_for(L, plan.quantity);
  const std::size_t K = grid.size();
  struct Record {
    double value = 0;
    std::vector<double> pc, ic, wc;
  };
  std::vector<double> values;
  std::vector<std::vector<double>> pc(K), ic(K), wc(K);
  sample_fold<Record>(
      plan.n_samples, plan.jobs,
      [&](std::uint64_t i) {
        Record r;
        const NoiseCoupling coupling = make_coupling(L, plan.dist, plan.master_seed, i);
        const auto& x0 = coupling.base.values;
        const FlowResult f0 = solve_flow(L, x0, role);
        r.value = static_cast<double>(f0.value);
        std::vector<FlowValue> d0(L.num_edges(), 0);
        for (const EdgeDelta& d : edge_derivatives(L, x0, plan.dist, role, f0)) d0[index(d.edge)] = d.delta;
        std::vector<std::uint8_t> i0(L.num_edges(), 0);
        for (EdgeId e : essential_edges(L, f0)) i0[index(e)] = 1;
        for (const Ratio& t : grid) {
          const CapacityField xt = realize_noise(coupling, t);
          const FlowResult ft = solve_flow(L, xt.values, role);
          double p = 0, w = 0, c = 0;
          for (const EdgeDelta& d : edge_derivatives(L, xt.values, plan.dist, role, ft)) {
            const FlowValue a = d0[index(d.edge)];
            p += a > 0 && d.delta > 0;
            w += static_cast<double>(a * d.delta);
          }
          for (EdgeId e : essential_edges(L, ft)) c += i0[index(e)];
          r.pc.push_back(p);
          r.ic.push_back(c);
          r.wc.push_back(w);
        }
        return r;
      },
      [&](std::uint64_t, Record& r) {
        values.push_back(r.value);
        for (std::size_t k = 0; k < K; ++k) {
          pc[k].push_back(r.pc[k]);
          ic[k].push_back(r.ic[k]);
          wc[k].push_back(r.wc[k]);
        }
      });

  ChaosCurve curve;
  curve.variance = summarize(values, plan.master_seed);
  const std::size_t N = values.size();
  std::vector<double> integral(N, 0), weighted(N, 0), diff(N);
  for (std::size_t k = 0; k < K; ++k) {
    ChaosPoint pt;
    pt.t = grid[k];
    pt.pivotal = summarize(pc[k], plan.master_seed);
    pt.essential = summarize(ic[k], plan.master_seed);
    pt.weighted = summarize(wc[k], plan.master_seed);
    if (k > 0) {
      for (std::size_t s = 0; s < N; ++s) diff[s] = pc[k - 1][s] - pc[k][s];
      const Estimate d = summarize(diff);
      pt.drop = d.mean;
      pt.drop_stderr = d.stderr_of_mean;
      const double h = grid[k].to_double() - grid[k - 1].to_double();
      for (std::size_t s = 0; s < N; ++s) {
        integral[s] += h * (pc[k - 1][s] + pc[k][s]) / 2;
        weighted[s] += h * (wc[k - 1][s] + wc[k][s]) / 2;
      }
    }
    curve.points.push_back(std::move(pt));
  }
  const Estimate ie = summarize(integral);
  const Estimate we = summarize(weighted);
  curve.integral = edge_variance(plan.dist) * ie.mean;
  curve.integral_stderr = edge_variance(plan.dist) * ie.stderr_of_mean;
  curve.weighted_integral = pq(plan.dist) * we.mean;
  curve.weighted_integral_stderr = pq(plan.dist) * we.stderr_of_mean;
  return curve;
}

int pilot_slab_height(const MonteCarloPlan& plan, std::uint64_t samples) {
  const Lattice L(plan.spec);
  const auto role = cylinder_roles(L);
  std::vector<int> extent(samples, 0);
  parallel_for(samples, plan.jobs, [&](std::size_t i) {
    const CapacityField f = sample_field(L, plan.dist, plan.master_seed, i);
    const CutSet cut = canonical_min_cut(L, f.values, solve_flow(L, f.values, role));
    extent[i] = cut.h_max - cut.h_min;
  });
  const int m = extent.empty() ? 1 : *std::max_element(extent.begin(), extent.end());
  return std::clamp(2 * m, 1, plan.spec.H);
}

double talagrand_rhs(std::span<const double> l1, std::span<const double> l2) {
  if (l1.size() != l2.size()) throw DomainError("norm arrays differ in length");
  double s = 0;
  for (std::size_t j = 0; j < l1.size(); ++j) {
    if (l2[j] <= 0) continue;
    s += l2[j] * l2[j] / (1 + std::log(l2[j] / l1[j]));
  }
  return s;
}

double penalty_bit_derivative_bound(int d, int n, const Ratio& delta) {
  const double nn = static_cast<double>(n);
  return 2 * std::pow(nn, (d - 1) / 2.0) / (std::pow(nn, delta.to_double()) * std::log(nn));
}

InfluenceProfile influence_profile(const MonteCarloPlan& plan, const InfluenceOptions& options) {
  plan.validate();
  if (plan.spec.n < 2) throw DomainError("the penalized flow needs n >= 2");
  const Lattice L(plan.spec);
  InfluenceProfile out;
  out.n_samples = plan.n_samples;
  out.slab_height = resolve_slab_height(plan);
  PenaltyParams params = plan.penalty;
  params.slab_height = out.slab_height;
  const SlabFamily slabs(L, out.slab_height);
  out.slab_count = slabs.count();
  std::unique_ptr<QuantityEvaluator> flips;
  if (options.derivative_norms) flips = std::make_unique<QuantityEvaluator>(Quantity::kPhiTilde, plan.spec, plan.dist, params);

  const std::uint32_t E = L.num_edges();
  std::vector<std::optional<EdgeId>> shifted(E);
  for (std::uint32_t e = 0; e < E; ++e) shifted[e] = shift_edge(L, EdgeId{e}, 2);

  struct Record {
    EdgeSet cut;
    int j0 = 0;
    std::vector<double> delta;
  };
  std::vector<std::uint64_t> hits(E, 0), joint(E, 0);
  out.j0_histogram.assign(static_cast<std::size_t>(slabs.count()), 0);
  const std::size_t bits = flips ? flips->bits() : 0;
  std::vector<double> l1(bits, 0), l2(bits, 0);
  sample_fold<Record>(
      plan.n_samples, plan.jobs,
      [&](std::uint64_t i) {
        Record r;
        const CapacityField f = sample_field(L, plan.dist, plan.master_seed, i);
        const PenaltyProfile profile =
            penalty_profile(params, plan.spec.d, plan.spec.n, plan.spec.H, plan.dist, plan.master_seed, i);
        PenalizedResult pr = penalized_minimum(slabs, f.values, profile);
        r.cut = std::move(pr.E_min.edges);
        r.j0 = pr.j0;
        if (flips) r.delta = flips->evaluate_with_derivatives(flips->draw(plan.master_seed, i)).delta;
        return r;
      },
      [&](std::uint64_t, Record& r) {
        for (EdgeId e : r.cut) {
          ++hits[index(e)];
          const auto s = shifted[index(e)];
          if (s && std::binary_search(r.cut.begin(), r.cut.end(), *s)) ++joint[index(e)];
        }
        ++out.j0_histogram[static_cast<std::size_t>(r.j0 - 1)];
        for (std::size_t j = 0; j < r.delta.size(); ++j) {
          const double half = std::abs(r.delta[j]) / 2;
          l1[j] += half;
          l2[j] += half * half;
        }
      });

  const double N = static_cast<double>(plan.n_samples);
  out.hit.resize(E);
  for (std::uint32_t e = 0; e < E; ++e) {
    out.hit[e] = static_cast<double>(hits[e]) / N;
    out.hit_sum += out.hit[e];
  }
  for (double xi : options.xi) {
    const double level = std::pow(static_cast<double>(plan.spec.n), -xi);
    const auto c = static_cast<std::uint64_t>(std::count_if(out.hit.begin(), out.hit.end(), [&](double p) { return p >= level; }));
    out.thresholds.emplace_back(xi, c);
  }
  if (flips) {
    out.l1.resize(bits);
    out.l2.resize(bits);
    for (std::size_t j = 0; j < bits; ++j) {
      out.l1[j] = l1[j] / N;
      out.l2[j] = std::sqrt(l2[j] / N);
    }
  }
  const auto count_in = [&](int lo, int hi) {
    std::uint64_t c = 0;
    for (int j = std::max(lo, 1); j <= std::min(hi, slabs.count()); ++j) c += out.j0_histogram[static_cast<std::size_t>(j - 1)];
    return static_cast<double>(c) / N;
  };
  out.bottom = count_in(1, 2);
  out.bottom_stderr = binomial_stderr(out.bottom, plan.n_samples);
  out.top = count_in(slabs.count() - 1, slabs.count());
  out.top_stderr = binomial_stderr(out.top, plan.n_samples);
  out.shift_excess = -1;
  for (std::uint32_t e = 0; e < E; ++e) {
    if (!shifted[e]) continue;
    const double p1 = out.hit[e];
    const double p2 = out.hit[index(*shifted[e])];
    const double p12 = static_cast<double>(joint[e]) / N;
    const double d = p1 - p2;
    const double se = std::sqrt(std::max(0.0, p1 + p2 - 2 * p12 - d * d) / N);
    if (std::abs(d) > out.shift_max || (std::abs(d) == out.shift_max && se > out.shift_stderr)) {
      out.shift_max = std::abs(d);
      out.shift_stderr = se;
    }
    out.shift_excess = std::max(out.shift_excess, std::abs(d) - 4 * se);
  }
  return out;
}

LocalizationReport anchored_localization(const MonteCarloPlan& plan, std::span<const int> C) {
  plan.validate();
  const Lattice L(plan.spec);
  const auto role = anchored_roles(L);
  const int H = plan.spec.H;
  struct Record {
    double tau = 0;
    std::vector<double> frac;
  };
  LocalizationReport out;
  out.C.assign(C.begin(), C.end());
  out.outside_fraction.assign(C.size(), 0);
  std::vector<double> taus;
  sample_fold<Record>(
      plan.n_samples, plan.jobs,
      [&](std::uint64_t i) {
        Record r;
        const CapacityField f = sample_field(L, plan.dist, plan.master_seed, i);
        const FlowResult fr = solve_flow(L, f.values, role);
        r.tau = static_cast<double>(fr.value);
        const CutSet cut = canonical_min_cut(L, f.values, fr);
        r.frac.assign(C.size(), 0);
        for (EdgeId e : cut.edges) {
          const int d1 = std::abs(2 * L.height_of(L.edge_base(e)) - H);
          const int d2 = std::abs(2 * L.height_of(L.edge_head(e)) - H);
          for (std::size_t k = 0; k < C.size(); ++k) r.frac[k] += std::max(d1, d2) > 2 * C[k];
        }
        if (!cut.edges.empty()) {
          for (double& x : r.frac) x /= static_cast<double>(cut.edges.size());
        }
        return r;
      },
      [&](std::uint64_t, Record& r) {
        taus.push_back(r.tau);
        for (std::size_t k = 0; k < C.size(); ++k) out.outside_fraction[k] += r.frac[k];
      });
  for (double& x : out.outside_fraction) x /= static_cast<double>(plan.n_samples);
  out.tau = summarize(taus, plan.master_seed);
  return out;
}

std::vector<std::pair<Coords, Coords>> subcylinder_boxes(const CylinderSpec& spec, int m) {
  if (m < 1 || m > std::max(spec.n, 1)) throw DomainError("sub-cylinder side must lie in [1, n]");
  const int k = std::max(1, (spec.n + 1) / m);
  std::vector<std::pair<int, int>> intervals;
  for (int j = 0; j < k; ++j) intervals.emplace_back(j * m, j + 1 == k ? spec.n : (j + 1) * m - 1);
  const int axes = spec.d - 1;
  std::vector<std::pair<Coords, Coords>> out;
  std::vector<int> idx(static_cast<std::size_t>(axes), 0);
  while (true) {
    Coords lo{}, hi{};
    for (int a = 0; a < axes; ++a) {
      lo[a] = intervals[static_cast<std::size_t>(idx[a])].first;
      hi[a] = intervals[static_cast<std::size_t>(idx[a])].second;
    }
    hi[axes] = spec.H;
    out.emplace_back(lo, hi);
    int a = 0;
    while (a < axes && ++idx[a] == k) idx[a++] = 0;
    if (a == axes) break;
  }
  return out;
}

SubadditivityReport subadditivity_defect(const MonteCarloPlan& plan, int m) {
  plan.validate();
  const Lattice L(plan.spec);
  const auto role = cylinder_roles(L);
  std::vector<SubLattice> subs;
  std::vector<std::vector<std::uint8_t>> sub_roles;
  for (const auto& [lo, hi] : subcylinder_boxes(plan.spec, m)) {
    subs.push_back(extract_box(L, lo, hi));
    sub_roles.push_back(cylinder_roles(subs.back().lattice));
  }
  SubadditivityReport out;
  out.m = m;
  out.blocks = subs.size();
  std::vector<double> defects;
  sample_fold<FlowValue>(
      plan.n_samples, plan.jobs,
      [&](std::uint64_t i) {
        const CapacityField f = sample_field(L, plan.dist, plan.master_seed, i);
        FlowValue parts = 0;
        std::vector<Capacity> local;
        for (std::size_t b = 0; b < subs.size(); ++b) {
          local.resize(subs[b].parent_edge.size());
          for (std::size_t e = 0; e < local.size(); ++e) local[e] = f.values[index(subs[b].parent_edge[e])];
          parts += flow_value(subs[b].lattice, local, sub_roles[b]);
        }
        return flow_value(L, f.values, role) - parts;
      },
      [&](std::uint64_t i, FlowValue d) {
        defects.push_back(static_cast<double>(d));
        if (d < 0) {
          ++out.violations;
          out.violating_samples.push_back(i);
        }
      });
  out.defect = summarize(defects, plan.master_seed);
  out.defect_per_area = out.defect.mean / std::pow(static_cast<double>(std::max(plan.spec.n, 1)), plan.spec.d - 1);
  return out;
}

ChimneyReport chimney_statistics(const MonteCarloPlan& plan) {
  plan.validate();
  const Lattice L(plan.spec);
  const auto role = cylinder_roles(L);
  struct Record {
    int extent[2] = {0, 0};
    std::int64_t violations[2] = {0, 0};
    bool empty_A[2] = {false, false};
    bool overlap[2] = {false, false};
  };
  ChimneyReport out;
  out.extent_histogram.assign(static_cast<std::size_t>(plan.spec.H) + 1, 0);
  sample_fold<Record>(
      plan.n_samples, plan.jobs,
      [&](std::uint64_t i) {
        Record r;
        const CapacityField f = sample_field(L, plan.dist, plan.master_seed, i);
        const FlowResult fr = solve_flow(L, f.values, role);
        const CutSet cuts[2] = {canonical_min_cut(L, f.values, fr), sink_side_min_cut(L, f.values, fr)};
        for (int k = 0; k < 2; ++k) {
          const ChimneyScan scan = chimney_scan(L, plan.dist, cuts[k]);
          r.extent[k] = scan.extent;
          r.violations[k] = scan.violations;
          r.empty_A[k] = !scan.nonempty_A;
          r.overlap[k] = scan.stops_overlap;
        }
        return r;
      },
      [&](std::uint64_t i, const Record& r) {
        bool bad = false;
        for (int k = 0; k < 2; ++k) {
          ++out.cuts;
          ++out.extent_histogram[static_cast<std::size_t>(r.extent[k])];
          out.max_extent = std::max(out.max_extent, r.extent[k]);
          out.violations += static_cast<std::uint64_t>(r.violations[k]);
          out.cuts_with_violations += r.violations[k] > 0;
          out.empty_A += r.empty_A[k];
          out.stops_overlap += r.overlap[k];
          bad = bad || r.violations[k] > 0;
        }
        if (bad) out.violating_samples.push_back(i);
      });
  return out;
}

PenalizationReport penalization_sweep(const MonteCarloPlan& plan) {
  plan.validate();
  if (plan.spec.n < 2) throw DomainError("the penalized flow needs n >= 2");
  const Lattice L(plan.spec);
  const auto role = cylinder_roles(L);
  const std::uint64_t N = plan.n_samples;

  // Pass 1: Φ and the extent of the canonical cut.
  std::vector<FlowValue> phi(N);
  std::vector<int> extent(N);
  parallel_for(N, plan.jobs, [&](std::size_t i) {
    const CapacityField f = sample_field(L, plan.dist, plan.master_seed, i);
    const FlowResult fr = solve_flow(L, f.values, role);
    phi[i] = fr.value;
    const CutSet cut = canonical_min_cut(L, f.values, fr);
    extent[i] = cut.h_max - cut.h_min;
  });
  PenalizationReport out;
  out.max_extent = *std::max_element(extent.begin(), extent.end());
  out.slab_height = plan.penalty.slab_height != 0 ? plan.penalty.slab_height : std::clamp(2 * out.max_extent, 1, plan.spec.H);
  out.bound = penalization_gap_bound(plan.spec.d, plan.spec.n);
  PenaltyParams params = plan.penalty;
  params.slab_height = out.slab_height;
  const SlabFamily slabs(L, out.slab_height);
  const SlabFamily full(L, plan.spec.H);
  const double size_cap = static_cast<double>(plan.dist.b) * std::pow(plan.spec.n + 1.0, plan.spec.d - 1);

  struct Record {
    double phi_tilde = 0;
    FlowValue min_x = 0;
    FlowValue full_x = 0;
    std::size_t cut_size = 0;
  };
  std::vector<double> phis, tildes;
  sample_fold<Record>(
      N, plan.jobs,
      [&](std::uint64_t i) {
        Record r;
        const CapacityField f = sample_field(L, plan.dist, plan.master_seed, i);
        const PenaltyProfile profile =
            penalty_profile(params, plan.spec.d, plan.spec.n, plan.spec.H, plan.dist, plan.master_seed, i);
        const PenalizedResult pr = penalized_minimum(slabs, f.values, profile);
        r.phi_tilde = pr.phi_tilde;
        r.min_x = *std::min_element(pr.X.begin(), pr.X.end());
        r.full_x = full.sliced_flow(f.values, 1);
        r.cut_size = pr.E_min.edges.size();
        return r;
      },
      [&](std::uint64_t i, const Record& r) {
        const FlowValue p = phi[i];
        const double pd = static_cast<double>(p);
        // Both sides rounded the same way, so an exact inequality survives floating point.
        const bool gap_ok = r.phi_tilde >= pd && r.phi_tilde <= pd + out.bound;
        out.max_gap = std::max(out.max_gap, r.phi_tilde - pd);
        bool bad = false;
        if (!gap_ok) {
          ++out.gap_violations;
          bad = true;
        }
        if (r.min_x != p) {
          ++out.slab_identity_violations;
          bad = true;
        }
        if (r.full_x != p) {
          ++out.full_slab_identity_violations;
          bad = true;
        }
        if (static_cast<double>(plan.dist.a) * static_cast<double>(r.cut_size) > size_cap) {
          ++out.size_violations;
          bad = true;
        }
        if (bad) out.violating_samples.push_back(i);
        phis.push_back(pd);
        tildes.push_back(r.phi_tilde);
      });
  out.phi = summarize(phis, plan.master_seed);
  out.phi_tilde = summarize(tildes, plan.master_seed);
  return out;
}

}  // namespace fpp
