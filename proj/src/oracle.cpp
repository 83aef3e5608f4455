#include "fpp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "fpp/parallel.hpp"

namespace fpp {

mpq_class to_mpq(const Ratio& r) {
  mpq_class q(mpz_class(std::to_string(r.num)), mpz_class(std::to_string(r.den)));
  q.canonicalize();
  return q;
}

std::string mpq_str(const mpq_class& q) { return q.get_str(); }

namespace {

std::uint64_t configs_for(std::uint64_t bits, std::uint64_t factor_log2) {
  const std::uint64_t shift = bits * factor_log2;
  return shift >= 64 ? ~std::uint64_t{0} : std::uint64_t{1} << shift;
}

void check_guard(std::uint64_t configs, std::uint64_t cap, const char* what) {
  if (configs > cap) throw GuardError(std::string(what) + " needs " + std::to_string(configs) +
                                      " configurations, above the cap of " + std::to_string(cap));
}

mpq_class pow_q(const mpq_class& x, int k) {
  mpq_class r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Polynomial product with a linear factor (1 - c t).
void times_linear(std::vector<mpq_class>& poly, const mpq_class& c) {
  poly.emplace_back(0);
  for (std::size_t i = poly.size() - 1; i > 0; --i) poly[i] -= c * poly[i - 1];
}

}  // namespace

ExactTable tabulate(const QuantityEvaluator& f, const EnumerationGuard& guard, int jobs) {
  if (!f.integer_valued()) throw DomainError("exact enumeration needs an integer-valued quantity");
  const std::uint64_t configs = configs_for(f.bits(), 1);
  check_guard(configs, guard.max_configs, "exact enumeration");
  ExactTable t;
  t.bits = static_cast<int>(f.bits());
  t.dist = f.dist();
  t.values.resize(configs);
  // Blocks of 2^12 configurations per task.
  const std::uint64_t block = std::min<std::uint64_t>(configs, 4096);
  parallel_for(configs / block, jobs, [&](std::size_t b) {
    std::vector<Capacity> v(f.bits());
    for (std::uint64_t m = b * block; m < (b + 1) * block; ++m) {
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = ((m >> k) & 1u) ? t.dist.b : t.dist.a;
      t.values[m] = static_cast<FlowValue>(f.evaluate(v));
    }
  });
  return t;
}

ExactMoments exact_moments(const ExactTable& table) {
  const std::size_t side = static_cast<std::size_t>(table.bits) + 1;
  // Grouped by the number of bits at b; |f| stays far below 2^20, so the sums fit in 64 bits.
  std::vector<long> s1(side, 0), s2(side, 0);
  for (std::uint64_t m = 0; m < table.values.size(); ++m) {
    const auto k = static_cast<std::size_t>(std::popcount(m));
    const FlowValue v = table.values[m];
    s1[k] += v;
    s2[k] += v * v;
  }
  const mpq_class p = to_mpq(table.dist.p_a);
  const mpq_class q = 1 - p;
  ExactMoments r;
  mpq_class second = 0;
  for (int k = 0; k <= table.bits; ++k) {
    const mpq_class w = pow_q(q, k) * pow_q(p, table.bits - k);
    r.mean += w * s1[static_cast<std::size_t>(k)];
    second += w * s2[static_cast<std::size_t>(k)];
  }
  r.variance = second - r.mean * r.mean;
  return r;
}

ExactMoments exact_moments(const CylinderSpec& spec, const TwoPointDist& dist, Quantity q,
                           const EnumerationGuard& guard) {
  return exact_moments(tabulate(QuantityEvaluator(q, spec, dist), guard));
}

ExactNorms exact_derivative_norms(const ExactTable& table) {
  const int E = table.bits;
  const mpq_class p = to_mpq(table.dist.p_a);
  const mpq_class q = 1 - p;
  ExactNorms out;
  out.l1.assign(static_cast<std::size_t>(E), 0);
  out.l2_squared.assign(static_cast<std::size_t>(E), 0);
  // Δ_j does not depend on bit j, so sum over configurations with bit j at a, weighted on the rest.
  for (int j = 0; j < E; ++j) {
    std::vector<std::int64_t> s1(static_cast<std::size_t>(E), 0), s2(static_cast<std::size_t>(E), 0);
    const std::uint64_t bit = std::uint64_t{1} << j;
    for (std::uint64_t m = 0; m < table.values.size(); ++m) {
      if (m & bit) continue;
      const FlowValue d = table.values[m | bit] - table.values[m];
      const int k = std::popcount(m);
      s1[static_cast<std::size_t>(k)] += d < 0 ? -d : d;
      s2[static_cast<std::size_t>(k)] += d * d;
    }
    for (int k = 0; k < E; ++k) {
      const mpq_class w = pow_q(q, k) * pow_q(p, E - 1 - k);
      out.l1[static_cast<std::size_t>(j)] += w * s1[static_cast<std::size_t>(k)];
      out.l2_squared[static_cast<std::size_t>(j)] += w * s2[static_cast<std::size_t>(k)];
    }
    out.l1[static_cast<std::size_t>(j)] /= 2;
    out.l2_squared[static_cast<std::size_t>(j)] /= 4;
  }
  return out;
}

ExactChaos exact_chaos_integral(const ExactTable& table, const EnumerationGuard& guard) {
  const int E = table.bits;
  check_guard(configs_for(static_cast<std::uint64_t>(E), 2), guard.max_configs, "exact chaos integral");
  const std::uint64_t N = table.values.size();
  const std::uint64_t full = N - 1;

  // Δ_e for every configuration.
  std::vector<FlowValue> delta(N * static_cast<std::size_t>(E));
  for (std::uint64_t m = 0; m < N; ++m) {
    for (int e = 0; e < E; ++e) {
      const std::uint64_t bit = std::uint64_t{1} << e;
      delta[m * static_cast<std::size_t>(E) + static_cast<std::size_t>(e)] = table.values[m | bit] - table.values[m & ~bit];
    }
  }
  // Sum the overlaps over pairs (X, Y) grouped by k = #disagreeing bits and j = #bits at a in both.
  const std::size_t side = static_cast<std::size_t>(E) + 1;
  std::vector<std::int64_t> g_weighted(side * side, 0), g_pivotal(side * side, 0);
  for (std::uint64_t x = 0; x < N; ++x) {
    const FlowValue* dx = &delta[x * static_cast<std::size_t>(E)];
    for (std::uint64_t y = 0; y < N; ++y) {
      const FlowValue* dy = &delta[y * static_cast<std::size_t>(E)];
      std::int64_t w = 0, c = 0;
      for (int e = 0; e < E; ++e) {
        w += dx[e] * dy[e];
        c += (dx[e] > 0) & (dy[e] > 0);
      }
      if (w == 0 && c == 0) continue;
      const std::size_t k = static_cast<std::size_t>(std::popcount(x ^ y));
      const std::size_t j = static_cast<std::size_t>(std::popcount(~(x | y) & full));
      g_weighted[k * side + j] += w;
      g_pivotal[k * side + j] += c;
    }
  }
  // Each disagreeing bit contributes t p q, each bit at a in both p (1 - q t), each bit at b in
  // both q (1 - p t).
  const mpq_class p = to_mpq(table.dist.p_a);
  const mpq_class q = 1 - p;
  ExactChaos out;
  mpq_class sum_w = 0, sum_c = 0;
  for (int k = 0; k <= E; ++k) {
    for (int j = 0; j + k <= E; ++j) {
      const std::size_t cell = static_cast<std::size_t>(k) * side + static_cast<std::size_t>(j);
      if (g_weighted[cell] == 0 && g_pivotal[cell] == 0) continue;
      std::vector<mpq_class> poly(static_cast<std::size_t>(k), 0);
      poly.emplace_back(1);  // t^k
      for (int i = 0; i < j; ++i) times_linear(poly, q);
      for (int i = 0; i < E - k - j; ++i) times_linear(poly, p);
      mpq_class integral = 0;
      for (std::size_t i = 0; i < poly.size(); ++i) integral += poly[i] / mpq_class(static_cast<long>(i + 1));
      const mpq_class coef = pow_q(p * q, k) * pow_q(p, j) * pow_q(q, E - k - j) * integral;
      sum_w += coef * mpq_class(static_cast<long>(g_weighted[cell]));
      sum_c += coef * mpq_class(static_cast<long>(g_pivotal[cell]));
    }
  }
  const mpq_class spread = mpq_class(table.dist.b - table.dist.a);
  out.weighted = p * q * sum_w;
  out.pivotal = spread * spread * p * q * sum_c;
  return out;
}

ExactChaos exact_chaos_integral(const CylinderSpec& spec, const TwoPointDist& dist, Quantity q,
                                const EnumerationGuard& guard) {
  const QuantityEvaluator f(q, spec, dist);
  check_guard(configs_for(f.bits(), 2), guard.max_configs, "exact chaos integral");
  return exact_chaos_integral(tabulate(f, guard), guard);
}

namespace {

struct SideScan {
  std::vector<std::uint32_t> inner;
  std::vector<std::uint8_t> side;  // current source side
};

// Calls visit(side, capacity) for every source side: all sources, no sinks, any inner subset.
template <typename Visit>
void for_each_source_side(const Lattice& lattice, std::span<const std::uint8_t> role, const EnumerationGuard& guard,
                          Visit&& visit) {
  if (lattice.num_edges() > 24) throw GuardError("cut enumeration is limited to 24 edges");
  if (role.size() != lattice.num_vertices()) throw DomainError("role array does not match the lattice");
  std::vector<std::uint32_t> inner;
  std::vector<std::uint8_t> side(lattice.num_vertices(), 0);
  for (std::uint32_t v = 0; v < lattice.num_vertices(); ++v) {
    if (role[v] == kInner) inner.push_back(v);
    if (role[v] == kSource) side[v] = 1;
  }
  check_guard(configs_for(inner.size(), 1), guard.max_cut_subsets, "cut enumeration");
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << inner.size()); ++m) {
    for (std::size_t k = 0; k < inner.size(); ++k) side[inner[k]] = (m >> k) & 1u;
    visit(side);
  }
}

std::uint32_t boundary_mask(const Lattice& lattice, const std::vector<std::uint8_t>& side) {
  std::uint32_t mask = 0;
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    const EdgeId id{e};
    if (side[index(lattice.edge_base(id))] != side[index(lattice.edge_head(id))]) mask |= 1u << e;
  }
  return mask;
}

FlowValue mask_capacity(std::uint32_t mask, std::span<const Capacity> caps) {
  FlowValue c = 0;
  for (std::uint32_t e = 0; e < caps.size(); ++e) {
    if ((mask >> e) & 1u) c += caps[e];
  }
  return c;
}

EdgeSet mask_edges(std::uint32_t mask) {
  EdgeSet out;
  for (std::uint32_t e = 0; e < 32; ++e) {
    if ((mask >> e) & 1u) out.push_back(EdgeId{e});
  }
  return out;
}

}  // namespace

std::vector<EnumeratedCut> enumerate_min_cuts(const Lattice& lattice, std::span<const Capacity> caps,
                                              std::span<const std::uint8_t> role, const EnumerationGuard& guard) {
  FlowValue best = -1;
  std::vector<std::pair<std::uint32_t, std::vector<std::uint8_t>>> found;
  for_each_source_side(lattice, role, guard, [&](const std::vector<std::uint8_t>& side) {
    const std::uint32_t mask = boundary_mask(lattice, side);
    const FlowValue c = mask_capacity(mask, caps);
    if (best >= 0 && c > best) return;
    if (c < best || best < 0) {
      best = c;
      found.clear();
    }
    found.emplace_back(mask, side);
  });
  // Distinct source sides can share a cut; keep the smallest side for each edge set.
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return std::count(x.second.begin(), x.second.end(), 1) < std::count(y.second.begin(), y.second.end(), 1);
  });
  std::vector<EnumeratedCut> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (i > 0 && found[i].first == found[i - 1].first) continue;
    EnumeratedCut c;
    c.edges = mask_edges(found[i].first);
    c.capacity = best;
    c.source_side = found[i].second;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const EnumeratedCut& x, const EnumeratedCut& y) { return x.edges < y.edges; });
  return out;
}

CutGroundTruth enumerate_ground_truth(const Lattice& lattice, std::span<const Capacity> caps,
                                      const TwoPointDist& dist, std::span<const std::uint8_t> role,
                                      const EnumerationGuard& guard) {
  const std::uint32_t E = lattice.num_edges();
  FlowValue best = -1;
  std::vector<std::uint8_t> meet;
  std::uint32_t essential = ~0u;
  std::vector<FlowValue> min_at_a(E, -1), min_at_b(E, -1);
  for_each_source_side(lattice, role, guard, [&](const std::vector<std::uint8_t>& side) {
    const std::uint32_t mask = boundary_mask(lattice, side);
    const FlowValue c = mask_capacity(mask, caps);
    for (std::uint32_t e = 0; e < E; ++e) {
      const bool in = (mask >> e) & 1u;
      const FlowValue rest = c - (in ? caps[e] : 0);
      const FlowValue ca = rest + (in ? dist.a : 0);
      const FlowValue cb = rest + (in ? dist.b : 0);
      if (min_at_a[e] < 0 || ca < min_at_a[e]) min_at_a[e] = ca;
      if (min_at_b[e] < 0 || cb < min_at_b[e]) min_at_b[e] = cb;
    }
    if (best >= 0 && c > best) return;
    if (best < 0 || c < best) {
      best = c;
      meet = side;
      essential = mask;
      return;
    }
    for (std::size_t v = 0; v < side.size(); ++v) meet[v] &= side[v];
    essential &= mask;
  });
  CutGroundTruth g;
  g.min_capacity = best;
  g.canonical = mask_edges(boundary_mask(lattice, meet));
  g.essential = mask_edges(essential);
  for (std::uint32_t e = 0; e < E; ++e) {
    if (min_at_b[e] > min_at_a[e]) g.pivotal.push_back(EdgeId{e});
  }
  return g;
}

}  // namespace fpp
