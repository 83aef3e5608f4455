#include "fpp/lipschitz.hpp"

#include <cstdlib>
#include <ostream>
#include <string>

#include "fpp/format.hpp"
#include "fpp/push_relabel.hpp"

namespace fpp {

namespace {

// Horizontal neighbour pairs of the base grid, each listed once as (u, u + e_k).
std::vector<std::pair<std::uint32_t, std::uint32_t>> base_pairs(const Lattice& L) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t u = 0; u < L.layer_size(); ++u) {
    for (int k = 0; k + 1 < L.dim(); ++k) {
      if (L.has_neighbor(VertexId{u}, 2 * k)) out.emplace_back(u, index(L.neighbor(VertexId{u}, 2 * k)));
    }
  }
  return out;
}

std::vector<std::uint8_t> base_boundary(const Lattice& L) {
  std::vector<std::uint8_t> out(L.layer_size(), 0);
  for (std::uint32_t u = 0; u < L.layer_size(); ++u) {
    const Coords x = L.coords(VertexId{u});
    for (int k = 0; k + 1 < L.dim(); ++k) {
      if (x[k] == 0 || x[k] == L.extent(k)) out[u] = 1;
    }
  }
  return out;
}

LipschitzSolution solve_impl(const VertexWeightField& field, int boundary_height) {
  const Lattice L(field.spec);
  const std::uint32_t B = L.layer_size();
  const int H = field.spec.H;
  if (field.weights.size() != L.num_vertices()) throw DomainError("weight array does not match the spec");

  FlowValue total = 0;
  for (Capacity w : field.weights) total += w;
  const FlowValue inf = total + 1;

  // Node 0 is the source, node 1 the sink, chain node (u, h) for 1 <= h <= H is 2 + u*H + h - 1.
  const auto node = [&](std::uint32_t u, int h) -> std::uint32_t {
    if (h <= 0) return 0;
    if (h > H) return 1;
    return 2 + u * static_cast<std::uint32_t>(H) + static_cast<std::uint32_t>(h - 1);
  };
  const std::uint32_t nodes = 2 + B * static_cast<std::uint32_t>(H);
  CsrBuilder builder(nodes);
  for (std::uint32_t u = 0; u < B; ++u) {
    for (int h = 0; h <= H; ++h) builder.add(node(u, h), node(u, h + 1), field.at(u, h), inf);
  }
  for (const auto& [u, w] : base_pairs(L)) {
    for (int h = 2; h <= H; ++h) {
      builder.add(node(u, h), node(w, h - 1), inf, 0);
      builder.add(node(w, h), node(u, h - 1), inf, 0);
    }
  }
  if (boundary_height >= 0) {
    const auto pinned = base_boundary(L);
    for (std::uint32_t u = 0; u < B; ++u) {
      if (!pinned[u]) continue;
      if (boundary_height >= 1) builder.add(0, node(u, boundary_height), inf, 0);
      if (boundary_height + 1 <= H) builder.add(node(u, boundary_height + 1), 1, inf, 0);
    }
  }
  std::vector<FlowValue> residual;
  const CsrTopology g = builder.build(residual);
  std::vector<std::uint8_t> role(nodes, kInner);
  role[0] = kSource;
  role[1] = kSink;

  PushRelabel<CsrTopology> solver;
  LipschitzSolution sol;
  sol.value = solver.solve(g, role, residual);
  const auto reach = PushRelabel<CsrTopology>::source_reachable(g, role, residual);
  sol.psi.psi.assign(B, 0);
  for (std::uint32_t u = 0; u < B; ++u) {
    for (int h = 1; h <= H; ++h) {
      if (reach[node(u, h)]) sol.psi.psi[u] = h;
    }
  }
  return sol;
}

}  // namespace

VertexWeightField sample_vertex_weights(const CylinderSpec& spec, const TwoPointDist& dist, std::uint64_t seed,
                                        std::uint64_t sample_index) {
  dist.validate();
  VertexWeightField f;
  f.spec = spec;
  f.weights = sample_two_point(spec.vertex_count(), dist, DrawAddress{seed, sample_index, Stream::kVertexWeights});
  f.dist = dist;
  f.seed = seed;
  f.sample_index = sample_index;
  return f;
}

bool is_lipschitz(const CylinderSpec& spec, const LipschitzFunction& f) {
  const Lattice L(spec);
  if (f.psi.size() != L.layer_size()) return false;
  for (int v : f.psi) {
    if (v < 0 || v > spec.H) return false;
  }
  for (const auto& [u, w] : base_pairs(L)) {
    if (std::abs(f.psi[u] - f.psi[w]) > 1) return false;
  }
  return true;
}

FlowValue evaluate(const VertexWeightField& field, const LipschitzFunction& f) {
  FlowValue s = 0;
  for (std::uint32_t u = 0; u < f.psi.size(); ++u) s += field.at(u, f.psi[u]);
  return s;
}

LipschitzSolution solve_lipschitz(const VertexWeightField& field) { return solve_impl(field, -1); }

LipschitzSolution solve_anchored_lipschitz(const VertexWeightField& field, int boundary_height) {
  if (boundary_height < 0 || boundary_height > field.spec.H) throw DomainError("boundary height outside [0, H]");
  return solve_impl(field, boundary_height);
}

namespace {

FlowValue brute_impl(const VertexWeightField& field, int boundary_height, std::uint64_t max_candidates) {
  const Lattice L(field.spec);
  const std::uint32_t B = L.layer_size();
  const int H = field.spec.H;
  const auto pinned = base_boundary(L);
  std::vector<std::uint32_t> free;
  for (std::uint32_t u = 0; u < B; ++u) {
    if (boundary_height < 0 || !pinned[u]) free.push_back(u);
  }
  std::uint64_t candidates = 1;
  for (std::size_t k = 0; k < free.size(); ++k) {
    candidates *= static_cast<std::uint64_t>(H) + 1;
    if (candidates > max_candidates) throw GuardError("Lipschitz enumeration exceeds " + std::to_string(max_candidates) + " candidates");
  }
  const auto pairs = base_pairs(L);
  std::vector<int> psi(B, boundary_height < 0 ? 0 : boundary_height);
  for (std::uint32_t u : free) psi[u] = 0;
  FlowValue best = -1;
  while (true) {
    bool ok = true;
    for (const auto& [u, w] : pairs) {
      if (std::abs(psi[u] - psi[w]) > 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      FlowValue s = 0;
      for (std::uint32_t u = 0; u < B; ++u) s += field.at(u, psi[u]);
      if (best < 0 || s < best) best = s;
    }
    std::size_t k = 0;
    while (k < free.size() && ++psi[free[k]] > H) psi[free[k++]] = 0;
    if (k == free.size()) break;
  }
  return best;
}

}  // namespace

FlowValue brute_force_lipschitz(const VertexWeightField& field, std::uint64_t max_candidates) {
  return brute_impl(field, -1, max_candidates);
}

FlowValue brute_force_anchored_lipschitz(const VertexWeightField& field, int boundary_height,
                                         std::uint64_t max_candidates) {
  if (boundary_height < 0 || boundary_height > field.spec.H) throw DomainError("boundary height outside [0, H]");
  return brute_impl(field, boundary_height, max_candidates);
}

void write_psi_csv(std::ostream& out, const CylinderSpec& spec, const LipschitzFunction& f) {
  const Lattice L(spec);
  std::string line;
  line = "point";
  for (int k = 0; k + 1 < spec.d; ++k) line += ",x" + std::to_string(k + 1);
  line += ",psi\n";
  out << line;
  for (std::uint32_t u = 0; u < f.psi.size(); ++u) {
    const Coords x = L.coords(VertexId{u});
    line.clear();
    append_int(line, u);
    for (int k = 0; k + 1 < spec.d; ++k) {
      line += ',';
      append_int(line, x[k]);
    }
    line += ',';
    append_int(line, f.psi[u]);
    out << line << '\n';
  }
}

}  // namespace fpp
