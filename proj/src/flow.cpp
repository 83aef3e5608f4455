#include "fpp/flow.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "json.hpp"

namespace fpp {

namespace {

thread_local PushRelabel<LatticeTopology> tl_solver;
thread_local std::vector<FlowValue> tl_residual;

void load_residual(const Lattice& lattice, std::span<const Capacity> caps, std::vector<FlowValue>& res) {
  if (caps.size() != lattice.num_edges()) throw DomainError("capacity array does not match the lattice");
  const auto nd = static_cast<std::uint32_t>(lattice.num_directions());
  res.assign(static_cast<std::size_t>(lattice.num_vertices()) * nd, 0);
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    const EdgeId id{e};
    const auto k = static_cast<std::uint32_t>(lattice.edge_axis(id));
    res[index(lattice.edge_base(id)) * nd + 2 * k] = caps[e];
    res[index(lattice.edge_head(id)) * nd + 2 * k + 1] = caps[e];
  }
}

void check_roles(const Lattice& lattice, std::span<const std::uint8_t> role) {
  if (role.size() != lattice.num_vertices()) throw DomainError("role array does not match the lattice");
}

}  // namespace

std::vector<std::uint8_t> make_roles(const Lattice& lattice, const VertexSet& sources, const VertexSet& sinks) {
  if (sources.empty() || sinks.empty()) throw DomainError("source and sink sets must be nonempty");
  std::vector<std::uint8_t> role(lattice.num_vertices(), kInner);
  for (VertexId v : sources) {
    if (index(v) >= lattice.num_vertices()) throw DomainError("source vertex out of range");
    role[index(v)] = kSource;
  }
  for (VertexId v : sinks) {
    if (index(v) >= lattice.num_vertices()) throw DomainError("sink vertex out of range");
    if (role[index(v)] == kSource) throw DomainError("source and sink sets must be disjoint");
    role[index(v)] = kSink;
  }
  return role;
}

std::vector<std::uint8_t> cylinder_roles(const Lattice& lattice) {
  std::vector<std::uint8_t> role(lattice.num_vertices(), kInner);
  const std::uint32_t layer = lattice.layer_size();
  std::fill(role.begin(), role.begin() + layer, kSource);
  std::fill(role.end() - layer, role.end(), kSink);
  return role;
}

std::vector<std::uint8_t> anchored_roles(const Lattice& lattice) {
  const int H = lattice.height();
  if (H < 2) throw DomainError("anchored flow needs H >= 2");
  std::vector<std::uint8_t> role(lattice.num_vertices(), kInner);
  for (std::uint32_t v = 0; v < lattice.num_vertices(); ++v) {
    const VertexId id{v};
    if (!lattice.on_boundary(id)) continue;
    const int twice = 2 * lattice.height_of(id);
    if (twice < H) role[v] = kSource;
    else if (twice > H) role[v] = kSink;
  }
  return role;
}

FlowResult solve_flow(const Lattice& lattice, std::span<const Capacity> caps, std::span<const std::uint8_t> role) {
  check_roles(lattice, role);
  const LatticeTopology g{&lattice};
  std::vector<FlowValue>& res = tl_residual;
  load_residual(lattice, caps, res);
  FlowResult out;
  out.value = tl_solver.solve(g, role, res);
  const auto nd = static_cast<std::uint32_t>(lattice.num_directions());
  out.edge_flows.resize(lattice.num_edges());
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    const EdgeId id{e};
    const auto k = static_cast<std::uint32_t>(lattice.edge_axis(id));
    out.edge_flows[e] = caps[e] - res[index(lattice.edge_base(id)) * nd + 2 * k];
  }
  out.source_reachable = PushRelabel<LatticeTopology>::source_reachable(g, role, res);
  out.sink_reaching = PushRelabel<LatticeTopology>::sink_reaching(g, role, res);
  return out;
}

FlowValue flow_value(const Lattice& lattice, std::span<const Capacity> caps, std::span<const std::uint8_t> role) {
  check_roles(lattice, role);
  std::vector<FlowValue>& res = tl_residual;
  load_residual(lattice, caps, res);
  return tl_solver.solve(LatticeTopology{&lattice}, role, res);
}

FlowResult max_flow(const Lattice& lattice, const CapacityField& field, const VertexSet& sources,
                    const VertexSet& sinks) {
  const auto role = make_roles(lattice, sources, sinks);
  return solve_flow(lattice, field.values, role);
}

CutSet make_cutset(const Lattice& lattice, std::span<const Capacity> caps, EdgeSet edges) {
  CutSet cut;
  std::sort(edges.begin(), edges.end());
  cut.edges = std::move(edges);
  for (EdgeId e : cut.edges) {
    cut.capacity += caps[index(e)];
    const int lo = lattice.height_of(lattice.edge_base(e));
    const int hi = lattice.height_of(lattice.edge_head(e));
    cut.h_min = cut.h_min < 0 ? lo : std::min(cut.h_min, lo);
    cut.h_max = std::max(cut.h_max, hi);
  }
  return cut;
}

namespace {

EdgeSet crossing_edges(const Lattice& lattice, const std::vector<std::uint8_t>& side) {
  EdgeSet edges;
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    const EdgeId id{e};
    if (side[index(lattice.edge_base(id))] != side[index(lattice.edge_head(id))]) edges.push_back(id);
  }
  return edges;
}

}  // namespace

CutSet canonical_min_cut(const Lattice& lattice, std::span<const Capacity> caps, const FlowResult& flow) {
  return make_cutset(lattice, caps, crossing_edges(lattice, flow.source_reachable));
}

CutSet sink_side_min_cut(const Lattice& lattice, std::span<const Capacity> caps, const FlowResult& flow) {
  return make_cutset(lattice, caps, crossing_edges(lattice, flow.sink_reaching));
}

EdgeSet essential_edges(const Lattice& lattice, const FlowResult& flow) {
  EdgeSet out;
  const auto& s = flow.source_reachable;
  const auto& t = flow.sink_reaching;
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    const EdgeId id{e};
    const std::uint32_t u = index(lattice.edge_base(id));
    const std::uint32_t v = index(lattice.edge_head(id));
    if ((s[u] && t[v]) || (s[v] && t[u])) out.push_back(id);
  }
  return out;
}

EdgeSet essential_set(const Lattice& lattice, const CapacityField& field, const VertexSet& sources,
                      const VertexSet& sinks) {
  return essential_edges(lattice, max_flow(lattice, field, sources, sinks));
}

EdgeSet essential_by_perturbation(const Lattice& lattice, std::span<const Capacity> caps,
                                  std::span<const std::uint8_t> role) {
  const FlowValue base = flow_value(lattice, caps, role);
  std::vector<Capacity> work(caps.begin(), caps.end());
  EdgeSet out;
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    ++work[e];
    if (flow_value(lattice, work, role) > base) out.push_back(EdgeId{e});
    --work[e];
  }
  return out;
}

std::vector<EdgeDelta> edge_derivatives(const Lattice& lattice, std::span<const Capacity> caps,
                                        const TwoPointDist& dist, std::span<const std::uint8_t> role,
                                        const FlowResult& flow) {
  std::vector<EdgeDelta> out;
  thread_local std::vector<Capacity> work;
  work.assign(caps.begin(), caps.end());
  const auto& s = flow.source_reachable;
  const auto& t = flow.sink_reaching;
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    const EdgeId id{e};
    FlowValue delta = 0;
    if (caps[e] == dist.a) {
      const std::uint32_t u = index(lattice.edge_base(id));
      const std::uint32_t v = index(lattice.edge_head(id));
      if (!((s[u] && t[v]) || (s[v] && t[u]))) continue;
      work[e] = dist.b;
      delta = flow_value(lattice, work, role) - flow.value;
    } else {
      // At b: the current flow stays feasible after lowering to a unless it uses more than a.
      if (std::llabs(flow.edge_flows[e]) <= dist.a) continue;
      work[e] = dist.a;
      delta = flow.value - flow_value(lattice, work, role);
    }
    work[e] = caps[e];
    if (delta != 0) out.push_back({id, delta});
  }
  return out;
}

EdgeSet pivotal_edges(const Lattice& lattice, std::span<const Capacity> caps, const TwoPointDist& dist,
                      std::span<const std::uint8_t> role, const FlowResult& flow) {
  EdgeSet out;
  for (const EdgeDelta& d : edge_derivatives(lattice, caps, dist, role, flow)) out.push_back(d.edge);
  return out;
}

EdgeSet pivotal_set(const Lattice& lattice, const CapacityField& field, const VertexSet& sources,
                    const VertexSet& sinks) {
  const auto role = make_roles(lattice, sources, sinks);
  const FlowResult flow = solve_flow(lattice, field.values, role);
  return pivotal_edges(lattice, field.values, field.dist, role, flow);
}

EdgeSet pivotal_set_definitional(const Lattice& lattice, std::span<const Capacity> caps, const TwoPointDist& dist,
                                 std::span<const std::uint8_t> role) {
  std::vector<Capacity> work(caps.begin(), caps.end());
  EdgeSet out;
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    work[e] = dist.b;
    const FlowValue high = flow_value(lattice, work, role);
    work[e] = dist.a;
    const FlowValue low = flow_value(lattice, work, role);
    work[e] = caps[e];
    if (high > low) out.push_back(EdgeId{e});
  }
  return out;
}

FlowResult anchored_flow(const Lattice& lattice, const CapacityField& field) {
  return solve_flow(lattice, field.values, anchored_roles(lattice));
}

void write_flow_json(std::ostream& out, const FlowResult& flow, const CutSet& cut) {
  nlohmann::ordered_json j;
  j["value"] = flow.value;
  std::vector<std::uint32_t> ids;
  ids.reserve(cut.edges.size());
  for (EdgeId e : cut.edges) ids.push_back(index(e));
  j["cut_edges"] = ids;
  j["cut_capacity"] = cut.capacity;
  j["h_min"] = cut.h_min;
  j["h_max"] = cut.h_max;
  out << j.dump(2) << '\n';
}

}  // namespace fpp
