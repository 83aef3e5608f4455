#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/lattice.hpp"
#include "fpp/push_relabel.hpp"
#include "fpp/types.hpp"

namespace fpp {

struct FlowResult {
  FlowValue value = 0;
  std::vector<FlowValue> edge_flows;          // net flow from edge base to edge head
  std::vector<std::uint8_t> source_reachable;  // residual reachability from the sources
  std::vector<std::uint8_t> sink_reaching;     // residual path into the sinks exists
};

struct CutSet {
  EdgeSet edges;
  FlowValue capacity = 0;
  int h_min = -1;
  int h_max = -1;
  bool valid = true;
};

// Per-vertex terminal roles. Throws DomainError on empty or overlapping sets.
std::vector<std::uint8_t> make_roles(const Lattice& lattice, const VertexSet& sources, const VertexSet& sinks);
// Bottom layer as sources, top layer as sinks.
std::vector<std::uint8_t> cylinder_roles(const Lattice& lattice);
// Boundary vertices strictly below the meridian x_d = H/2 are sources, strictly above are sinks.
std::vector<std::uint8_t> anchored_roles(const Lattice& lattice);

FlowResult solve_flow(const Lattice& lattice, std::span<const Capacity> caps, std::span<const std::uint8_t> role);
FlowValue flow_value(const Lattice& lattice, std::span<const Capacity> caps, std::span<const std::uint8_t> role);

FlowResult max_flow(const Lattice& lattice, const CapacityField& field, const VertexSet& sources,
                    const VertexSet& sinks);

// Edges leaving the residual-reachable source side.
CutSet canonical_min_cut(const Lattice& lattice, std::span<const Capacity> caps, const FlowResult& flow);
// Edges entering the set of vertices that still reach a sink.
CutSet sink_side_min_cut(const Lattice& lattice, std::span<const Capacity> caps, const FlowResult& flow);

CutSet make_cutset(const Lattice& lattice, std::span<const Capacity> caps, EdgeSet edges);

// Edges in every minimum cut: one endpoint on the source side, the other reaching the sink.
EdgeSet essential_edges(const Lattice& lattice, const FlowResult& flow);
EdgeSet essential_set(const Lattice& lattice, const CapacityField& field, const VertexSet& sources,
                      const VertexSet& sinks);
// Cross-check: edges whose capacity increment by one unit strictly raises the flow.
EdgeSet essential_by_perturbation(const Lattice& lattice, std::span<const Capacity> caps,
                                  std::span<const std::uint8_t> role);

struct EdgeDelta {
  EdgeId edge;
  FlowValue delta;  // f(t_e = b) - f(t_e = a)
};

// Nonzero flip differences, in edge order. Edges at a use the essential test and edges at b a
// flow filter; a flow is recomputed only when those are inconclusive.
std::vector<EdgeDelta> edge_derivatives(const Lattice& lattice, std::span<const Capacity> caps,
                                        const TwoPointDist& dist, std::span<const std::uint8_t> role,
                                        const FlowResult& flow);

// Edges with f(t_e = b) > f(t_e = a).
EdgeSet pivotal_edges(const Lattice& lattice, std::span<const Capacity> caps, const TwoPointDist& dist,
                      std::span<const std::uint8_t> role, const FlowResult& flow);
EdgeSet pivotal_set(const Lattice& lattice, const CapacityField& field, const VertexSet& sources,
                    const VertexSet& sinks);
// Two flow computations per edge.
EdgeSet pivotal_set_definitional(const Lattice& lattice, std::span<const Capacity> caps, const TwoPointDist& dist,
                                 std::span<const std::uint8_t> role);

FlowResult anchored_flow(const Lattice& lattice, const CapacityField& field);

// JSON object with value, cut edge ids and vertical extent.
void write_flow_json(std::ostream& out, const FlowResult& flow, const CutSet& cut);

}  // namespace fpp
