#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// Weights t(x) on the vertices of [0,n]^{d-1} x [0,H], indexed by lattice vertex id.
struct VertexWeightField {
  CylinderSpec spec;
  std::vector<Capacity> weights;
  TwoPointDist dist;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;

  Capacity at(std::uint32_t base_point, int height) const noexcept {
    return weights[static_cast<std::size_t>(height) * base_count() + base_point];
  }
  std::uint32_t base_count() const noexcept {
    return static_cast<std::uint32_t>(weights.size() / (static_cast<std::size_t>(spec.H) + 1));
  }
};

VertexWeightField sample_vertex_weights(const CylinderSpec& spec, const TwoPointDist& dist, std::uint64_t seed,
                                        std::uint64_t sample_index);

// Height per base point, row-major like the bottom layer of the lattice.
struct LipschitzFunction {
  std::vector<int> psi;
};

struct LipschitzSolution {
  FlowValue value = 0;
  LipschitzFunction psi;
};

bool is_lipschitz(const CylinderSpec& spec, const LipschitzFunction& f);
FlowValue evaluate(const VertexWeightField& field, const LipschitzFunction& f);

// Exact minimum of Σ_u t(u, ψ(u)) over 1-Lipschitz ψ via a layered min-cut. The returned ψ is
// the lowest minimizer.
LipschitzSolution solve_lipschitz(const VertexWeightField& field);
// Same, with ψ pinned to boundary_height on the boundary of [0,n]^{d-1}.
LipschitzSolution solve_anchored_lipschitz(const VertexWeightField& field, int boundary_height);

// Exhaustive search; throws GuardError above max_candidates height assignments.
FlowValue brute_force_lipschitz(const VertexWeightField& field, std::uint64_t max_candidates = 10'000'000);
FlowValue brute_force_anchored_lipschitz(const VertexWeightField& field, int boundary_height,
                                         std::uint64_t max_candidates = 10'000'000);

// Grid CSV: one row per base point with its coordinates and ψ.
void write_psi_csv(std::ostream& out, const CylinderSpec& spec, const LipschitzFunction& f);

}  // namespace fpp
