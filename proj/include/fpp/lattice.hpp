#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fpp/types.hpp"

namespace fpp {

// Cylinder [0,n]^{d-1} x [0,H], closed on every side. Axis d-1 is vertical.
// n = 0 is allowed and gives a single vertical column.
struct CylinderSpec {
  int d = 2;
  int n = 1;
  int H = 1;

  std::uint64_t vertex_count() const;
  std::uint64_t edge_count() const;
  std::uint64_t base_count() const;  // (n+1)^{d-1}
  friend bool operator==(const CylinderSpec&, const CylinderSpec&) = default;
};

using Coords = std::array<int, kMaxDim>;

// Dense, immutable index of an axis-aligned box lattice. Vertex ids are row-major with the
// vertical coordinate slowest. Edge ids rank the (base vertex, axis) slots in vertex-major
// order, skipping slots whose far end would leave the box.
class Lattice {
 public:
  explicit Lattice(const CylinderSpec& spec);
  // General box with per-axis extents (coordinates run over [0, extent]).
  Lattice(int d, std::span<const int> extents);

  int dim() const noexcept { return d_; }
  int vertical_axis() const noexcept { return d_ - 1; }
  int extent(int axis) const noexcept { return extent_[axis]; }
  int height() const noexcept { return extent_[d_ - 1]; }
  std::uint32_t num_vertices() const noexcept { return num_vertices_; }
  std::uint32_t num_edges() const noexcept { return num_edges_; }
  std::uint32_t layer_size() const noexcept { return stride_[d_ - 1]; }
  std::uint32_t stride(int axis) const noexcept { return stride_[axis]; }

  // Only meaningful when every horizontal extent is equal.
  CylinderSpec spec() const noexcept { return {d_, extent_[0], extent_[d_ - 1]}; }

  VertexId vertex(const Coords& x) const noexcept;
  bool contains(const Coords& x) const noexcept;
  Coords coords(VertexId v) const noexcept;
  int height_of(VertexId v) const noexcept {
    return static_cast<int>(index(v) / stride_[d_ - 1]);
  }
  bool on_boundary(VertexId v) const noexcept;

  // Edge between v and v + e_axis, if it exists.
  std::optional<EdgeId> edge(VertexId base, int axis) const noexcept;
  VertexId edge_base(EdgeId e) const noexcept { return VertexId{edge_base_[index(e)]}; }
  int edge_axis(EdgeId e) const noexcept { return edge_axis_[index(e)]; }
  VertexId edge_head(EdgeId e) const noexcept {
    return VertexId{edge_base_[index(e)] + stride_[edge_axis_[index(e)]]};
  }
  bool is_vertical(EdgeId e) const noexcept { return edge_axis(e) == d_ - 1; }

  // Neighbor lookup. Directions are 2*axis (positive) and 2*axis + 1 (negative).
  int num_directions() const noexcept { return 2 * d_; }
  bool has_neighbor(VertexId v, int dir) const noexcept {
    return (arc_mask_[index(v)] >> dir) & 1u;
  }
  VertexId neighbor(VertexId v, int dir) const noexcept {
    const std::uint32_t s = stride_[dir >> 1];
    return VertexId{(dir & 1) ? index(v) - s : index(v) + s};
  }
  std::uint16_t direction_mask(VertexId v) const noexcept { return arc_mask_[index(v)]; }
  // Edge reached from v along dir; dir must be valid for v.
  EdgeId edge_along(VertexId v, int dir) const noexcept {
    const std::uint32_t base = (dir & 1) ? index(v) - stride_[dir >> 1] : index(v);
    return EdgeId{slot_edge_[static_cast<std::size_t>(base) * d_ + (dir >> 1)]};
  }

 private:
  void build();

  int d_ = 0;
  Coords extent_{};
  std::array<std::uint32_t, kMaxDim> stride_{};
  std::uint32_t num_vertices_ = 0;
  std::uint32_t num_edges_ = 0;
  std::vector<std::uint32_t> slot_edge_;
  std::vector<std::uint32_t> edge_base_;
  std::vector<std::uint8_t> edge_axis_;
  std::vector<std::uint16_t> arc_mask_;
};

// Bottom (x_d = 0) and top (x_d = H) vertex layers.
std::pair<VertexSet, VertexSet> boundary_sets(const Lattice& lattice);

// Translate an edge by k units along the vertical axis; nullopt when it would leave the box.
std::optional<EdgeId> shift_edge(const Lattice& lattice, EdgeId e, int k) noexcept;

// Unit (d-1)-cube dual to an edge. Coordinates are stored doubled so halves stay exact.
struct Plaquette {
  EdgeId edge{};
  int normal_axis = 0;
  Coords center2{};
  std::vector<Coords> corners2;  // 2^{d-1} corners, Gray-code order (cyclic for d = 3)
};

Plaquette dual_plaquette(const Lattice& lattice, EdgeId e);

// Edge boundary of a subset of the base grid [0,n]^{d-1}, given as a membership mask over
// base points in row-major order.
std::int64_t slab_edge_boundary(const CylinderSpec& spec, std::span<const std::uint8_t> subset);

void write_plaquettes_csv(std::ostream& out, const Lattice& lattice, std::span<const EdgeId> edges);
// Indexed polygon text: "PLAQ <dim> <#vertices> <#polygons>", vertex lines, polygon lines.
void write_plaquettes_polygons(std::ostream& out, const Lattice& lattice,
                               std::span<const EdgeId> edges);

// Box [lo, hi] cut out of a parent lattice, with the parent id of every sub-lattice edge.
struct SubLattice {
  Lattice lattice;
  Coords lo{};
  std::vector<EdgeId> parent_edge;
  std::vector<VertexId> parent_vertex;
};

SubLattice extract_box(const Lattice& parent, const Coords& lo, const Coords& hi);

}  // namespace fpp
