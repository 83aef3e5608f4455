#include "fpp/lattice.hpp"

#include <limits>
#include <ostream>
#include <string>

#include "fpp/format.hpp"

namespace fpp {

namespace {

void check_spec(const CylinderSpec& s) {
  if (s.d < 2 || s.d > kMaxDim) throw DomainError("dimension d must lie in [2, " + std::to_string(kMaxDim) + "]");
  if (s.n < 0) throw DomainError("side length n must be non-negative");
  if (s.H < 1) throw DomainError("height H must be at least 1");
}

std::uint64_t ipow_checked(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base) throw CapacityError("lattice size overflows 64 bits");
    r *= base;
  }
  return r;
}

}  // namespace

std::uint64_t CylinderSpec::base_count() const {
  check_spec(*this);
  return ipow_checked(static_cast<std::uint64_t>(n) + 1, d - 1);
}

std::uint64_t CylinderSpec::vertex_count() const {
  return base_count() * (static_cast<std::uint64_t>(H) + 1);
}

std::uint64_t CylinderSpec::edge_count() const {
  const std::uint64_t side = static_cast<std::uint64_t>(n) + 1;
  const std::uint64_t horizontal =
      static_cast<std::uint64_t>(d - 1) * n * ipow_checked(side, d - 2) * (static_cast<std::uint64_t>(H) + 1);
  return horizontal + base_count() * static_cast<std::uint64_t>(H);
}

Lattice::Lattice(const CylinderSpec& spec) : d_(spec.d) {
  check_spec(spec);
  for (int k = 0; k + 1 < d_; ++k) extent_[k] = spec.n;
  extent_[d_ - 1] = spec.H;
  build();
}

Lattice::Lattice(int d, std::span<const int> extents) : d_(d) {
  if (d < 1 || d > kMaxDim || static_cast<int>(extents.size()) != d) {
    throw DomainError("box lattice needs one extent per axis");
  }
  for (int k = 0; k < d; ++k) {
    if (extents[k] < 0) throw DomainError("box extents must be non-negative");
    extent_[k] = extents[k];
  }
  build();
}

void Lattice::build() {
  std::uint64_t count = 1;
  for (int k = 0; k < d_; ++k) {
    if (count > std::numeric_limits<std::uint32_t>::max()) break;
    stride_[k] = static_cast<std::uint32_t>(count);
    count *= static_cast<std::uint64_t>(extent_[k]) + 1;
  }
  // Arc slots are addressed as v * 2d in 32 bits by the flow solver.
  if (count * 2 * static_cast<std::uint64_t>(d_) > std::numeric_limits<std::uint32_t>::max()) {
    throw CapacityError("lattice has too many vertices for 32-bit arc indexing");
  }
  num_vertices_ = static_cast<std::uint32_t>(count);

  slot_edge_.assign(static_cast<std::size_t>(num_vertices_) * d_, std::numeric_limits<std::uint32_t>::max());
  arc_mask_.assign(num_vertices_, 0);
  edge_base_.clear();
  edge_axis_.clear();

  Coords x{};
  for (std::uint32_t v = 0; v < num_vertices_; ++v) {
    std::uint16_t mask = 0;
    for (int k = 0; k < d_; ++k) {
      if (x[k] < extent_[k]) {
        mask |= static_cast<std::uint16_t>(1u << (2 * k));
        slot_edge_[static_cast<std::size_t>(v) * d_ + k] = static_cast<std::uint32_t>(edge_base_.size());
        edge_base_.push_back(v);
        edge_axis_.push_back(static_cast<std::uint8_t>(k));
      }
      if (x[k] > 0) mask |= static_cast<std::uint16_t>(1u << (2 * k + 1));
    }
    arc_mask_[v] = mask;
    for (int k = 0; k < d_; ++k) {
      if (++x[k] <= extent_[k]) break;
      x[k] = 0;
    }
  }
  num_edges_ = static_cast<std::uint32_t>(edge_base_.size());
}

VertexId Lattice::vertex(const Coords& x) const noexcept {
  std::uint32_t id = 0;
  for (int k = 0; k < d_; ++k) id += static_cast<std::uint32_t>(x[k]) * stride_[k];
  return VertexId{id};
}

bool Lattice::contains(const Coords& x) const noexcept {
  for (int k = 0; k < d_; ++k) {
    if (x[k] < 0 || x[k] > extent_[k]) return false;
  }
  return true;
}

Coords Lattice::coords(VertexId v) const noexcept {
  Coords x{};
  std::uint32_t r = index(v);
  for (int k = d_ - 1; k >= 0; --k) {
    x[k] = static_cast<int>(r / stride_[k]);
    r %= stride_[k];
  }
  return x;
}

bool Lattice::on_boundary(VertexId v) const noexcept {
  const Coords x = coords(v);
  for (int k = 0; k < d_; ++k) {
    if (x[k] == 0 || x[k] == extent_[k]) return true;
  }
  return false;
}

std::optional<EdgeId> Lattice::edge(VertexId base, int axis) const noexcept {
  if (axis < 0 || axis >= d_ || index(base) >= num_vertices_) return std::nullopt;
  if (!has_neighbor(base, 2 * axis)) return std::nullopt;
  return EdgeId{slot_edge_[static_cast<std::size_t>(index(base)) * d_ + axis]};
}

std::pair<VertexSet, VertexSet> boundary_sets(const Lattice& lattice) {
  const std::uint32_t layer = lattice.layer_size();
  const std::uint32_t top0 = layer * static_cast<std::uint32_t>(lattice.height());
  VertexSet bottom, top;
  bottom.reserve(layer);
  top.reserve(layer);
  for (std::uint32_t i = 0; i < layer; ++i) {
    bottom.push_back(VertexId{i});
    top.push_back(VertexId{top0 + i});
  }
  return {std::move(bottom), std::move(top)};
}

std::optional<EdgeId> shift_edge(const Lattice& lattice, EdgeId e, int k) noexcept {
  const int h = lattice.height_of(lattice.edge_base(e));
  const int top = lattice.is_vertical(e) ? h + 1 : h;
  if (h + k < 0 || top + k > lattice.height()) return std::nullopt;
  const std::int64_t base = static_cast<std::int64_t>(index(lattice.edge_base(e))) +
                            static_cast<std::int64_t>(k) * lattice.layer_size();
  return lattice.edge(VertexId{static_cast<std::uint32_t>(base)}, lattice.edge_axis(e));
}

Plaquette dual_plaquette(const Lattice& lattice, EdgeId e) {
  Plaquette p;
  p.edge = e;
  p.normal_axis = lattice.edge_axis(e);
  const Coords x = lattice.coords(lattice.edge_base(e));
  const int d = lattice.dim();
  for (int k = 0; k < d; ++k) p.center2[k] = 2 * x[k];
  p.center2[p.normal_axis] += 1;

  int others[kMaxDim];
  int m = 0;
  for (int k = 0; k < d; ++k) {
    if (k != p.normal_axis) others[m++] = k;
  }
  const unsigned count = 1u << m;
  p.corners2.reserve(count);
  for (unsigned g = 0; g < count; ++g) {
    const unsigned gray = g ^ (g >> 1);
    Coords c = p.center2;
    for (int j = 0; j < m; ++j) c[others[j]] += ((gray >> j) & 1u) ? 1 : -1;
    p.corners2.push_back(c);
  }
  return p;
}

std::int64_t slab_edge_boundary(const CylinderSpec& spec, std::span<const std::uint8_t> subset) {
  const std::uint64_t count = spec.base_count();
  if (subset.size() != count) throw DomainError("subset mask must cover every base point");
  const int dims = spec.d - 1;
  const std::uint64_t side = static_cast<std::uint64_t>(spec.n) + 1;
  std::int64_t boundary = 0;
  std::array<int, kMaxDim> x{};
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t stride = 1;
    for (int k = 0; k < dims; ++k) {
      if (x[k] < spec.n && (subset[i] != 0) != (subset[i + stride] != 0)) ++boundary;
      stride *= side;
    }
    for (int k = 0; k < dims; ++k) {
      if (++x[k] <= spec.n) break;
      x[k] = 0;
    }
  }
  return boundary;
}

namespace {

void append_half(std::string& out, int twice) {
  // Doubled integer to a fixed one-decimal string.
  const int whole = twice / 2;
  const bool half = (twice % 2) != 0;
  if (twice < 0 && half && whole == 0) out += '-';
  append_int(out, whole);
  out += half ? ".5" : ".0";
}

}  // namespace

void write_plaquettes_csv(std::ostream& out, const Lattice& lattice, std::span<const EdgeId> edges) {
  const int d = lattice.dim();
  const int corners = 1 << (d - 1);
  std::string line = "edge,normal_axis";
  for (int c = 0; c < corners; ++c) line += ",corner" + std::to_string(c);
  out << line << '\n';
  for (EdgeId e : edges) {
    const Plaquette p = dual_plaquette(lattice, e);
    line.clear();
    append_int(line, index(e));
    line += ',';
    append_int(line, p.normal_axis);
    for (const Coords& c : p.corners2) {
      line += ',';
      for (int k = 0; k < d; ++k) {
        if (k) line += ' ';
        append_half(line, c[k]);
      }
    }
    out << line << '\n';
  }
}

void write_plaquettes_polygons(std::ostream& out, const Lattice& lattice, std::span<const EdgeId> edges) {
  const int d = lattice.dim();
  const std::size_t corners = std::size_t{1} << (d - 1);
  out << "PLAQ " << d << ' ' << edges.size() * corners << ' ' << edges.size() << '\n';
  std::string line;
  for (EdgeId e : edges) {
    const Plaquette p = dual_plaquette(lattice, e);
    for (const Coords& c : p.corners2) {
      line.clear();
      for (int k = 0; k < d; ++k) {
        if (k) line += ' ';
        append_half(line, c[k]);
      }
      out << line << '\n';
    }
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out << corners;
    for (std::size_t c = 0; c < corners; ++c) out << ' ' << i * corners + c;
    out << '\n';
  }
}

SubLattice extract_box(const Lattice& parent, const Coords& lo, const Coords& hi) {
  const int d = parent.dim();
  int ext[kMaxDim];
  for (int k = 0; k < d; ++k) {
    if (lo[k] < 0 || hi[k] > parent.extent(k) || lo[k] > hi[k]) throw DomainError("box outside parent lattice");
    ext[k] = hi[k] - lo[k];
  }
  SubLattice sub{Lattice(d, std::span<const int>(ext, static_cast<std::size_t>(d))), lo, {}, {}};
  const Lattice& L = sub.lattice;
  sub.parent_vertex.resize(L.num_vertices());
  for (std::uint32_t v = 0; v < L.num_vertices(); ++v) {
    Coords x = L.coords(VertexId{v});
    for (int k = 0; k < d; ++k) x[k] += lo[k];
    sub.parent_vertex[v] = parent.vertex(x);
  }
  sub.parent_edge.resize(L.num_edges());
  for (std::uint32_t e = 0; e < L.num_edges(); ++e) {
    const EdgeId id{e};
    sub.parent_edge[e] = *parent.edge(sub.parent_vertex[index(L.edge_base(id))], L.edge_axis(id));
  }
  return sub;
}

}  // namespace fpp
