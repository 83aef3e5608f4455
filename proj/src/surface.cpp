#include "fpp/surface.hpp"

#include <algorithm>
#include <ostream>

#include "json.hpp"

namespace fpp {

namespace {

std::vector<std::uint8_t> cut_mask(const Lattice& lattice, std::span<const EdgeId> cut) {
  std::vector<std::uint8_t> m(lattice.num_edges(), 0);
  for (EdgeId e : cut) {
    if (index(e) >= lattice.num_edges()) throw DomainError("edge id out of range");
    m[index(e)] = 1;
  }
  return m;
}

// Layer `height` points not reached from the top layer inside heights [height, H] avoiding E.
std::vector<std::uint8_t> blocked_from_mask(const Lattice& lattice, const std::vector<std::uint8_t>& in_cut,
                                            int height) {
  const std::uint32_t layer = lattice.layer_size();
  const std::uint32_t floor_id = layer * static_cast<std::uint32_t>(height);
  std::vector<std::uint8_t> seen(lattice.num_vertices(), 0);
  std::vector<std::uint32_t> queue;
  const std::uint32_t top0 = layer * static_cast<std::uint32_t>(lattice.height());
  for (std::uint32_t k = 0; k < layer; ++k) {
    seen[top0 + k] = 1;
    queue.push_back(top0 + k);
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const VertexId u{queue[qi]};
    for (int dir = 0; dir < lattice.num_directions(); ++dir) {
      if (!lattice.has_neighbor(u, dir)) continue;
      const std::uint32_t w = index(lattice.neighbor(u, dir));
      if (w < floor_id || seen[w] || in_cut[index(lattice.edge_along(u, dir))]) continue;
      seen[w] = 1;
      queue.push_back(w);
    }
  }
  std::vector<std::uint8_t> blocked(layer);
  for (std::uint32_t k = 0; k < layer; ++k) blocked[k] = !seen[floor_id + k];
  return blocked;
}

bool separates(const Lattice& lattice, const std::vector<std::uint8_t>& in_cut, std::span<const std::uint8_t> role) {
  std::vector<std::uint8_t> seen(lattice.num_vertices(), 0);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < lattice.num_vertices(); ++v) {
    if (role[v] == kSource) {
      seen[v] = 1;
      queue.push_back(v);
    }
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const VertexId u{queue[qi]};
    if (role[index(u)] == kSink) return false;
    for (int dir = 0; dir < lattice.num_directions(); ++dir) {
      if (!lattice.has_neighbor(u, dir)) continue;
      const std::uint32_t w = index(lattice.neighbor(u, dir));
      if (seen[w] || in_cut[index(lattice.edge_along(u, dir))]) continue;
      seen[w] = 1;
      queue.push_back(w);
    }
  }
  return true;
}

// Horizontal edges inside the layer with exactly one endpoint in the member mask.
void layer_boundary(const Lattice& lattice, const std::vector<std::uint8_t>& in_cut,
                    const std::vector<std::uint8_t>& members, int height, ScanLayer& out) {
  const std::uint32_t floor_id = lattice.layer_size() * static_cast<std::uint32_t>(height);
  out.boundary_size = 0;
  out.boundary_in_cut = true;
  for (std::uint32_t k = 0; k < lattice.layer_size(); ++k) {
    const VertexId v{floor_id + k};
    for (int axis = 0; axis + 1 < lattice.dim(); ++axis) {
      if (!lattice.has_neighbor(v, 2 * axis)) continue;
      const std::uint32_t w = index(lattice.neighbor(v, 2 * axis)) - floor_id;
      if (members[k] == members[w]) continue;
      ++out.boundary_size;
      if (!in_cut[index(lattice.edge_along(v, 2 * axis))]) out.boundary_in_cut = false;
    }
  }
}

std::vector<std::uint32_t> to_list(const std::vector<std::uint8_t>& mask, bool value) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t k = 0; k < mask.size(); ++k) {
    if ((mask[k] != 0) == value) out.push_back(k);
  }
  return out;
}

EdgeSet upper_patch(const Lattice& lattice, std::span<const EdgeId> cut, const std::vector<std::uint8_t>& blocked,
                    int height) {
  EdgeSet out;
  for (EdgeId e : cut) {
    if (lattice.height_of(lattice.edge_head(e)) <= height) out.push_back(e);
  }
  const std::uint32_t floor_id = lattice.layer_size() * static_cast<std::uint32_t>(height);
  for (std::uint32_t k = 0; k < blocked.size(); ++k) {
    if (blocked[k]) out.push_back(*lattice.edge(VertexId{floor_id + k - lattice.layer_size()}, lattice.vertical_axis()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EdgeSet lower_patch(const Lattice& lattice, std::span<const EdgeId> cut, const std::vector<std::uint8_t>& blocked,
                    int height) {
  EdgeSet out;
  for (EdgeId e : cut) {
    if (lattice.height_of(lattice.edge_base(e)) >= height) out.push_back(e);
  }
  const std::uint32_t floor_id = lattice.layer_size() * static_cast<std::uint32_t>(height);
  for (std::uint32_t k = 0; k < blocked.size(); ++k) {
    if (!blocked[k]) out.push_back(*lattice.edge(VertexId{floor_id + k}, lattice.vertical_axis()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

bool validate_cutset(const Lattice& lattice, std::span<const EdgeId> cut, std::span<const std::uint8_t> role) {
  if (role.size() != lattice.num_vertices()) throw DomainError("role array does not match the lattice");
  return separates(lattice, cut_mask(lattice, cut), role);
}

std::pair<int, int> vertical_extent(const Lattice& lattice, std::span<const EdgeId> cut) {
  if (cut.empty()) throw DomainError("vertical extent of an empty edge set");
  int lo = lattice.height();
  int hi = 0;
  for (EdgeId e : cut) {
    lo = std::min(lo, lattice.height_of(lattice.edge_base(e)));
    hi = std::max(hi, lattice.height_of(lattice.edge_head(e)));
  }
  return {lo, hi};
}

std::vector<std::uint8_t> blocked_layer(const Lattice& lattice, std::span<const EdgeId> cut, int height) {
  if (height < 0 || height > lattice.height()) throw DomainError("layer outside the cylinder");
  return blocked_from_mask(lattice, cut_mask(lattice, cut), height);
}

ChimneyScan chimney_scan(const Lattice& lattice, const TwoPointDist& dist, const CutSet& cut, bool check_patches) {
  const auto in_cut = cut_mask(lattice, cut.edges);
  const auto role = cylinder_roles(lattice);
  if (cut.edges.empty() || !separates(lattice, in_cut, role)) throw DomainError("edge set is not a cut-set");

  ChimneyScan scan;
  std::tie(scan.h_min, scan.h_max) = vertical_extent(lattice, cut.edges);
  scan.extent = scan.h_max - scan.h_min;
  const std::int64_t base = lattice.layer_size();
  const std::int64_t ten_b = 10 * static_cast<std::int64_t>(dist.b);
  const std::int64_t threshold = (ten_b - dist.a) * base;
  const int H = lattice.height();

  // Upper scan. A(i) is full below h_min, so T is found by i = extent + 1 at the latest.
  const int last_upper = std::min(scan.h_max, scan.extent + 1);
  for (int i = 1; i <= last_upper; ++i) {
    ScanLayer L;
    L.i = i;
    L.height = scan.h_max - i;
    const auto blocked = blocked_from_mask(lattice, in_cut, L.height);
    L.members = to_list(blocked, true);
    layer_boundary(lattice, in_cut, blocked, L.height, L);
    const std::int64_t size = static_cast<std::int64_t>(L.members.size());
    if (size == 0) scan.nonempty_A = false;
    if (scan.T_stop < 0 && ten_b * size >= threshold) scan.T_stop = i;

    if (i <= scan.extent && L.height >= 1) {
      std::int64_t above = 0;
      for (EdgeId e : cut.edges) above += lattice.height_of(lattice.edge_head(e)) > L.height;
      L.lhs = dist.a * above;
      L.rhs = dist.b * size;
      if (L.lhs > L.rhs) ++scan.violations;
      if (check_patches) {
        L.patched_checked = true;
        L.patched_valid = separates(lattice, cut_mask(lattice, upper_patch(lattice, cut.edges, blocked, L.height)), role);
        if (!L.patched_valid) ++scan.violations;
      }
    }
    if (!L.boundary_in_cut) ++scan.violations;
    scan.upper.push_back(std::move(L));
  }
  if (!scan.nonempty_A) ++scan.violations;

  // Lower scan. Â(i) is empty from h_max upward, so T̂ <= extent.
  const int last_lower = std::min(H - scan.h_min, scan.extent);
  for (int i = 1; i <= last_lower; ++i) {
    ScanLayer L;
    L.i = i;
    L.height = scan.h_min + i;
    const auto blocked = blocked_from_mask(lattice, in_cut, L.height);
    L.members = to_list(blocked, true);
    layer_boundary(lattice, in_cut, blocked, L.height, L);
    const std::int64_t outside = base - static_cast<std::int64_t>(L.members.size());
    if (scan.hatT_stop < 0 && ten_b * outside >= threshold) scan.hatT_stop = i;
    if (check_patches && L.height <= H - 1) {
      L.patched_checked = true;
      L.patched_valid = separates(lattice, cut_mask(lattice, lower_patch(lattice, cut.edges, blocked, L.height)), role);
      if (!L.patched_valid) ++scan.violations;
    }
    if (!L.boundary_in_cut) ++scan.violations;
    scan.lower.push_back(std::move(L));
  }
  if (scan.T_stop >= 0 && scan.hatT_stop >= 0) {
    scan.stops_overlap = scan.h_min + scan.hatT_stop + 1 >= scan.h_max - scan.T_stop;
  }
  return scan;
}

std::pair<EdgeSet, EdgeSet> patched_cutsets(const Lattice& lattice, const CutSet& cut, int i) {
  const auto in_cut = cut_mask(lattice, cut.edges);
  const auto [h_min, h_max] = vertical_extent(lattice, cut.edges);
  EdgeSet upper = cut.edges;
  EdgeSet lower = cut.edges;
  const int up_height = h_max - i;
  if (i >= 1 && up_height >= 1) {
    upper = upper_patch(lattice, cut.edges, blocked_from_mask(lattice, in_cut, up_height), up_height);
  }
  const int low_height = h_min + i;
  if (i >= 1 && low_height <= lattice.height() - 1) {
    lower = lower_patch(lattice, cut.edges, blocked_from_mask(lattice, in_cut, low_height), low_height);
  }
  return {std::move(upper), std::move(lower)};
}

void write_scan_json(std::ostream& out, const ChimneyScan& scan) {
  nlohmann::ordered_json j;
  j["h_min"] = scan.h_min;
  j["h_max"] = scan.h_max;
  j["extent"] = scan.extent;
  j["T"] = scan.T_stop;
  j["hatT"] = scan.hatT_stop;
  j["stops_overlap"] = scan.stops_overlap;
  j["violations"] = scan.violations;
  auto layers = [](const std::vector<ScanLayer>& v, bool upper) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& L : v) {
      nlohmann::ordered_json r;
      r["i"] = L.i;
      r["height"] = L.height;
      r["size"] = L.members.size();
      r["boundary"] = L.boundary_size;
      if (upper) r["constraint_slack"] = L.rhs - L.lhs;
      r["patched_valid"] = L.patched_valid;
      arr.push_back(std::move(r));
    }
    return arr;
  };
  j["upper"] = layers(scan.upper, true);
  j["lower"] = layers(scan.lower, false);
  out << j.dump(2) << '\n';
}

}  // namespace fpp
