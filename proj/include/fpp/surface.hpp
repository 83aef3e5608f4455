#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/flow.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// True iff no path from a source to a sink avoids E.
bool validate_cutset(const Lattice& lattice, std::span<const EdgeId> cut, std::span<const std::uint8_t> role);

// (h_min, h_max) over the endpoints of E. Throws DomainError on an empty set.
std::pair<int, int> vertical_extent(const Lattice& lattice, std::span<const EdgeId> cut);

// Points of layer `height` from which every path to the top layer inside heights [height, H]
// crosses E. Returned as a mask over base points.
std::vector<std::uint8_t> blocked_layer(const Lattice& lattice, std::span<const EdgeId> cut, int height);

struct ScanLayer {
  int i = 0;
  int height = 0;
  std::vector<std::uint32_t> members;  // base-point indices of A(i), or of Â(i) for the lower scan
  std::int64_t boundary_size = 0;      // |ΔA(i)| inside the layer
  bool boundary_in_cut = true;         // ΔA(i) ⊆ E ∩ U_i
  std::int64_t lhs = 0;                // a|E \ F_i|  (upper scan only)
  std::int64_t rhs = 0;                // b|A(i)|     (upper scan only)
  bool patched_checked = false;
  bool patched_valid = true;           // E_i (upper) or Ê_i (lower) separates bottom from top
};

struct ChimneyScan {
  int h_min = 0;
  int h_max = 0;
  int extent = 0;
  std::vector<ScanLayer> upper;  // i = 1 .. last scanned
  std::vector<ScanLayer> lower;
  int T_stop = -1;
  int hatT_stop = -1;
  bool nonempty_A = true;        // A(i) != ∅ for every scanned upper layer
  bool stops_overlap = true;     // h_min + T̂ + 1 >= h_max - T
  std::int64_t violations = 0;   // failed lemma checks across all layers
};

// Upper and lower scans of a validated cut. The constraint a|E \ F_i| <= b|A(i)| and the
// patched cut-sets are checked for 1 <= i <= h_max - h_min wherever the patch stays inside the box.
// Throws DomainError if E is not a cut.
ChimneyScan chimney_scan(const Lattice& lattice, const TwoPointDist& dist, const CutSet& cut, bool check_patches = true);

// E_i = F_i ∪ {x, x - e_d : x ∈ A(i)} and Ê_i = G_i ∪ {x, x + e_d : x ∉ Â(i)}. A side whose
// patch would leave the box is returned as E unchanged.
std::pair<EdgeSet, EdgeSet> patched_cutsets(const Lattice& lattice, const CutSet& cut, int i);

void write_scan_json(std::ostream& out, const ChimneyScan& scan);

}  // namespace fpp
