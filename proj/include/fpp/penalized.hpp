#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/flow.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

struct PenaltyParams {
  Ratio epsilon = Ratio::of(1, 10);
  Ratio delta = Ratio::of(1, 5);
  int slab_height = 0;  // 0 until resolved against a pilot batch

  // Requires 0 < ε < δ < 1/4.
  void validate() const;
};

// ⌊n^ε⌋ evaluated exactly for rational ε.
int penalty_M(int n, const Ratio& epsilon);

struct PenaltyProfile {
  int n = 0;
  int d = 0;
  int H = 0;
  int M = 0;
  std::vector<int> Z;  // ±1, -1 with probability p_a
  int S_M = 0;
  int i0 = 0;
  double n_delta = 0;  // n^δ
  double scale = 0;    // n^{(d-1)/2} / ln n
  std::vector<double> Y;  // Y[i - 1] for 1 <= i <= H

  double y(int i) const { return Y[static_cast<std::size_t>(i - 1)]; }
};

// Y_i = 0 when |i0 - i| <= H/2 - n^δ, otherwise scale * (|i0 - i| - H/2 + n^δ) / n^δ.
double penalty_value(int i, int i0, int H, double n_delta, double scale);

PenaltyProfile penalty_profile_from_draws(const PenaltyParams& params, int d, int n, int H, std::vector<int> Z);
PenaltyProfile penalty_profile(const PenaltyParams& params, int d, int n, int H, const TwoPointDist& dist,
                               std::uint64_t seed, std::uint64_t sample_index);

// All translates of a slab of fixed height. Slab i (1-based) spans heights [i - 1, i - 1 + s],
// so slab 1 starts on the bottom layer and the last slab, i = H - s + 1, ends on the top one.
class SlabFamily {
 public:
  SlabFamily(const Lattice& parent, int slab_height);

  const Lattice& parent() const noexcept { return *parent_; }
  const Lattice& slab() const noexcept { return slab_; }
  int slab_height() const noexcept { return height_; }
  int count() const noexcept { return count_; }
  std::span<const std::uint32_t> parent_edges(int i) const;
  std::span<const std::uint8_t> roles() const noexcept { return roles_; }
  // Slab indices [first, last] whose box contains edge e (empty when first > last).
  std::pair<int, int> slabs_containing(EdgeId e) const noexcept;

  void gather(std::span<const Capacity> caps, int i, std::vector<Capacity>& out) const;
  FlowValue sliced_flow(std::span<const Capacity> caps, int i) const;
  FlowResult sliced_result(std::span<const Capacity> caps, int i) const;
  // Canonical cut of slab i, expressed in parent edge ids.
  CutSet sliced_cut(std::span<const Capacity> caps, int i) const;

 private:
  const Lattice* parent_;
  Lattice slab_;
  int height_;
  int count_;
  std::vector<std::uint32_t> edge_map_;  // count_ rows of slab_.num_edges()
  std::vector<std::uint8_t> roles_;
};

FlowValue sliced_flow(const Lattice& lattice, const CapacityField& field, int i, int slab_height);

struct PenalizedResult {
  double phi_tilde = 0;
  int j0 = 0;
  std::vector<FlowValue> X;  // X[i - 1]
  CutSet E_min;              // parent edge ids
};

PenalizedResult penalized_minimum(const SlabFamily& slabs, std::span<const Capacity> caps,
                                  const PenaltyProfile& profile);
PenalizedResult penalized_minimum(const Lattice& lattice, const CapacityField& field, const PenaltyProfile& profile,
                                  const PenaltyParams& params);

// Φ̃ after setting t_e = value, reusing the slab values of `base`. Only slabs that contain e and
// could move the minimum are recomputed.
double penalized_with_edge(const SlabFamily& slabs, std::span<const Capacity> caps, const PenaltyProfile& profile,
                           const PenalizedResult& base, EdgeId e, Capacity value);

// Φ̃ for the same slab values under a different penalty profile.
double penalized_with_profile(const PenalizedResult& base, const PenaltyProfile& profile, int slab_count);

// n^{(d-1)/2} / ln n, the deterministic gap allowed between Φ̃ and Φ.
double penalization_gap_bound(int d, int n);

}  // namespace fpp
