#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/flow.hpp"
#include "fpp/lattice.hpp"
#include "fpp/quantity.hpp"

namespace fpp {

struct EnumerationGuard {
  std::uint64_t max_configs = std::uint64_t{1} << 24;
  std::uint64_t max_cut_subsets = std::uint64_t{1} << 24;
};

mpq_class to_mpq(const Ratio& r);
std::string mpq_str(const mpq_class& q);  // canonical "p/q", or "p" for integers

// Values of an integer-valued quantity on every bit configuration. Bit k of the mask set means
// value b for bit k.
struct ExactTable {
  int bits = 0;
  TwoPointDist dist;
  std::vector<FlowValue> values;
};

ExactTable tabulate(const QuantityEvaluator& f, const EnumerationGuard& guard = {}, int jobs = 1);

struct ExactMoments {
  mpq_class mean;
  mpq_class variance;
};

ExactMoments exact_moments(const ExactTable& table);
ExactMoments exact_moments(const CylinderSpec& spec, const TwoPointDist& dist, Quantity q,
                           const EnumerationGuard& guard = {});

// Per-bit ‖∂_j f‖_1 and ‖∂_j f‖_2² with |∂_j f| = |f(σ_j^b) - f(σ_j^a)| / 2.
struct ExactNorms {
  std::vector<mpq_class> l1;
  std::vector<mpq_class> l2_squared;
};
ExactNorms exact_derivative_norms(const ExactTable& table);

// ∫₀¹ of the noise-coupled pivotal overlaps, integrated exactly in t.
struct ExactChaos {
  mpq_class pivotal;   // Var(t_e) ∫ E|P_0 ∩ P_t| dt
  mpq_class weighted;  // p_a (1 - p_a) ∫ E[Σ_e Δ_e(X) Δ_e(X^t)] dt, always equal to Var(f)
};
// Requires 4^bits <= max_configs.
ExactChaos exact_chaos_integral(const ExactTable& table, const EnumerationGuard& guard = {});
ExactChaos exact_chaos_integral(const CylinderSpec& spec, const TwoPointDist& dist, Quantity q,
                                const EnumerationGuard& guard = {});

struct EnumeratedCut {
  EdgeSet edges;
  FlowValue capacity = 0;
  std::vector<std::uint8_t> source_side;  // vertices reachable from the sources avoiding the cut
};

// Every minimum-capacity cut-set, found by enumerating source sides. Requires at most 24 edges
// and 2^(inner vertices) <= max_cut_subsets. Sorted by edge list.
std::vector<EnumeratedCut> enumerate_min_cuts(const Lattice& lattice, std::span<const Capacity> caps,
                                              std::span<const std::uint8_t> role,
                                              const EnumerationGuard& guard = {});

// Ground truth derived from the enumeration alone.
struct CutGroundTruth {
  FlowValue min_capacity = 0;
  EdgeSet canonical;  // cut of the intersection of all minimum source sides
  EdgeSet essential;  // intersection of all minimum cuts
  EdgeSet pivotal;    // min capacity with t_e = b exceeds that with t_e = a
};
CutGroundTruth enumerate_ground_truth(const Lattice& lattice, std::span<const Capacity> caps,
                                      const TwoPointDist& dist, std::span<const std::uint8_t> role,
                                      const EnumerationGuard& guard = {});

}  // namespace fpp
