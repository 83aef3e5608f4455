#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/lattice.hpp"
#include "fpp/penalized.hpp"
#include "fpp/quantity.hpp"

namespace fpp {

// Sample i always draws with (master_seed, sample_index = i), so any shard of a plan can be
// recomputed on its own.
struct MonteCarloPlan {
  Quantity quantity = Quantity::kPhi;
  CylinderSpec spec{2, 4, 8};
  TwoPointDist dist;
  PenaltyParams penalty;
  std::uint64_t n_samples = 1000;
  std::uint64_t master_seed = 0;
  int jobs = 1;

  void validate() const;
};

struct Estimate {
  double mean = 0;
  double variance = 0;  // unbiased, two-pass
  double stderr_of_mean = 0;
  double stderr_of_variance = 0;  // from the sample fourth central moment
  std::uint64_t n_samples = 0;
  std::uint64_t master_seed = 0;
};

Estimate summarize(std::span<const double> xs, std::uint64_t master_seed = 0);

std::vector<double> sample_values(const MonteCarloPlan& plan);
Estimate estimate_variance(const MonteCarloPlan& plan);

// Variance, Efron–Stein upper estimate and Newman–Piza lower estimate from one sample set.
// The Efron–Stein term uses E[(f(X) - f(X^{(j)}))_-^2 | X_{-j}] = p_a (1 - p_a) Δ_j², evaluated
// exactly for every bit of every sample. The Newman–Piza term is Var(t_e) Σ_e P(e ∈ E_min, t_e = b)²
// with the unbiased pair estimator for each square.
struct VarianceBounds {
  Estimate variance;
  Estimate efron_stein;  // mean and stderr_of_mean carry the estimate
  Estimate newman_piza;  // mean and stderr_of_mean carry the estimate (delta method)
};
VarianceBounds variance_bounds(const MonteCarloPlan& plan);
Estimate efron_stein_rhs(const MonteCarloPlan& plan);
Estimate newman_piza_lhs(const MonteCarloPlan& plan);

struct ChaosPoint {
  Ratio t;
  Estimate pivotal;    // |P_0 ∩ P_t|
  Estimate essential;  // |I_0 ∩ I_t|
  Estimate weighted;   // Σ_e Δ_e(X) Δ_e(X^t)
  double drop = 0;     // mean of the paired difference to the previous grid point
  double drop_stderr = 0;
};

struct ChaosCurve {
  std::vector<ChaosPoint> points;
  double integral = 0;           // Var(t_e) × trapezoid of the pivotal curve
  double integral_stderr = 0;
  double weighted_integral = 0;  // p_a (1 - p_a) × trapezoid of the weighted curve
  double weighted_integral_stderr = 0;
  Estimate variance;             // Var f on the t = 0 samples
};
// Flow quantities only (Φ or τ). The grid must be sorted inside [0, 1].
ChaosCurve chaos_curve(const MonteCarloPlan& plan, std::span<const Ratio> grid);

struct InfluenceOptions {
  bool derivative_norms = false;
  std::vector<double> xi{0.25, 0.5, 1.0};  // threshold exponents: count edges with p̂ >= n^{-ξ}
};

struct InfluenceProfile {
  std::uint64_t n_samples = 0;
  int slab_height = 0;
  int slab_count = 0;
  std::vector<double> hit;  // p̂(e), per parent edge
  double hit_sum = 0;
  std::vector<std::pair<double, std::uint64_t>> thresholds;
  std::vector<double> l1;  // per bit, edges then penalty bits; empty unless requested
  std::vector<double> l2;
  std::vector<std::uint64_t> j0_histogram;  // index j0 - 1
  double bottom = 0;  // P(j0 ∈ {1, 2})
  double bottom_stderr = 0;
  double top = 0;     // P(j0 ∈ {count - 1, count})
  double top_stderr = 0;
  double shift_max = 0;        // max_e |p̂(e) - p̂(e + 2e_d)|
  double shift_stderr = 0;     // paired stderr at that edge
  double shift_excess = 0;     // max_e (|p̂(e) - p̂(e + 2e_d)| - 4 stderr_e)
};
// Penalized flow: plan.quantity is ignored. slab_height 0 in the plan is resolved with
// pilot_slab_height on the first min(n_samples, 200) samples.
InfluenceProfile influence_profile(const MonteCarloPlan& plan, const InfluenceOptions& options = {});

// Σ_j ‖∂_j‖_2² / (1 + log(‖∂_j‖_2 / ‖∂_j‖_1)); bits with ‖∂_j‖_2 = 0 contribute nothing.
double talagrand_rhs(std::span<const double> l1, std::span<const double> l2);
// Upper bound on |∂_j Φ̃| for a penalty bit: 2 n^{(d-1)/2} / (n^δ log n).
double penalty_bit_derivative_bound(int d, int n, const Ratio& delta);

// min(H, 2 × the largest vertical extent among canonical min cuts of the given samples).
int pilot_slab_height(const MonteCarloPlan& plan, std::uint64_t samples);

struct LocalizationReport {
  std::vector<int> C;
  std::vector<double> outside_fraction;  // mean over samples of the cut fraction with |x_d - H/2| > C
  Estimate tau;
};
LocalizationReport anchored_localization(const MonteCarloPlan& plan, std::span<const int> C);

// Vertex-disjoint sub-cylinders: each base axis is split into intervals of m points, the last
// interval absorbing the remainder up to n.
std::vector<std::pair<Coords, Coords>> subcylinder_boxes(const CylinderSpec& spec, int m);

struct SubadditivityReport {
  int m = 0;
  std::size_t blocks = 0;
  Estimate defect;
  double defect_per_area = 0;  // mean defect / n^{d-1}
  std::uint64_t violations = 0;
  std::vector<std::uint64_t> violating_samples;
};
SubadditivityReport subadditivity_defect(const MonteCarloPlan& plan, int m);

struct ChimneyReport {
  std::uint64_t cuts = 0;
  std::vector<std::uint64_t> extent_histogram;
  int max_extent = 0;
  std::uint64_t violations = 0;
  std::uint64_t cuts_with_violations = 0;
  std::uint64_t empty_A = 0;
  std::uint64_t stops_overlap = 0;
  std::vector<std::uint64_t> violating_samples;
};
// Scans the source-side and the sink-side canonical min cut of every sample.
ChimneyReport chimney_statistics(const MonteCarloPlan& plan);

struct PenalizationReport {
  int slab_height = 0;
  int max_extent = 0;
  double bound = 0;  // n^{(d-1)/2} / log n
  double max_gap = 0;
  std::uint64_t gap_violations = 0;
  std::uint64_t slab_identity_violations = 0;
  std::uint64_t full_slab_identity_violations = 0;
  std::uint64_t size_violations = 0;
  std::vector<std::uint64_t> violating_samples;
  Estimate phi;
  Estimate phi_tilde;
};
// Per sample: Φ, the penalized minimum at the plan's slab height (0 resolves to twice the largest
// extent over the whole sweep), the slab identity at that height and at height H, and the size
// bound a|E_min(j0)| <= b (n+1)^{d-1}.
PenalizationReport penalization_sweep(const MonteCarloPlan& plan);

}  // namespace fpp
