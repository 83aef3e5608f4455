#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/lattice.hpp"
#include "fpp/penalized.hpp"

namespace fpp {

enum class Quantity { kPhi, kPhiTilde, kPsiLip, kTau };

struct Evaluation {
  double value = 0;
  std::vector<double> delta;  // delta[j] = f(σ_j^b) - f(σ_j^a), one entry per bit
};

std::string_view quantity_name(Quantity q) noexcept;
// Accepts "phi", "phi_tilde", "psi_lip" and "tau". Throws DomainError otherwise.
Quantity parse_quantity(std::string_view s);

// A quantity viewed as a function of independent two-point bits: the edge capacities for Φ and
// τ, the vertex weights for Ψ_Lip, and the edge capacities followed by the M penalty draws for Φ̃.
class QuantityEvaluator {
 public:
  QuantityEvaluator(Quantity q, const CylinderSpec& spec, const TwoPointDist& dist, const PenaltyParams& penalty = {});

  Quantity quantity() const noexcept { return q_; }
  const Lattice& lattice() const noexcept { return lattice_; }
  const TwoPointDist& dist() const noexcept { return dist_; }
  std::size_t bits() const noexcept { return bits_; }
  bool integer_valued() const noexcept { return q_ != Quantity::kPhiTilde; }

  // `values` holds one entry in {a, b} per bit.
  double evaluate(std::span<const Capacity> values) const;
  // The bit values the pipeline draws for sample `index` under `seed`.
  std::vector<Capacity> draw(std::uint64_t seed, std::uint64_t index) const;
  double sample(std::uint64_t seed, std::uint64_t index) const { return evaluate(draw(seed, index)); }
  // Value together with every flip difference. Flow quantities reuse the residual graph and
  // Φ̃ reuses its slab values, so most differences cost no extra solve.
  Evaluation evaluate_with_derivatives(std::span<const Capacity> values) const;

 private:
  Quantity q_;
  CylinderSpec spec_;
  TwoPointDist dist_;
  PenaltyParams penalty_;
  Lattice lattice_;
  std::vector<std::uint8_t> roles_;
  std::unique_ptr<SlabFamily> slabs_;
  int M_ = 0;
  std::size_t bits_ = 0;
};

}  // namespace fpp
