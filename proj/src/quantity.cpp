#include "fpp/quantity.hpp"

#include <string>

#include "fpp/flow.hpp"
#include "fpp/lipschitz.hpp"

namespace fpp {

std::string_view quantity_name(Quantity q) noexcept {
  switch (q) {
    case Quantity::kPhi: return "phi";
    case Quantity::kPhiTilde: return "phi_tilde";
    case Quantity::kPsiLip: return "psi_lip";
    case Quantity::kTau: return "tau";
  }
  return "?";
}

Quantity parse_quantity(std::string_view s) {
  if (s == "phi") return Quantity::kPhi;
  if (s == "phi_tilde") return Quantity::kPhiTilde;
  if (s == "psi_lip") return Quantity::kPsiLip;
  if (s == "tau") return Quantity::kTau;
  throw DomainError("unknown quantity '" + std::string(s) + "'");
}

QuantityEvaluator::QuantityEvaluator(Quantity q, const CylinderSpec& spec, const TwoPointDist& dist,
                                     const PenaltyParams& penalty)
    : q_(q), spec_(spec), dist_(dist), penalty_(penalty), lattice_(spec) {
  dist_.validate();
  switch (q_) {
    case Quantity::kPhi:
      roles_ = cylinder_roles(lattice_);
      bits_ = lattice_.num_edges();
      break;
    case Quantity::kTau:
      roles_ = anchored_roles(lattice_);
      bits_ = lattice_.num_edges();
      break;
    case Quantity::kPsiLip:
      bits_ = lattice_.num_vertices();
      break;
    case Quantity::kPhiTilde:
      penalty_.validate();
      slabs_ = std::make_unique<SlabFamily>(lattice_, penalty_.slab_height == 0 ? spec.H : penalty_.slab_height);
      M_ = penalty_M(spec.n, penalty_.epsilon);
      bits_ = lattice_.num_edges() + static_cast<std::size_t>(M_);
      break;
  }
}

double QuantityEvaluator::evaluate(std::span<const Capacity> values) const {
  if (values.size() != bits_) throw DomainError("bit vector does not match the quantity");
  switch (q_) {
    case Quantity::kPhi:
    case Quantity::kTau:
      return static_cast<double>(flow_value(lattice_, values, roles_));
    case Quantity::kPsiLip: {
      VertexWeightField f;
      f.spec = spec_;
      f.weights.assign(values.begin(), values.end());
      f.dist = dist_;
      return static_cast<double>(solve_lipschitz(f).value);
    }
    case Quantity::kPhiTilde: {
      const std::size_t E = lattice_.num_edges();
      std::vector<int> Z(static_cast<std::size_t>(M_));
      for (std::size_t k = 0; k < Z.size(); ++k) Z[k] = values[E + k] == dist_.a ? -1 : 1;
      const PenaltyProfile profile = penalty_profile_from_draws(penalty_, spec_.d, spec_.n, spec_.H, std::move(Z));
      return penalized_minimum(*slabs_, values.first(E), profile).phi_tilde;
    }
  }
  return 0;
}

Evaluation QuantityEvaluator::evaluate_with_derivatives(std::span<const Capacity> values) const {
  if (values.size() != bits_) throw DomainError("bit vector does not match the quantity");
  Evaluation out;
  out.delta.assign(bits_, 0.0);
  switch (q_) {
    case Quantity::kPhi:
    case Quantity::kTau: {
      const FlowResult r = solve_flow(lattice_, values, roles_);
      out.value = static_cast<double>(r.value);
      for (const EdgeDelta& d : edge_derivatives(lattice_, values, dist_, roles_, r)) {
        out.delta[index(d.edge)] = static_cast<double>(d.delta);
      }
      break;
    }
    case Quantity::kPsiLip: {
      VertexWeightField f;
      f.spec = spec_;
      f.weights.assign(values.begin(), values.end());
      f.dist = dist_;
      out.value = static_cast<double>(solve_lipschitz(f).value);
      for (std::size_t j = 0; j < bits_; ++j) {
        const Capacity keep = f.weights[j];
        f.weights[j] = keep == dist_.a ? dist_.b : dist_.a;
        const double flipped = static_cast<double>(solve_lipschitz(f).value);
        f.weights[j] = keep;
        out.delta[j] = keep == dist_.a ? flipped - out.value : out.value - flipped;
      }
      break;
    }
    case Quantity::kPhiTilde: {
      const std::size_t E = lattice_.num_edges();
      std::vector<int> Z(static_cast<std::size_t>(M_));
      for (std::size_t k = 0; k < Z.size(); ++k) Z[k] = values[E + k] == dist_.a ? -1 : 1;
      const auto caps = values.first(E);
      const PenaltyProfile profile = penalty_profile_from_draws(penalty_, spec_.d, spec_.n, spec_.H, Z);
      const PenalizedResult base = penalized_minimum(*slabs_, caps, profile);
      out.value = base.phi_tilde;
      for (std::size_t e = 0; e < E; ++e) {
        const bool at_a = caps[e] == dist_.a;
        const double flipped =
            penalized_with_edge(*slabs_, caps, profile, base, EdgeId{static_cast<std::uint32_t>(e)}, at_a ? dist_.b : dist_.a);
        out.delta[e] = at_a ? flipped - out.value : out.value - flipped;
      }
      for (std::size_t k = 0; k < Z.size(); ++k) {
        std::vector<int> flippedZ = Z;
        flippedZ[k] = -Z[k];
        const PenaltyProfile other = penalty_profile_from_draws(penalty_, spec_.d, spec_.n, spec_.H, std::move(flippedZ));
        const double flipped = penalized_with_profile(base, other, slabs_->count());
        // Z = -1 is the draw a, so the b-side value carries Z = +1.
        out.delta[E + k] = Z[k] < 0 ? flipped - out.value : out.value - flipped;
      }
      break;
    }
  }
  return out;
}

std::vector<Capacity> QuantityEvaluator::draw(std::uint64_t seed, std::uint64_t index) const {
  switch (q_) {
    case Quantity::kPhi:
    case Quantity::kTau:
      return sample_two_point(bits_, dist_, DrawAddress{seed, index, Stream::kEdges});
    case Quantity::kPsiLip:
      return sample_two_point(bits_, dist_, DrawAddress{seed, index, Stream::kVertexWeights});
    case Quantity::kPhiTilde: {
      auto v = sample_two_point(lattice_.num_edges(), dist_, DrawAddress{seed, index, Stream::kEdges});
      const auto z = sample_two_point(static_cast<std::size_t>(M_), dist_, DrawAddress{seed, index, Stream::kPenalty});
      v.insert(v.end(), z.begin(), z.end());
      return v;
    }
  }
  return {};
}

}  // namespace fpp
