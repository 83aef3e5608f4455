#include "fpp/penalized.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>

#include "fpp/simd.hpp"

namespace fpp {

void PenaltyParams::validate() const {
  const Ratio quarter = Ratio::of(1, 4);
  if (epsilon.is_zero() || !(epsilon < delta) || !(delta < quarter)) {
    throw DomainError("penalty exponents need 0 < epsilon < delta < 1/4");
  }
  if (slab_height < 0) throw DomainError("slab height must be non-negative");
}

int penalty_M(int n, const Ratio& epsilon) {
  if (n < 1) throw DomainError("n must be positive");
  // Largest m with m^q <= n^p.
  const auto p = static_cast<unsigned long>(epsilon.num);
  const auto q = static_cast<unsigned long>(epsilon.den);
  mpz_class target;
  mpz_ui_pow_ui(target.get_mpz_t(), static_cast<unsigned long>(n), p);
  mpz_class root;
  mpz_root(root.get_mpz_t(), target.get_mpz_t(), q);
  return static_cast<int>(root.get_si());
}

double penalty_value(int i, int i0, int H, double n_delta, double scale) {
  const double dist = std::abs(i0 - i);
  const double half = H / 2.0;
  if (dist <= half - n_delta) return 0.0;
  return scale * ((dist - half) + n_delta) / n_delta;
}

double penalization_gap_bound(int d, int n) {
  return std::pow(static_cast<double>(n), (d - 1) / 2.0) / std::log(static_cast<double>(n));
}

PenaltyProfile penalty_profile_from_draws(const PenaltyParams& params, int d, int n, int H, std::vector<int> Z) {
  params.validate();
  if (n < 2) throw DomainError("penalty profile needs n >= 2");
  PenaltyProfile p;
  p.n = n;
  p.d = d;
  p.H = H;
  p.M = static_cast<int>(Z.size());
  p.Z = std::move(Z);
  for (int z : p.Z) {
    if (z != 1 && z != -1) throw DomainError("penalty draws must be +1 or -1");
    p.S_M += z;
  }
  p.i0 = H / 2 + p.S_M;
  p.n_delta = std::pow(static_cast<double>(n), params.delta.to_double());
  p.scale = penalization_gap_bound(d, n);
  p.Y.resize(static_cast<std::size_t>(H));
  for (int i = 1; i <= H; ++i) p.Y[static_cast<std::size_t>(i - 1)] = penalty_value(i, p.i0, H, p.n_delta, p.scale);
  return p;
}

PenaltyProfile penalty_profile(const PenaltyParams& params, int d, int n, int H, const TwoPointDist& dist,
                               std::uint64_t seed, std::uint64_t sample_index) {
  params.validate();
  if (n < 2) throw DomainError("penalty profile needs n >= 2");
  const int M = penalty_M(n, params.epsilon);
  if (M < 1) throw DomainError("penalty needs M >= 1");
  const auto bits = sample_two_point(static_cast<std::size_t>(M), dist, DrawAddress{seed, sample_index, Stream::kPenalty});
  std::vector<int> Z(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) Z[k] = bits[k] == dist.a ? -1 : 1;
  return penalty_profile_from_draws(params, d, n, H, std::move(Z));
}

namespace {

Lattice slab_lattice(const Lattice& parent, int s) {
  int ext[kMaxDim];
  for (int k = 0; k < parent.dim(); ++k) ext[k] = parent.extent(k);
  ext[parent.dim() - 1] = s;
  return Lattice(parent.dim(), std::span<const int>(ext, static_cast<std::size_t>(parent.dim())));
}

}  // namespace

SlabFamily::SlabFamily(const Lattice& parent, int slab_height)
    : parent_(&parent),
      slab_((slab_height >= 1 && slab_height <= parent.height()) ? slab_lattice(parent, slab_height)
                                                                 : throw DomainError("slab height must lie in [1, H]")),
      height_(slab_height),
      count_(parent.height() - slab_height + 1) {
  const std::size_t per = slab_.num_edges();
  edge_map_.resize(per * static_cast<std::size_t>(count_));
  for (int i = 1; i <= count_; ++i) {
    Coords lo{}, hi{};
    for (int k = 0; k < parent.dim(); ++k) hi[k] = parent.extent(k);
    lo[parent.dim() - 1] = i - 1;
    hi[parent.dim() - 1] = i - 1 + slab_height;
    const SubLattice sub = extract_box(parent, lo, hi);
    for (std::size_t e = 0; e < per; ++e) edge_map_[per * static_cast<std::size_t>(i - 1) + e] = index(sub.parent_edge[e]);
  }
  roles_ = cylinder_roles(slab_);
}

std::span<const std::uint32_t> SlabFamily::parent_edges(int i) const {
  if (i < 1 || i > count_) throw DomainError("slab index out of range");
  const std::size_t per = slab_.num_edges();
  return {edge_map_.data() + per * static_cast<std::size_t>(i - 1), per};
}

std::pair<int, int> SlabFamily::slabs_containing(EdgeId e) const noexcept {
  const int hb = parent_->height_of(parent_->edge_base(e));
  const int hh = parent_->height_of(parent_->edge_head(e));
  return {std::max(1, hh - height_ + 1), std::min(count_, hb + 1)};
}

void SlabFamily::gather(std::span<const Capacity> caps, int i, std::vector<Capacity>& out) const {
  const auto map = parent_edges(i);
  out.resize(map.size());
  simd::kernels().gather(out.data(), caps.data(), map.data(), map.size());
}

FlowValue SlabFamily::sliced_flow(std::span<const Capacity> caps, int i) const {
  thread_local std::vector<Capacity> local;
  gather(caps, i, local);
  return flow_value(slab_, local, roles_);
}

FlowResult SlabFamily::sliced_result(std::span<const Capacity> caps, int i) const {
  thread_local std::vector<Capacity> local;
  gather(caps, i, local);
  return solve_flow(slab_, local, roles_);
}

CutSet SlabFamily::sliced_cut(std::span<const Capacity> caps, int i) const {
  std::vector<Capacity> local;
  gather(caps, i, local);
  const FlowResult r = solve_flow(slab_, local, roles_);
  const CutSet local_cut = canonical_min_cut(slab_, local, r);
  const auto map = parent_edges(i);
  EdgeSet edges;
  edges.reserve(local_cut.edges.size());
  for (EdgeId e : local_cut.edges) edges.push_back(EdgeId{map[index(e)]});
  return make_cutset(*parent_, caps, std::move(edges));
}

FlowValue sliced_flow(const Lattice& lattice, const CapacityField& field, int i, int slab_height) {
  const SlabFamily slabs(lattice, slab_height);
  return slabs.sliced_flow(field.values, i);
}

PenalizedResult penalized_minimum(const SlabFamily& slabs, std::span<const Capacity> caps,
                                  const PenaltyProfile& profile) {
  if (profile.H != slabs.parent().height()) throw DomainError("penalty profile height does not match the lattice");
  PenalizedResult r;
  r.X.resize(static_cast<std::size_t>(slabs.count()));
  for (int i = 1; i <= slabs.count(); ++i) {
    const FlowValue x = slabs.sliced_flow(caps, i);
    r.X[static_cast<std::size_t>(i - 1)] = x;
    const double v = static_cast<double>(x) + profile.y(i);
    if (i == 1 || v < r.phi_tilde) {
      r.phi_tilde = v;
      r.j0 = i;
    }
  }
  r.E_min = slabs.sliced_cut(caps, r.j0);
  return r;
}

PenalizedResult penalized_minimum(const Lattice& lattice, const CapacityField& field, const PenaltyProfile& profile,
                                  const PenaltyParams& params) {
  const SlabFamily slabs(lattice, params.slab_height == 0 ? lattice.height() : params.slab_height);
  return penalized_minimum(slabs, field.values, profile);
}

double penalized_with_edge(const SlabFamily& slabs, std::span<const Capacity> caps, const PenaltyProfile& profile,
                           const PenalizedResult& base, EdgeId e, Capacity value) {
  const Capacity current = caps[index(e)];
  if (value == current) return base.phi_tilde;
  if (value > current && !std::binary_search(base.E_min.edges.begin(), base.E_min.edges.end(), e)) {
    // Raising an edge off the winning surface leaves that slab's value, hence the minimum, unchanged.
    return base.phi_tilde;
  }
  const auto [first, last] = slabs.slabs_containing(e);
  const double drop = static_cast<double>(current - value);
  thread_local std::vector<Capacity> work;
  work.assign(caps.begin(), caps.end());
  work[index(e)] = value;
  double best = 0;
  bool have = false;
  for (int i = 1; i <= slabs.count(); ++i) {
    const double y = profile.y(i);
    double v = static_cast<double>(base.X[static_cast<std::size_t>(i - 1)]) + y;
    if (i >= first && i <= last) {
      // X_i moves by at most |current - value|; skip slabs that cannot become the minimum.
      if (value > current || v - drop < base.phi_tilde) {
        v = static_cast<double>(slabs.sliced_flow(work, i)) + y;
      }
    }
    if (!have || v < best) {
      best = v;
      have = true;
    }
  }
  return best;
}

double penalized_with_profile(const PenalizedResult& base, const PenaltyProfile& profile, int slab_count) {
  double best = 0;
  for (int i = 1; i <= slab_count; ++i) {
    const double v = static_cast<double>(base.X[static_cast<std::size_t>(i - 1)]) + profile.y(i);
    if (i == 1 || v < best) best = v;
  }
  return best;
}

}  // namespace fpp
