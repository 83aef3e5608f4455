#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/philox.hpp"
#include "fpp/types.hpp"

namespace fpp {

// G({a}) = p_a, G({b}) = 1 - p_a, with integer 0 < a < b.
struct TwoPointDist {
  Capacity a = 1;
  Capacity b = 2;
  Ratio p_a = Ratio::of(1, 2);

  // Scales rational values to the smallest integer pair with the same ratio.
  static TwoPointDist from_rationals(Ratio a, Ratio b, Ratio p_a);
  void validate() const;
  // Var(t_e) as an exact fraction (b-a)^2 p (1-p).
  Ratio edge_variance() const;
  bool contains(Capacity v) const noexcept { return v == a || v == b; }
};

// Event {draw < p * 2^64} for a uniform 64-bit draw, decided exactly.
struct BernoulliCut {
  std::uint64_t below = 0;
  bool always = false;

  static BernoulliCut of(const Ratio& p);
  bool hit(std::uint64_t draw) const noexcept { return always || draw < below; }
};

struct CapacityField {
  std::vector<Capacity> values;
  TwoPointDist dist;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;

  Capacity operator[](EdgeId e) const noexcept { return values[index(e)]; }
  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const CapacityField& x, const CapacityField& y) { return x.values == y.values; }
};

CapacityField sample_field(const Lattice& lattice, const TwoPointDist& dist, std::uint64_t seed,
                           std::uint64_t sample_index, Stream stream = Stream::kEdges);
CapacityField uniform_field(const Lattice& lattice, const TwoPointDist& dist, Capacity value);
CapacityField flip_edge(const CapacityField& field, EdgeId e, Capacity value);

// Independent two-point draws over an arbitrary index range (vertex weights, penalty bits).
std::vector<Capacity> sample_two_point(std::size_t count, const TwoPointDist& dist,
                                       const DrawAddress& addr);

// Base field, an independent copy, and a uniform threshold U_e per edge.
struct NoiseCoupling {
  CapacityField base;
  CapacityField fresh;
  std::vector<std::uint64_t> thresholds;  // U_e scaled to [0, 2^64)
};

NoiseCoupling make_coupling(const Lattice& lattice, const TwoPointDist& dist, std::uint64_t seed,
                            std::uint64_t sample_index);
// Fresh value exactly where U_e < t.
CapacityField realize_noise(const NoiseCoupling& coupling, const Ratio& t);

// Binary dump: fixed header (spec, dist, seed, sample index) followed by little-endian int32 values.
void write_field_binary(std::ostream& out, const CylinderSpec& spec, const CapacityField& field);
std::pair<CylinderSpec, CapacityField> read_field_binary(std::istream& in);
void write_field_csv(std::ostream& out, const Lattice& lattice, const CapacityField& field);
CapacityField read_field_csv(std::istream& in, const Lattice& lattice, const TwoPointDist& dist);

}  // namespace fpp
