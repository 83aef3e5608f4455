#include "fpp/capacity.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "fpp/format.hpp"
#include "fpp/simd.hpp"

namespace fpp {

static_assert(std::endian::native == std::endian::little, "binary field format assumes a little-endian host");

TwoPointDist TwoPointDist::from_rationals(Ratio a, Ratio b, Ratio p_a) {
  const std::int64_t l = std::lcm(a.den, b.den);
  std::int64_t ia = a.num * (l / a.den);
  std::int64_t ib = b.num * (l / b.den);
  const std::int64_t g = std::gcd(ia, ib);
  if (g != 0) {
    ia /= g;
    ib /= g;
  }
  if (ib > std::numeric_limits<Capacity>::max()) throw DomainError("scaled capacities exceed 32 bits");
  TwoPointDist d{static_cast<Capacity>(ia), static_cast<Capacity>(ib), p_a};
  d.validate();
  return d;
}

void TwoPointDist::validate() const {
  if (!(0 < a && a < b)) throw DomainError("two-point law needs 0 < a < b");
  if (p_a.den <= 0 || p_a.num < 0 || p_a.num > p_a.den) throw DomainError("p_a must lie in [0, 1]");
}

Ratio TwoPointDist::edge_variance() const {
  const __int128 diff = b - a;
  const __int128 num = diff * diff * p_a.num * (p_a.den - p_a.num);
  const __int128 den = static_cast<__int128>(p_a.den) * p_a.den;
  // Reduce in 128 bits before narrowing.
  __int128 x = num, y = den;
  while (y != 0) {
    const __int128 r = x % y;
    x = y;
    y = r;
  }
  const __int128 rn = num / (x == 0 ? 1 : x);
  const __int128 rd = den / (x == 0 ? 1 : x);
  return Ratio{static_cast<std::int64_t>(rn), static_cast<std::int64_t>(rd)};
}

BernoulliCut BernoulliCut::of(const Ratio& p) {
  if (p.den <= 0 || p.num < 0 || p.num > p.den) throw DomainError("probability outside [0, 1]");
  if (p.num == p.den) return {0, true};
  using u128 = unsigned __int128;
  const u128 scaled = (static_cast<u128>(p.num) << 64) + static_cast<u128>(p.den) - 1;
  return {static_cast<std::uint64_t>(scaled / static_cast<u128>(p.den)), false};
}

std::vector<Capacity> sample_two_point(std::size_t count, const TwoPointDist& dist, const DrawAddress& addr) {
  const auto& k = simd::kernels();
  std::vector<std::uint64_t> draws(count);
  k.philox_fill(draws.data(), count, 0, addr);
  const BernoulliCut cut = BernoulliCut::of(dist.p_a);
  std::vector<Capacity> out(count);
  k.select_two_point(out.data(), draws.data(), count, cut.below, cut.always, dist.a, dist.b);
  return out;
}

CapacityField sample_field(const Lattice& lattice, const TwoPointDist& dist, std::uint64_t seed,
                           std::uint64_t sample_index, Stream stream) {
  dist.validate();
  CapacityField f;
  f.values = sample_two_point(lattice.num_edges(), dist, DrawAddress{seed, sample_index, stream});
  f.dist = dist;
  f.seed = seed;
  f.sample_index = sample_index;
  return f;
}

CapacityField uniform_field(const Lattice& lattice, const TwoPointDist& dist, Capacity value) {
  dist.validate();
  if (!dist.contains(value)) throw DomainError("value is neither a nor b");
  CapacityField f;
  f.values.assign(lattice.num_edges(), value);
  f.dist = dist;
  return f;
}

CapacityField flip_edge(const CapacityField& field, EdgeId e, Capacity value) {
  if (!field.dist.contains(value)) throw DomainError("flip value is neither a nor b");
  if (index(e) >= field.size()) throw DomainError("edge id out of range");
  CapacityField out = field;
  out.values[index(e)] = value;
  return out;
}

NoiseCoupling make_coupling(const Lattice& lattice, const TwoPointDist& dist, std::uint64_t seed,
                            std::uint64_t sample_index) {
  NoiseCoupling c;
  c.base = sample_field(lattice, dist, seed, sample_index, Stream::kEdges);
  c.fresh = sample_field(lattice, dist, seed, sample_index, Stream::kFresh);
  c.thresholds.resize(lattice.num_edges());
  simd::kernels().philox_fill(c.thresholds.data(), c.thresholds.size(), 0,
                              DrawAddress{seed, sample_index, Stream::kUniforms});
  return c;
}

CapacityField realize_noise(const NoiseCoupling& coupling, const Ratio& t) {
  const BernoulliCut cut = BernoulliCut::of(t);
  CapacityField out = coupling.base;
  simd::kernels().blend_below(out.values.data(), coupling.base.values.data(), coupling.fresh.values.data(),
                              coupling.thresholds.data(), out.size(), cut.below, cut.always);
  return out;
}

namespace {

constexpr char kMagic[8] = {'F', 'P', 'P', 'C', 'A', 'P', '1', '\0'};

template <class T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw DomainError("truncated capacity file");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_field_binary(std::ostream& out, const CylinderSpec& spec, const CapacityField& field) {
  out.write(kMagic, sizeof kMagic);
  put<std::int32_t>(out, spec.d);
  put<std::int32_t>(out, spec.n);
  put<std::int32_t>(out, spec.H);
  put<std::int32_t>(out, field.dist.a);
  put<std::int32_t>(out, field.dist.b);
  put<std::int64_t>(out, field.dist.p_a.num);
  put<std::int64_t>(out, field.dist.p_a.den);
  put<std::uint64_t>(out, field.seed);
  put<std::uint64_t>(out, field.sample_index);
  put<std::uint64_t>(out, field.values.size());
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(Capacity)));
}

std::pair<CylinderSpec, CapacityField> read_field_binary(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw DomainError("not a capacity field file");
  }
  CylinderSpec spec;
  spec.d = get<std::int32_t>(in);
  spec.n = get<std::int32_t>(in);
  spec.H = get<std::int32_t>(in);
  CapacityField f;
  f.dist.a = get<std::int32_t>(in);
  f.dist.b = get<std::int32_t>(in);
  f.dist.p_a.num = get<std::int64_t>(in);
  f.dist.p_a.den = get<std::int64_t>(in);
  f.dist.validate();
  f.seed = get<std::uint64_t>(in);
  f.sample_index = get<std::uint64_t>(in);
  const auto count = get<std::uint64_t>(in);
  if (count != spec.edge_count()) throw DomainError("edge count in header does not match the spec");
  f.values.resize(count);
  if (!in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(count * sizeof(Capacity)))) {
    throw DomainError("truncated capacity file");
  }
  for (Capacity v : f.values) {
    if (!f.dist.contains(v)) throw DomainError("capacity value outside {a, b}");
  }
  return {spec, std::move(f)};
}

void write_field_csv(std::ostream& out, const Lattice& lattice, const CapacityField& field) {
  out << "edge,axis";
  for (int k = 0; k < lattice.dim(); ++k) out << ",x" << (k + 1);
  out << ",capacity\n";
  std::string line;
  for (std::uint32_t e = 0; e < lattice.num_edges(); ++e) {
    const EdgeId id{e};
    const Coords x = lattice.coords(lattice.edge_base(id));
    line.clear();
    append_int(line, e);
    line += ',';
    append_int(line, lattice.edge_axis(id) + 1);
    for (int k = 0; k < lattice.dim(); ++k) {
      line += ',';
      append_int(line, x[k]);
    }
    line += ',';
    append_int(line, field.values[e]);
    out << line << '\n';
  }
}

CapacityField read_field_csv(std::istream& in, const Lattice& lattice, const TwoPointDist& dist) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty capacity CSV");
  CapacityField f;
  f.dist = dist;
  f.values.assign(lattice.num_edges(), 0);
  std::vector<std::uint8_t> seen(lattice.num_edges(), 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<long long> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(std::stoll(cell));
    if (cols.size() != static_cast<std::size_t>(lattice.dim()) + 3) throw DomainError("malformed capacity CSV row");
    const auto e = static_cast<std::uint64_t>(cols.front());
    if (e >= lattice.num_edges()) throw DomainError("edge id out of range in capacity CSV");
    const auto v = static_cast<Capacity>(cols.back());
    if (!dist.contains(v)) throw DomainError("capacity value outside {a, b}");
    f.values[e] = v;
    seen[e] = 1;
  }
  for (auto s : seen) {
    if (!s) throw DomainError("capacity CSV does not list every edge");
  }
  return f;
}

}  // namespace fpp
