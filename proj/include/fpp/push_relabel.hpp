#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/types.hpp"

namespace fpp {

enum NodeRole : std::uint8_t { kInner = 0, kSource = 1, kSink = 2 };

// Arc slots of the implicit lattice graph: arc v * 2d + dir leaves v along direction dir.
// Undirected edges appear as two antiparallel arcs.
struct LatticeTopology {
  const Lattice* lattice;

  std::uint32_t num_nodes() const noexcept { return lattice->num_vertices(); }
  std::size_t num_arcs() const noexcept {
    return static_cast<std::size_t>(lattice->num_vertices()) * lattice->num_directions();
  }
  std::uint32_t arc_begin(std::uint32_t v) const noexcept { return v * lattice->num_directions(); }
  std::uint32_t arc_end(std::uint32_t v) const noexcept { return (v + 1) * lattice->num_directions(); }
  bool valid(std::uint32_t a) const noexcept {
    const auto nd = static_cast<std::uint32_t>(lattice->num_directions());
    return lattice->has_neighbor(VertexId{a / nd}, static_cast<int>(a % nd));
  }
  std::uint32_t head(std::uint32_t a) const noexcept {
    const auto nd = static_cast<std::uint32_t>(lattice->num_directions());
    return index(lattice->neighbor(VertexId{a / nd}, static_cast<int>(a % nd)));
  }
  std::uint32_t reverse(std::uint32_t a) const noexcept {
    const auto nd = static_cast<std::uint32_t>(lattice->num_directions());
    return head(a) * nd + ((a % nd) ^ 1u);
  }
};

// Explicit directed graph in compressed row form; every arc has a stored reverse.
struct CsrTopology {
  std::vector<std::uint32_t> offset;  // num_nodes + 1
  std::vector<std::uint32_t> heads;
  std::vector<std::uint32_t> rev;

  std::uint32_t num_nodes() const noexcept { return static_cast<std::uint32_t>(offset.size() - 1); }
  std::size_t num_arcs() const noexcept { return heads.size(); }
  std::uint32_t arc_begin(std::uint32_t v) const noexcept { return offset[v]; }
  std::uint32_t arc_end(std::uint32_t v) const noexcept { return offset[v + 1]; }
  bool valid(std::uint32_t) const noexcept { return true; }
  std::uint32_t head(std::uint32_t a) const noexcept { return heads[a]; }
  std::uint32_t reverse(std::uint32_t a) const noexcept { return rev[a]; }
};

// Builds a CsrTopology from an arc list. Each added arc pair gets capacities (forward, backward).
class CsrBuilder {
 public:
  explicit CsrBuilder(std::uint32_t nodes) : nodes_(nodes) {}
  void add(std::uint32_t u, std::uint32_t v, FlowValue cap_uv, FlowValue cap_vu) {
    pending_.push_back({u, v, cap_uv, cap_vu});
  }
  // Arc capacities are written to caps, indexed like the topology's arcs.
  CsrTopology build(std::vector<FlowValue>& caps) const {
    CsrTopology g;
    g.offset.assign(nodes_ + 1, 0);
    for (const auto& p : pending_) {
      ++g.offset[p.u + 1];
      ++g.offset[p.v + 1];
    }
    for (std::uint32_t v = 0; v < nodes_; ++v) g.offset[v + 1] += g.offset[v];
    std::vector<std::uint32_t> fill(g.offset.begin(), g.offset.end() - 1);
    g.heads.resize(pending_.size() * 2);
    g.rev.resize(pending_.size() * 2);
    caps.assign(pending_.size() * 2, 0);
    for (const auto& p : pending_) {
      const std::uint32_t a = fill[p.u]++;
      const std::uint32_t b = fill[p.v]++;
      g.heads[a] = p.v;
      g.heads[b] = p.u;
      g.rev[a] = b;
      g.rev[b] = a;
      caps[a] = p.cap_uv;
      caps[b] = p.cap_vu;
    }
    return g;
  }

 private:
  struct Pending {
    std::uint32_t u, v;
    FlowValue cap_uv, cap_vu;
  };
  std::uint32_t nodes_;
  std::vector<Pending> pending_;
};

// One-phase highest-label preflow-push with gap relabeling and periodic global relabeling.
// Sources sit at height V and are saturated up front; the value is the excess collected at
// sinks. The residual array holds the final residual capacities.
template <class Topology>
class PushRelabel {
 public:
  // residual must hold the arc capacities on entry.
  FlowValue solve(const Topology& g, std::span<const std::uint8_t> role, std::vector<FlowValue>& residual) {
    const std::uint32_t n = g.num_nodes();
    n_ = n;
    height_.assign(n, 0);
    excess_.assign(n, 0);
    current_.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) current_[v] = g.arc_begin(v);
    buckets_.assign(2 * static_cast<std::size_t>(n) + 2, {});
    count_.assign(2 * static_cast<std::size_t>(n) + 2, 0);

    for (std::uint32_t s = 0; s < n; ++s) {
      if (role[s] != kSource) continue;
      for (std::uint32_t a = g.arc_begin(s); a < g.arc_end(s); ++a) {
        if (!g.valid(a) || residual[a] == 0) continue;
        const std::uint32_t w = g.head(a);
        if (role[w] == kSource) continue;
        const FlowValue delta = residual[a];
        residual[a] = 0;
        residual[g.reverse(a)] += delta;
        excess_[w] += delta;
      }
    }

    global_relabel(g, role, residual);
    std::uint64_t work = 0;
    const std::uint64_t relabel_period = 6ull * n + 64;

    while (max_active_ >= 0) {
      auto& bucket = buckets_[static_cast<std::size_t>(max_active_)];
      if (bucket.empty()) {
        --max_active_;
        continue;
      }
      const std::uint32_t u = bucket.back();
      bucket.pop_back();
      if (excess_[u] == 0 || height_[u] != static_cast<std::uint32_t>(max_active_)) continue;
      discharge(g, role, residual, u, work);
      if (work > relabel_period) {
        work = 0;
        global_relabel(g, role, residual);
      }
    }

    FlowValue value = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (role[v] == kSink) value += excess_[v];
    }
    return value;
  }

  // Vertices reachable from the sources along positive residual arcs.
  static std::vector<std::uint8_t> source_reachable(const Topology& g, std::span<const std::uint8_t> role,
                                                    const std::vector<FlowValue>& residual) {
    std::vector<std::uint8_t> seen(g.num_nodes(), 0);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t v = 0; v < g.num_nodes(); ++v) {
      if (role[v] == kSource) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::uint32_t u = queue[qi];
      for (std::uint32_t a = g.arc_begin(u); a < g.arc_end(u); ++a) {
        if (!g.valid(a) || residual[a] <= 0) continue;
        const std::uint32_t w = g.head(a);
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    return seen;
  }

  // Vertices with a positive residual path into the sinks.
  static std::vector<std::uint8_t> sink_reaching(const Topology& g, std::span<const std::uint8_t> role,
                                                 const std::vector<FlowValue>& residual) {
    std::vector<std::uint8_t> seen(g.num_nodes(), 0);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t v = 0; v < g.num_nodes(); ++v) {
      if (role[v] == kSink) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::uint32_t w = queue[qi];
      for (std::uint32_t a = g.arc_begin(w); a < g.arc_end(w); ++a) {
        if (!g.valid(a)) continue;
        const std::uint32_t u = g.head(a);
        if (!seen[u] && residual[g.reverse(a)] > 0) {
          seen[u] = 1;
          queue.push_back(u);
        }
      }
    }
    return seen;
  }

 private:
  void activate(std::uint32_t v) {
    const std::uint32_t h = height_[v];
    buckets_[h].push_back(v);
    if (static_cast<std::int64_t>(h) > max_active_) max_active_ = h;
  }

  void set_height(std::uint32_t v, std::uint32_t h) {
    if (height_[v] < n_) --count_[height_[v]];
    height_[v] = h;
    if (h < n_) ++count_[h];
  }

  void discharge(const Topology& g, std::span<const std::uint8_t> role, std::vector<FlowValue>& residual,
                 std::uint32_t u, std::uint64_t& work) {
    const std::uint32_t end = g.arc_end(u);
    while (excess_[u] > 0) {
      std::uint32_t a = current_[u];
      const std::uint32_t hu = height_[u];
      for (; a < end; ++a) {
        if (!g.valid(a) || residual[a] == 0) continue;
        const std::uint32_t w = g.head(a);
        if (hu != height_[w] + 1) continue;
        const FlowValue delta = std::min(excess_[u], residual[a]);
        residual[a] -= delta;
        residual[g.reverse(a)] += delta;
        excess_[u] -= delta;
        const bool was_idle = excess_[w] == 0;
        excess_[w] += delta;
        if (was_idle && role[w] == kInner) activate(w);
        if (excess_[u] == 0) break;
      }
      current_[u] = a < end ? a : g.arc_begin(u);
      if (excess_[u] == 0) return;

      // Relabel.
      ++work;
      std::uint32_t lowest = 2 * n_;
      for (std::uint32_t b = g.arc_begin(u); b < end; ++b) {
        if (g.valid(b) && residual[b] > 0) lowest = std::min(lowest, height_[g.head(b)]);
      }
      const std::uint32_t old = hu;
      const std::uint32_t fresh = std::min(lowest + 1, 2 * n_);
      set_height(u, fresh);
      current_[u] = g.arc_begin(u);
      if (old < n_ && count_[old] == 0) gap(old);
      if (height_[u] >= 2 * n_) return;
      activate(u);
      return;
    }
  }

  // No inner vertex remains at height `empty`; everything above it up to V can no longer reach a sink.
  void gap(std::uint32_t empty) {
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (height_[v] > empty && height_[v] < n_) {
        set_height(v, n_ + 1);
        if (excess_[v] > 0) activate(v);
      }
    }
  }

  void global_relabel(const Topology& g, std::span<const std::uint8_t> role, const std::vector<FlowValue>& residual) {
    const std::uint32_t n = n_;
    constexpr std::uint32_t kUnset = 0xffffffffu;
    std::vector<std::uint32_t>& h = scratch_;
    h.assign(n, kUnset);
    std::vector<std::uint32_t>& queue = queue_;
    queue.clear();
    for (std::uint32_t v = 0; v < n; ++v) {
      if (role[v] == kSink) {
        h[v] = 0;
        queue.push_back(v);
      }
    }
    auto bfs = [&](std::size_t from) {
      for (std::size_t qi = from; qi < queue.size(); ++qi) {
        const std::uint32_t w = queue[qi];
        for (std::uint32_t a = g.arc_begin(w); a < g.arc_end(w); ++a) {
          if (!g.valid(a)) continue;
          const std::uint32_t u = g.head(a);
          if (h[u] != kUnset || role[u] != kInner || residual[g.reverse(a)] <= 0) continue;
          h[u] = h[w] + 1;
          queue.push_back(u);
        }
      }
    };
    bfs(0);
    const std::size_t mark = queue.size();
    for (std::uint32_t v = 0; v < n; ++v) {
      if (role[v] == kSource) {
        h[v] = n;
        queue.push_back(v);
      }
    }
    bfs(mark);

    std::fill(count_.begin(), count_.end(), 0);
    for (auto& b : buckets_) b.clear();
    max_active_ = -1;
    for (std::uint32_t v = 0; v < n; ++v) {
      const std::uint32_t hv = h[v] == kUnset ? 2 * n : std::min(h[v], 2 * n);
      height_[v] = hv;
      if (hv < n && role[v] == kInner) ++count_[hv];
      current_[v] = g.arc_begin(v);
      if (role[v] == kInner && excess_[v] > 0 && hv < 2 * n) activate(v);
    }
  }

  std::uint32_t n_ = 0;
  std::vector<std::uint32_t> height_;
  std::vector<FlowValue> excess_;
  std::vector<std::uint32_t> current_;
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::uint32_t> queue_;
  std::int64_t max_active_ = -1;
};

}  // namespace fpp
