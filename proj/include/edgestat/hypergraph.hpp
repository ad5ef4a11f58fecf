#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "edgestat/vertex_set.hpp"

namespace edgestat {

struct U128Hash {
  std::size_t operator()(u128 x) const noexcept { return VertexSetHash{}(VertexSet(x)); }
};

/// Immutable hypergraph on vertices 0..n-1 whose edges are nonempty sets of size <= rank.
/// Edges are sorted by (size, vertex list) and deduplicated.
class Hypergraph {
 public:
  Hypergraph() = default;

  Hypergraph(std::size_t n, unsigned rank, std::vector<std::vector<Vertex>> edges) : n_(n), rank_(rank) {
    if (rank == 0) throw InputError("rank bound must be at least 1");
    if (n > kMaxBitmaskVertices && rank > 4) throw InputError("hypergraphs above 128 vertices support rank <= 4 only");
    for (auto& e : edges) {
      if (e.empty()) throw InputError("empty edge");
      std::sort(e.begin(), e.end());
      if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw InputError("edge repeats a vertex");
      if (e.back() >= n) throw InputError("edge vertex " + std::to_string(e.back()) + " out of range 0.." + std::to_string(n) + "-1");
      if (e.size() > rank) throw InputError("edge of size " + std::to_string(e.size()) + " exceeds rank bound " + std::to_string(rank));
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    offsets_.reserve(edges.size() + 1);
    for (const auto& e : edges) {
      verts_.insert(verts_.end(), e.begin(), e.end());
      offsets_.push_back(static_cast<std::uint32_t>(verts_.size()));
    }
    incident_.assign(n, {});
    keys_.reserve(edges.size());
    for (std::uint32_t i = 0; i < edges.size(); ++i) {
      for (Vertex v : edges[i]) incident_[v].push_back(i);
      keys_.insert(key_of(edges[i]));
      if (bitmask()) masks_.push_back(VertexSet::of(edges[i]));
      max_edge_ = std::max<unsigned>(max_edge_, static_cast<unsigned>(edges[i].size()));
      all_pairs_ = all_pairs_ && edges[i].size() == 2;
    }
    if (bitmask()) {
      adj_.assign(n, VertexSet{});
      for (const auto& e : edges)
        if (e.size() == 2) {
          adj_[e[0]].insert(e[1]);
          adj_[e[1]].insert(e[0]);
        }
    }
  }

  static Hypergraph graph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    std::vector<std::vector<Vertex>> es;
    es.reserve(edges.size());
    for (auto [u, v] : edges) es.push_back({u, v});
    return Hypergraph(n, 2, std::move(es));
  }

  std::size_t n() const { return n_; }
  unsigned rank() const { return rank_; }
  std::size_t num_edges() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const Vertex> edge(std::size_t i) const {
    return {verts_.data() + offsets_[i], verts_.data() + offsets_[i + 1]};
  }
  std::vector<std::vector<Vertex>> edge_lists() const {
    std::vector<std::vector<Vertex>> out;
    for (std::size_t i = 0; i < num_edges(); ++i) out.emplace_back(edge(i).begin(), edge(i).end());
    return out;
  }

  /// True when n <= 128, so bitmask operations apply.
  bool bitmask() const { return n_ <= kMaxBitmaskVertices; }
  const std::vector<VertexSet>& edge_masks() const {
    require_bitmask();
    return masks_;
  }
  VertexSet vertices() const {
    require_bitmask();
    return VertexSet::prefix(n_);
  }

  const std::vector<std::uint32_t>& incident(Vertex v) const { return incident_.at(v); }
  std::size_t degree(Vertex v) const { return incident_.at(v).size(); }

  /// Largest edge size present (0 for the empty hypergraph).
  unsigned max_edge_size() const { return max_edge_; }
  /// Every edge has exactly two vertices (so this is a simple graph); rank bound need not be 2.
  bool is_graph() const { return rank_ == 2 && all_pairs_; }

  /// Graph neighbourhood via 2-edges.
  VertexSet neighbors(Vertex v) const {
    require_bitmask();
    return adj_.at(v);
  }

  bool has_edge(std::vector<Vertex> e) const {
    std::sort(e.begin(), e.end());
    if (e.empty() || (e.size() > 4 && !bitmask())) return false;
    return keys_.count(key_of(e)) > 0;
  }

  /// Membership test for a sorted, duplicate-free vertex list.
  bool has_sorted(std::span<const Vertex> e) const {
    if (e.empty() || e.size() > rank_) return false;
    u128 k = 0;
    if (bitmask()) {
      for (Vertex v : e) k |= u128(1) << v;
    } else {
      for (Vertex v : e) k = (k << 32) | (v + 1u);
    }
    return keys_.count(k) > 0;
  }

  /// Complement of a simple graph.
  Hypergraph complement() const {
    if (rank_ != 2 || !all_pairs_) throw InputError("complement requires a simple graph (rank 2, all edges of size 2)");
    std::vector<std::vector<Vertex>> es;
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v = u + 1; v < n_; ++v)
        if (!has_edge({u, v})) es.push_back({u, v});
    return Hypergraph(n_, 2, std::move(es));
  }

  /// Image under the vertex map v -> perm[v].
  Hypergraph relabel(const std::vector<Vertex>& perm) const {
    if (perm.size() != n_) throw InputError("relabel: permutation size mismatch");
    std::vector<std::vector<Vertex>> es;
    es.reserve(num_edges());
    for (std::size_t i = 0; i < num_edges(); ++i) {
      std::vector<Vertex> e;
      for (Vertex v : edge(i)) e.push_back(perm[v]);
      es.push_back(std::move(e));
    }
    return Hypergraph(n_, rank_, std::move(es));
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.rank_ == b.rank_ && a.offsets_ == b.offsets_ && a.verts_ == b.verts_;
  }

  void require_bitmask() const {
    if (!bitmask()) throw InputError("operation needs n <= 128 (bitmask ceiling); got n = " + std::to_string(n_));
  }

  void check_subset(VertexSet w) const {
    require_bitmask();
    if (!w.subset_of(VertexSet::prefix(n_))) throw InputError("vertex set " + w.to_string() + " not within 0.." + std::to_string(n_) + "-1");
  }

 private:
  u128 key_of(const std::vector<Vertex>& sorted) const {
    if (bitmask()) return VertexSet::of(sorted).bits();
    u128 k = 0;
    for (Vertex v : sorted) k = (k << 32) | (v + 1u);
    return k;
  }

  std::size_t n_ = 0;
  unsigned rank_ = 2;
  std::vector<Vertex> verts_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::vector<std::uint32_t>> incident_;
  std::vector<VertexSet> masks_;
  std::vector<VertexSet> adj_;
  std::unordered_set<u128, U128Hash> keys_;
  unsigned max_edge_ = 0;
  bool all_pairs_ = true;
};

/// e(W)
inline std::size_t edges_within(const Hypergraph& h, VertexSet w) {
  h.check_subset(w);
  std::size_t c = 0;
  for (VertexSet e : h.edge_masks()) c += e.subset_of(w);
  return c;
}

/// e(W) for a sorted vertex list; works for any n by scanning incident edges of W.
inline std::size_t edges_within_list(const Hypergraph& h, std::span<const Vertex> sorted_w) {
  std::size_t c = 0;
  for (Vertex v : sorted_w) {
    if (v >= h.n()) throw InputError("vertex out of range");
    for (std::uint32_t ei : h.incident(v)) {
      auto e = h.edge(ei);
      if (e.front() != v) continue;  // count each edge once, from its smallest vertex
      bool inside = true;
      for (Vertex u : e)
        if (!std::binary_search(sorted_w.begin(), sorted_w.end(), u)) {
          inside = false;
          break;
        }
      c += inside;
    }
  }
  return c;
}

/// m(W): vertices of W lying in some edge inside W.
inline VertexSet nonisolated_within(const Hypergraph& h, VertexSet w) {
  h.check_subset(w);
  VertexSet out;
  for (VertexSet e : h.edge_masks())
    if (e.subset_of(w)) out |= e;
  return out;
}

struct SubsetProfile {
  VertexSet subset;
  std::size_t eA = 0;
  std::size_t mA = 0;
  std::map<Vertex, std::size_t> within_degrees;
};

inline SubsetProfile subset_profile(const Hypergraph& h, VertexSet a) {
  h.check_subset(a);
  SubsetProfile p;
  p.subset = a;
  a.for_each([&](Vertex v) { p.within_degrees[v] = 0; });
  VertexSet touched;
  for (VertexSet e : h.edge_masks()) {
    if (!e.subset_of(a)) continue;
    ++p.eA;
    touched |= e;
    e.for_each([&](Vertex v) { ++p.within_degrees[v]; });
  }
  p.mA = touched.size();
  return p;
}

/// N(v, W) = { e \ {v} : v in e, e subset of W + v }.
inline std::vector<VertexSet> neighborhood_family(const Hypergraph& h, Vertex v, VertexSet w) {
  h.check_subset(w);
  if (v >= h.n()) throw InputError("vertex out of range");
  if (w.contains(v)) throw InputError("neighborhood_family: v must not lie in W");
  std::vector<VertexSet> out;
  VertexSet wv = w | VertexSet::single(v);
  for (std::uint32_t ei : h.incident(v)) {
    VertexSet e = h.edge_masks()[ei];
    if (e.subset_of(wv)) out.push_back(e - VertexSet::single(v));
  }
  return out;
}

/// v (outside B) lies in an edge e with e \ {v} inside B.
inline bool is_connected_to(const Hypergraph& h, Vertex v, VertexSet b) {
  h.check_subset(b);
  if (v >= h.n()) throw InputError("vertex out of range");
  if (b.contains(v)) throw InputError("is_connected_to: v must not lie in B");
  VertexSet bv = b | VertexSet::single(v);
  for (std::uint32_t ei : h.incident(v))
    if (h.edge_masks()[ei].subset_of(bv)) return true;
  return false;
}

/// Vertices outside B that are connected to B.
inline VertexSet connected_to_set(const Hypergraph& h, VertexSet b) {
  h.check_subset(b);
  VertexSet out;
  for (VertexSet e : h.edge_masks()) {
    VertexSet rest = e - b;
    if (rest.size() == 1) out |= rest;
  }
  return out;
}

struct PairStats {
  VertexSet A, B;
  std::size_t h = 0, m = 0, f = 0;
};

inline PairStats pair_stats(const Hypergraph& hg, VertexSet a, VertexSet b) {
  hg.check_subset(a);
  if (!b.subset_of(a)) throw InputError("pair_stats: B must be a subset of A");
  PairStats s{a, b};
  VertexSet rest = a - b;
  s.h = (connected_to_set(hg, b) & rest).size();
  s.m = (nonisolated_within(hg, a) & rest).size();
  s.f = s.m - s.h;
  return s;
}

}  // namespace edgestat
