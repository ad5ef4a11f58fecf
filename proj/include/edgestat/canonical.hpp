#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "edgestat/hypergraph.hpp"

namespace edgestat {

// Canonical labeling by colour refinement plus individualization. A hypergraph is compared
// through its certificate: the sorted list of edge masks after relabeling.

using Certificate = std::vector<u128>;

struct CertificateHash {
  std::size_t operator()(const Certificate& c) const noexcept {
    std::size_t h = c.size() * 0x9e3779b97f4a7c15ULL;
    for (u128 x : c) h = (h ^ U128Hash{}(x)) * 0x100000001b3ULL;
    return h;
  }
};

namespace detail {

class Canonizer {
 public:
  explicit Canonizer(const Hypergraph& h) : n_(h.n()) {
    h.require_bitmask();
    for (const auto& m : h.edge_masks()) masks_.push_back(m.bits());
    inc_.assign(n_, {});
    for (std::size_t i = 0; i < masks_.size(); ++i)
      VertexSet(masks_[i]).for_each([&](Vertex v) { inc_[v].push_back(static_cast<std::uint32_t>(i)); });
    edge_set_.insert(masks_.begin(), masks_.end());
  }

  /// Returns the labeling old -> new of the minimal certificate.
  std::vector<Vertex> run() {
    std::vector<std::uint32_t> colour(n_, 0);
    refine(colour);
    search(colour);
    return best_lab_;
  }

  Certificate certificate(const std::vector<Vertex>& lab) const {
    Certificate c;
    c.reserve(masks_.size());
    for (u128 m : masks_) {
      u128 img = 0;
      VertexSet(m).for_each([&](Vertex v) { img |= u128(1) << lab[v]; });
      c.push_back(img);
    }
    std::sort(c.begin(), c.end());
    return c;
  }

 private:
  std::size_t n_;
  std::vector<u128> masks_;
  std::vector<std::vector<std::uint32_t>> inc_;
  std::unordered_set<u128, U128Hash> edge_set_;
  bool have_best_ = false;
  Certificate best_;
  std::vector<Vertex> best_lab_;

  static std::size_t count_colours(const std::vector<std::uint32_t>& c) {
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
  }

  // Colours are kept dense and ordered; new colours are ranks of (old colour, signature).
  void refine(std::vector<std::uint32_t>& colour) const {
    std::size_t classes = 0;
    for (;;) {
      std::vector<std::pair<std::vector<std::uint64_t>, Vertex>> sig(n_);
      for (Vertex v = 0; v < n_; ++v) {
        std::vector<std::uint64_t> s;
        s.reserve(inc_[v].size() + 1);
        for (auto e : inc_[v]) {
          // Encode (size, sorted colours of the other members) in one word when it fits.
          std::vector<std::uint32_t> others;
          VertexSet(masks_[e]).for_each([&](Vertex u) {
            if (u != v) others.push_back(colour[u]);
          });
          std::sort(others.begin(), others.end());
          std::uint64_t code = others.size() + 1;
          for (auto c : others) code = code * 0x1f3ULL + c + 1;
          s.push_back(code);
        }
        std::sort(s.begin(), s.end());
        s.insert(s.begin(), colour[v]);
        sig[v] = {std::move(s), v};
      }
      std::vector<Vertex> order(n_);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return sig[a].first < sig[b].first; });
      std::vector<std::uint32_t> next(n_);
      std::uint32_t c = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (i > 0 && sig[order[i]].first != sig[order[i - 1]].first) ++c;
        next[order[i]] = c;
      }
      colour = std::move(next);
      std::size_t now = count_colours(colour);
      if (now == classes) return;
      classes = now;
    }
  }

  bool swap_is_automorphism(Vertex a, Vertex b) const {
    const u128 ba = u128(1) << a, bb = u128(1) << b;
    for (u128 m : masks_) {
      bool ha = m & ba, hb = m & bb;
      if (ha == hb) continue;
      u128 img = (m & ~(ba | bb)) | (ha ? bb : ba);
      if (!edge_set_.count(img)) return false;
    }
    return true;
  }

  void search(const std::vector<std::uint32_t>& colour) {
    std::size_t classes = count_colours(colour);
    if (classes == n_) {
      std::vector<Vertex> lab(colour.begin(), colour.end());
      Certificate c = certificate(lab);
      if (!have_best_ || c < best_) {
        best_ = std::move(c);
        best_lab_ = std::move(lab);
        have_best_ = true;
      }
      return;
    }
    // Target: the first colour class with more than one vertex.
    std::vector<std::size_t> size(classes, 0);
    for (auto c : colour) ++size[c];
    std::uint32_t target = 0;
    while (size[target] == 1) ++target;
    std::vector<Vertex> tried;
    for (Vertex v = 0; v < n_; ++v) {
      if (colour[v] != target) continue;
      // Swapping v with an already-tried vertex fixes the partition, so a graph automorphism
      // of that form maps one subtree onto the other.
      bool twin = false;
      for (Vertex u : tried)
        if (swap_is_automorphism(u, v)) {
          twin = true;
          break;
        }
      if (twin) continue;
      tried.push_back(v);
      std::vector<std::uint32_t> next(n_);
      for (Vertex u = 0; u < n_; ++u) next[u] = 2 * colour[u] + (u == v ? 0 : 1);
      refine(next);
      search(next);
    }
  }
};

}  // namespace detail

struct CanonicalForm {
  Hypergraph graph;
  std::vector<Vertex> labeling;  // old vertex -> canonical vertex
  Certificate certificate;
};

inline CanonicalForm canonical_form(const Hypergraph& h) {
  detail::Canonizer c(h);
  auto lab = c.run();
  if (h.n() == 0) return {h, {}, {}};
  return {h.relabel(lab), lab, c.certificate(lab)};
}

inline Certificate certificate_of(const Hypergraph& h) {
  detail::Canonizer c(h);
  auto lab = c.run();
  return c.certificate(lab);
}

inline bool isomorphic(const Hypergraph& a, const Hypergraph& b) {
  return a.n() == b.n() && a.num_edges() == b.num_edges() && certificate_of(a) == certificate_of(b);
}

/// Hypergraph from a certificate (edge masks on vertices 0..n-1).
inline Hypergraph from_certificate(std::size_t n, unsigned rank, const Certificate& c) {
  std::vector<std::vector<Vertex>> es;
  es.reserve(c.size());
  for (u128 m : c) es.push_back(VertexSet(m).to_vector());
  return Hypergraph(n, rank, std::move(es));
}

/// Bitmask of allowed edge sizes: bit s set means edges of size s occur.
using EdgeSizes = unsigned;
inline constexpr EdgeSizes kGraphEdges = 1u << 2;
inline constexpr EdgeSizes rank_sizes(unsigned r) { return ((1u << (r + 1)) - 1) & ~1u; }

inline constexpr std::size_t kNonisoMaxGraphVertices = 9;
inline constexpr std::size_t kNonisoMaxRank3Vertices = 5;

namespace detail {

inline unsigned max_size(EdgeSizes sizes) {
  unsigned r = 0;
  for (unsigned s = 1; s < 32; ++s)
    if (sizes >> s & 1) r = s;
  return r;
}

inline std::vector<Certificate> extend_by_vertex(const std::vector<Certificate>& prev, std::size_t n, EdgeSizes sizes) {
  // Edges through the new vertex n-1: {n-1} joined with a subset of the old vertices of size s-1.
  const Vertex nv = static_cast<Vertex>(n - 1);
  std::vector<u128> links;
  for (unsigned s = 1; s <= max_size(sizes); ++s) {
    if (!(sizes >> s & 1)) continue;
    std::vector<Vertex> pool(n - 1);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<bool> pick(pool.size(), false);
    if (s - 1 > pool.size()) continue;
    std::fill(pick.end() - (s - 1), pick.end(), true);
    do {
      u128 m = u128(1) << nv;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (pick[i]) m |= u128(1) << pool[i];
      links.push_back(m);
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  if (links.size() > 24) throw RefusalError("isomorphism-class generation: " + std::to_string(links.size()) + " link edges per step is too many");
  const unsigned rank = std::max(2u, max_size(sizes));
  std::unordered_set<Certificate, CertificateHash> seen;
  std::vector<Certificate> out;
  for (const auto& base : prev)
    for (std::uint64_t pick = 0; pick < (std::uint64_t(1) << links.size()); ++pick) {
      Certificate c = base;
      for (std::size_t i = 0; i < links.size(); ++i)
        if (pick >> i & 1) c.push_back(links[i]);
      Certificate canon = certificate_of(from_certificate(n, rank, c));
      if (seen.insert(canon).second) out.push_back(std::move(canon));
    }
  std::sort(out.begin(), out.end(), [](const Certificate& a, const Certificate& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

}  // namespace detail

/// Canonical representatives of all isomorphism classes on n vertices with the given edge sizes,
/// ordered by (edge count, certificate). Cached per (n, sizes).
inline const std::vector<Hypergraph>& noniso_hypergraphs(std::size_t n, EdgeSizes sizes) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, EdgeSizes>, std::vector<Certificate>> certs;
  static std::map<std::pair<std::size_t, EdgeSizes>, std::vector<Hypergraph>> graphs;
  if (sizes == 0 || (sizes & 1)) throw InputError("edge sizes must be a nonempty set of positive sizes");
  const unsigned top = detail::max_size(sizes);
  const std::size_t ceiling = sizes == kGraphEdges ? kNonisoMaxGraphVertices : top <= 3 ? kNonisoMaxRank3Vertices : 4;
  if (n > ceiling)
    throw RefusalError("isomorphism-class generation refused above n = " + std::to_string(ceiling) + " for this edge-size set");
  std::lock_guard lock(mu);
  if (auto it = graphs.find({n, sizes}); it != graphs.end()) return it->second;
  std::vector<Certificate> cur = {Certificate{}};
  std::size_t start = 0;
  for (std::size_t m = n; m > 0; --m)
    if (auto it = certs.find({m, sizes}); it != certs.end()) {
      cur = it->second;
      start = m;
      break;
    }
  for (std::size_t m = start + 1; m <= n; ++m) {
    cur = detail::extend_by_vertex(cur, m, sizes);
    certs[{m, sizes}] = cur;
  }
  std::vector<Hypergraph> out;
  out.reserve(cur.size());
  const unsigned rank = std::max(2u, top);
  for (const auto& c : cur) out.push_back(from_certificate(n, rank, c));
  return graphs[{n, sizes}] = std::move(out);
}

inline const std::vector<Hypergraph>& noniso_graphs(std::size_t n) { return noniso_hypergraphs(n, kGraphEdges); }

}  // namespace edgestat
