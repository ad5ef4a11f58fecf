#pragma once

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgestat/exact.hpp"
#include "edgestat/hypergraph.hpp"
#include "edgestat/io.hpp"
#include "edgestat/rng.hpp"

namespace edgestat {

enum class ConstructionKind { gnp_one, bipartite_kminus1, planted_clique, hyper_upclosed, star_forest, matching_gnp, r_clique };

inline const std::vector<std::pair<ConstructionKind, std::string>>& construction_names() {
  static const std::vector<std::pair<ConstructionKind, std::string>> names = {
      {ConstructionKind::gnp_one, "gnp_one"},           {ConstructionKind::bipartite_kminus1, "bipartite_kminus1"},
      {ConstructionKind::planted_clique, "planted_clique"}, {ConstructionKind::hyper_upclosed, "hyper_upclosed"},
      {ConstructionKind::star_forest, "star_forest"},   {ConstructionKind::matching_gnp, "matching_gnp"},
      {ConstructionKind::r_clique, "r_clique"}};
  return names;
}

inline std::string to_string(ConstructionKind k) {
  for (const auto& [kind, name] : construction_names())
    if (kind == k) return name;
  return "?";
}

inline ConstructionKind construction_kind(const std::string& s) {
  for (const auto& [kind, name] : construction_names())
    if (name == s || (s == "gnp_for_ell_one" && kind == ConstructionKind::gnp_one)) return kind;
  throw InputError("unknown construction kind '" + s + "'");
}

inline bool is_randomized(ConstructionKind k) {
  return k == ConstructionKind::gnp_one || k == ConstructionKind::hyper_upclosed || k == ConstructionKind::matching_gnp;
}

struct ConstructionSpec {
  ConstructionKind kind = ConstructionKind::gnp_one;
  std::uint64_t n = 0, k = 0;
  std::optional<std::uint64_t> m, r, s, ell, seed;
  bool round = false;

  friend bool operator==(const ConstructionSpec&, const ConstructionSpec&) = default;
};

inline nlohmann::json to_json(const ConstructionSpec& c) {
  nlohmann::json j = {{"kind", to_string(c.kind)}, {"n", c.n}, {"k", c.k}, {"round", c.round}};
  if (c.m) j["m"] = *c.m;
  if (c.r) j["r"] = *c.r;
  if (c.s) j["s"] = *c.s;
  if (c.ell) j["l"] = *c.ell;
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

inline ConstructionSpec construction_from_json(const nlohmann::json& j) {
  try {
    ConstructionSpec c;
    c.kind = construction_kind(j.at("kind").get<std::string>());
    c.n = j.at("n").get<std::uint64_t>();
    c.k = j.at("k").get<std::uint64_t>();
    c.round = j.value("round", false);
    auto opt = [&](const char* key, std::optional<std::uint64_t>& dst) {
      if (j.contains(key)) dst = j.at(key).get<std::uint64_t>();
    };
    opt("m", c.m);
    opt("r", c.r);
    opt("s", c.s);
    opt("l", c.ell);
    opt("seed", c.seed);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed construction spec: ") + e.what());
  }
}

/// Refuse to materialise absurdly large edge sets.
inline constexpr std::uint64_t kMaxConstructedEdges = 50'000'000;

namespace detail {

inline void need(bool ok, const std::string& msg) {
  if (!ok) throw InputError(msg);
}

/// num * n / den, exact unless rounding (half up) is allowed.
inline std::uint64_t part_size(std::uint64_t num, std::uint64_t n, std::uint64_t den, bool round, const std::string& what) {
  const unsigned __int128 p = static_cast<unsigned __int128>(num) * n;
  if (p % den != 0 && !round)
    throw InputError(what + ": " + std::to_string(num) + "*n/k is not integral (n=" + std::to_string(n) +
                     ", k=" + std::to_string(den) + "); pass --round to round");
  return static_cast<std::uint64_t>((2 * p + den) / (2 * den));
}

inline void check_edge_budget(const BigInt& edges) {
  if (edges > from_u64(kMaxConstructedEdges))
    throw RefusalError("construction would materialise " + edges.get_str() + " edges (limit " +
                       std::to_string(kMaxConstructedEdges) + ")");
}

/// Calls f(sorted vertex list) for every t-subset of the sorted list `pool`.
inline void for_each_subset(const std::vector<Vertex>& pool, std::size_t t, const std::function<void(const std::vector<Vertex>&)>& f) {
  if (t > pool.size()) return;
  std::vector<std::size_t> idx(t);
  for (std::size_t i = 0; i < t; ++i) idx[i] = i;
  std::vector<Vertex> cur(t);
  for (;;) {
    for (std::size_t i = 0; i < t; ++i) cur[i] = pool[idx[i]];
    f(cur);
    std::size_t i = t;
    while (i > 0 && idx[i - 1] == pool.size() - t + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < t; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline Hypergraph gnp(std::uint64_t n, const Rational& p, std::uint64_t seed) {
  check_edge_budget(ceil_q(p * binomial(n, 2)));
  Philox rng(seed);
  std::vector<std::vector<Vertex>> es;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) es.push_back({u, v});
  return Hypergraph(n, 2, std::move(es));
}

inline std::vector<Vertex> iota(std::uint64_t from, std::uint64_t to) {
  std::vector<Vertex> out;
  for (std::uint64_t v = from; v < to; ++v) out.push_back(static_cast<Vertex>(v));
  return out;
}

inline Hypergraph complete_bipartite(std::uint64_t n, std::uint64_t a_from, std::uint64_t a_to, std::uint64_t b_from, std::uint64_t b_to) {
  check_edge_budget(from_u64(a_to - a_from) * from_u64(b_to - b_from));
  std::vector<std::vector<Vertex>> es;
  for (auto u = a_from; u < a_to; ++u)
    for (auto v = b_from; v < b_to; ++v) es.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  return Hypergraph(n, 2, std::move(es));
}

}  // namespace detail

/// G(n, 1/C(k,2)).
inline Hypergraph gnp_for_ell_one(std::uint64_t n, std::uint64_t k, std::uint64_t seed) {
  detail::need(k >= 2, "gnp_for_ell_one: need k >= 2");
  detail::need(n >= k, "gnp_for_ell_one: need n >= k");
  return detail::gnp(n, Rational(1, binomial(k, 2)), seed);
}

/// Size of the small part of bipartite_kminus1.
inline std::uint64_t bipartite_small_part(std::uint64_t n, std::uint64_t k, bool round = false) {
  detail::need(k >= 1 && n >= k, "bipartite_kminus1: need 1 <= k <= n");
  if (n % k != 0 && !round)
    throw InputError("bipartite_kminus1: k must divide n (n=" + std::to_string(n) + ", k=" + std::to_string(k) + "); pass --round to use floor(n/k)");
  return n / k;
}

/// Complete bipartite graph with parts floor(n/k) (vertices 0..) and the rest.
inline Hypergraph bipartite_kminus1(std::uint64_t n, std::uint64_t k, bool round = false) {
  std::uint64_t s = bipartite_small_part(n, k, round);
  return detail::complete_bipartite(n, 0, s, s, n);
}

/// Block size of planted_clique / r_clique: m n / k.
inline std::uint64_t clique_block(std::uint64_t n, std::uint64_t k, std::uint64_t m, bool round = false) {
  return detail::part_size(m, n, k, round, "clique block");
}

inline Hypergraph planted_clique(std::uint64_t n, std::uint64_t k, std::uint64_t m, bool round = false) {
  detail::need(k >= 1 && n >= k, "planted_clique: need 1 <= k <= n");
  detail::need(m >= 1, "planted_clique: need m >= 1");
  detail::need(m <= k, "planted_clique: need m <= k");
  std::uint64_t b = clique_block(n, k, m, round);
  detail::check_edge_budget(binomial(b, 2));
  std::vector<std::vector<Vertex>> es;
  for (Vertex u = 0; u < b; ++u)
    for (Vertex v = u + 1; v < b; ++v) es.push_back({u, v});
  return Hypergraph(n, 2, std::move(es));
}

/// All r-sets containing an s-set from G_s(n, 1/C(k,s)).
inline Hypergraph hyper_upclosed(std::uint64_t n, std::uint64_t k, std::uint64_t r, std::uint64_t s, std::uint64_t seed) {
  detail::need(s >= 1, "hyper_upclosed: need s >= 1");
  detail::need(s <= r, "hyper_upclosed: need s <= r");
  detail::need(r <= k && k <= n, "hyper_upclosed: need r <= k <= n");
  const Rational p(1, binomial(k, s));
  Philox rng(seed);
  std::vector<std::vector<Vertex>> seeds;
  detail::for_each_subset(detail::iota(0, n), s, [&](const std::vector<Vertex>& S) {
    if (rng.bernoulli(p)) seeds.push_back(S);
  });
  detail::check_edge_budget(from_u64(seeds.size()) * binomial(n - s, r - s));
  std::vector<std::vector<Vertex>> es;
  for (const auto& S : seeds) {
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < n; ++v)
      if (!std::binary_search(S.begin(), S.end(), v)) rest.push_back(v);
    detail::for_each_subset(rest, r - s, [&](const std::vector<Vertex>& T) {
      std::vector<Vertex> e = S;
      e.insert(e.end(), T.begin(), T.end());
      es.push_back(std::move(e));
    });
  }
  return Hypergraph(n, static_cast<unsigned>(r), std::move(es));
}

/// Complete bipartite between n/k centres and l n/k leaves, plus (k-l-1) n/k isolated vertices.
inline Hypergraph star_forest(std::uint64_t n, std::uint64_t k, std::uint64_t l, bool round = false) {
  detail::need(l >= 1, "star_forest: need l >= 1");
  detail::need(k >= l + 1, "star_forest: need k >= l + 1");
  detail::need(n >= k, "star_forest: need n >= k");
  std::uint64_t c = detail::part_size(1, n, k, round, "star_forest centre part");
  std::uint64_t leaves = detail::part_size(l, n, k, round, "star_forest leaf part");
  detail::need(c + leaves <= n, "star_forest: rounded parts exceed n");
  return detail::complete_bipartite(n, 0, c, c, c + leaves);
}

/// G(n, l / C(k,2)).
inline Hypergraph matching_gnp(std::uint64_t n, std::uint64_t k, std::uint64_t l, std::uint64_t seed) {
  detail::need(k >= 2 && n >= k, "matching_gnp: need 2 <= k <= n");
  detail::need(l >= 1, "matching_gnp: need l >= 1");
  detail::need(from_u64(l) <= binomial(k, 2), "matching_gnp: need l <= C(k,2)");
  return detail::gnp(n, Rational(from_u64(l), binomial(k, 2)), seed);
}

/// All r-subsets of a block of m n / k vertices.
inline Hypergraph r_clique(std::uint64_t n, std::uint64_t k, std::uint64_t m, std::uint64_t r, bool round = false) {
  detail::need(r >= 1, "r_clique: need r >= 1");
  detail::need(m >= r, "r_clique: need m >= r");
  detail::need(m <= k && k <= n, "r_clique: need m <= k <= n");
  std::uint64_t b = clique_block(n, k, m, round);
  detail::check_edge_budget(binomial(b, r));
  std::vector<std::vector<Vertex>> es;
  detail::for_each_subset(detail::iota(0, b), r, [&](const std::vector<Vertex>& e) { es.push_back(e); });
  return Hypergraph(n, static_cast<unsigned>(r), std::move(es));
}

inline Hypergraph build(const ConstructionSpec& c) {
  auto req = [&](const std::optional<std::uint64_t>& v, const char* name) {
    if (!v) throw InputError(to_string(c.kind) + " needs parameter " + name);
    return *v;
  };
  switch (c.kind) {
    case ConstructionKind::gnp_one: return gnp_for_ell_one(c.n, c.k, req(c.seed, "seed"));
    case ConstructionKind::bipartite_kminus1: return bipartite_kminus1(c.n, c.k, c.round);
    case ConstructionKind::planted_clique: return planted_clique(c.n, c.k, req(c.m, "m"), c.round);
    case ConstructionKind::hyper_upclosed: return hyper_upclosed(c.n, c.k, req(c.r, "r"), req(c.s, "s"), req(c.seed, "seed"));
    case ConstructionKind::star_forest: return star_forest(c.n, c.k, req(c.ell, "l"), c.round);
    case ConstructionKind::matching_gnp: return matching_gnp(c.n, c.k, req(c.ell, "l"), req(c.seed, "seed"));
    case ConstructionKind::r_clique: return r_clique(c.n, c.k, req(c.m, "m"), req(c.r, "r"), c.round);
  }
  throw InputError("unknown construction");
}

/// Hypercore text with a "# construction: {json}" header.
inline std::string emit_construction(const ConstructionSpec& c, const Hypergraph& h) {
  return format_hypergraph(h, {"construction: " + to_json(c).dump()});
}

/// Exact law of e(A) when e(A) depends only on b = |A intersect block|:
/// P[b] = C(B,b) C(n-B,k-b) / C(n,k), pushed forward through l(b).
inline std::map<std::uint64_t, Rational> block_pushforward(std::uint64_t n, std::uint64_t block, std::uint64_t k,
                                                           const std::function<std::uint64_t(std::uint64_t)>& l_of_b) {
  detail::need(block <= n && k <= n, "block_pushforward: need block, k <= n");
  std::map<std::uint64_t, Rational> out;
  const BigInt total = binomial(n, k);
  for (std::uint64_t b = 0; b <= std::min(k, block); ++b) {
    if (k - b > n - block) continue;
    Rational p(binomial(block, b) * binomial(n - block, k - b), total);
    p.canonicalize();
    out[l_of_b(b)] += p;
  }
  for (auto& [l, p] : out) p.canonicalize();
  return out;
}

}  // namespace edgestat
