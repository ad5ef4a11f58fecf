#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "edgestat/bounds.hpp"
#include "edgestat/exact.hpp"
#include "edgestat/hypergraph.hpp"
#include "edgestat/interval.hpp"
#include "edgestat/rng.hpp"

namespace edgestat {

/// Raised when the object a computation ranges over does not exist (no good or tidy sequence).
class EmptyDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kRhoMaxVertices = 8;
inline constexpr std::size_t kRhoBoundMaxK = 7;
inline constexpr std::size_t kTreeMaxVertices = 10;
inline constexpr std::size_t kTreeMaxA = 6;
inline constexpr std::size_t kRandomBExactMax = 18;

namespace detail {

/// Calls f(T) for every t-subset T of pool, in increasing order of the lowest differing vertex.
inline void for_each_subset(VertexSet pool, std::size_t t, const std::function<void(VertexSet)>& f) {
  std::vector<Vertex> v = pool.to_vector();
  if (t > v.size()) return;
  std::vector<std::size_t> idx(t);
  for (std::size_t i = 0; i < t; ++i) idx[i] = i;
  while (true) {
    VertexSet s;
    for (std::size_t i : idx) s.insert(v[i]);
    f(s);
    std::size_t i = t;
    while (i > 0 && idx[i - 1] == v.size() - t + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < t; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline VertexSet distinct_set(const std::vector<Vertex>& seq, std::size_t n) {
  VertexSet s;
  for (Vertex v : seq) {
    if (v >= n) throw InputError("vertex out of range");
    if (s.contains(v)) throw InputError("sequence repeats vertex " + std::to_string(v));
    s.insert(v);
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------- good sequences and rho

/// Good-sequence structure of H for fixed (k, l). Prefix goodness depends only on the prefix set
/// for j < k: S is good iff some k-set A containing S has e(A) = l and a non-isolated vertex outside S.
class GoodSequences {
 public:
  GoodSequences(const Hypergraph& h, std::size_t k, std::uint64_t l, std::size_t max_vertices = 20) : h_(h), k_(k), l_(l) {
    if (k == 0 || k > h.n()) throw InputError("need 1 <= k <= n");
    if (h.n() > max_vertices) throw RefusalError("good-sequence search refused above n = " + std::to_string(max_vertices));
    if (l == 0) return;  // m(A) >= 1 is impossible with no edges
    detail::for_each_subset(h.vertices(), k, [&](VertexSet a) {
      if (edges_within(h, a) == l) targets_.push_back({a, nonisolated_within(h, a)});
    });
  }

  const Hypergraph& graph() const { return h_; }
  std::size_t k() const { return k_; }
  std::uint64_t l() const { return l_; }
  bool any() const { return !targets_.empty(); }

  /// Goodness of a prefix set of size < k.
  bool good_set(VertexSet s) const {
    auto it = good_memo_.find(s.bits());
    if (it != good_memo_.end()) return it->second;
    bool ok = false;
    for (const auto& [a, ni] : targets_)
      if (s.subset_of(a) && !ni.subset_of(s)) {
        ok = true;
        break;
      }
    good_memo_.emplace(s.bits(), ok);
    return ok;
  }

  /// Direct check of a full k-sequence.
  bool good_full(VertexSet a, Vertex last) const {
    return edges_within(h_, a) == l_ && nonisolated_within(h_, a).contains(last);
  }

  bool is_good(const std::vector<Vertex>& seq) const {
    VertexSet s = detail::distinct_set(seq, h_.n());
    if (seq.size() > k_) throw InputError("sequence longer than k");
    if (seq.size() == k_) return good_full(s, seq.back());
    return good_set(s);
  }

  /// lambda(prefix + v) for a good extension.
  Rational lambda(VertexSet extended) const {
    if (extended.size() < k_) return 1;
    return Rational(1, nonisolated_within(h_, extended).size());
  }

  /// Lambda(prefix), which only depends on the prefix set.
  const Rational& Lambda(VertexSet s) const {
    auto it = lambda_memo_.find(s.bits());
    if (it != lambda_memo_.end()) return it->second;
    Rational total = 0;
    for (Vertex v = 0; v < h_.n(); ++v) {
      if (s.contains(v)) continue;
      VertexSet t = s | VertexSet::single(v);
      if (t.size() == k_ ? good_full(t, v) : good_set(t)) total += lambda(t);
    }
    return lambda_memo_.emplace(s.bits(), total).first->second;
  }

  /// Good one-step extensions of a prefix set, ascending.
  std::vector<Vertex> extensions(VertexSet s) const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < h_.n(); ++v) {
      if (s.contains(v)) continue;
      VertexSet t = s | VertexSet::single(v);
      if (t.size() == k_ ? good_full(t, v) : good_set(t)) out.push_back(v);
    }
    return out;
  }

  /// rho of a good sequence.
  Rational rho(const std::vector<Vertex>& seq) const {
    if (!is_good(seq)) throw InputError("rho is defined on good sequences only");
    Rational r = 1;
    VertexSet s;
    for (Vertex v : seq) {
      const Rational& big = Lambda(s);
      s.insert(v);
      r *= lambda(s) / big;
    }
    return r;
  }

 private:
  const Hypergraph& h_;
  std::size_t k_;
  std::uint64_t l_;
  std::vector<std::pair<VertexSet, VertexSet>> targets_;
  mutable std::unordered_map<u128, bool, U128Hash> good_memo_;
  mutable std::unordered_map<u128, Rational, U128Hash> lambda_memo_;
};

inline bool is_good_sequence(const Hypergraph& h, std::size_t k, std::uint64_t l, const std::vector<Vertex>& prefix) {
  return GoodSequences(h, k, l).is_good(prefix);
}

/// Sum of rho over all good j-sequences, for every j = 1..k (index j-1), by depth-first enumeration.
inline std::vector<Rational> rho_sums(const Hypergraph& h, std::size_t k, std::uint64_t l) {
  if (h.n() > kRhoMaxVertices) throw RefusalError("rho enumeration refused above n = " + std::to_string(kRhoMaxVertices));
  GoodSequences g(h, k, l);
  if (!g.any()) throw EmptyDomainError("no good sequence exists for this (k, l)");
  std::vector<Rational> sums(k, Rational(0));
  std::function<void(VertexSet, const Rational&)> dfs = [&](VertexSet s, const Rational& rho) {
    if (s.size() == k) return;
    const Rational& big = g.Lambda(s);
    for (Vertex v : g.extensions(s)) {
      VertexSet t = s | VertexSet::single(v);
      Rational next = rho * g.lambda(t) / big;
      sums[t.size() - 1] += next;
      dfs(t, next);
    }
  };
  dfs(VertexSet(), Rational(1));
  return sums;
}

inline Rational rho_sum_check(const Hypergraph& h, std::size_t k, std::uint64_t l, std::size_t j) {
  if (j < 1 || j > k) throw InputError("need 1 <= j <= k");
  return rho_sums(h, k, l)[j - 1];
}

struct RhoBoundResult {
  Rational lhs;
  Rational rhs_lo, rhs_hi;  // rhs evaluated with the lower and upper rational brackets of e
  bool pass = false;        // lhs >= rhs_hi, certified
  bool decided = true;      // false when lhs falls inside [rhs_lo, rhs_hi)
  Rational Lambda_last;     // Lambda(v_1..v_{k-1}), one value for every labeling
  Rational C_times_n;       // the same quantity rebuilt from the neighbourhood families
  bool labeling_independent = true;
};

/// C * n = sum over v outside A' with |N(v, A')| = d of 1 / (|B u U(N(v, A'))| + 1), B = non-isolated part of A'.
inline Rational lambda_last_via_families(const Hypergraph& h, VertexSet a, Vertex vk) {
  VertexSet ap = a - VertexSet::single(vk);
  std::size_t d = neighborhood_family(h, vk, ap).size();
  VertexSet b = nonisolated_within(h, ap);
  Rational total = 0;
  for (Vertex v = 0; v < h.n(); ++v) {
    if (ap.contains(v)) continue;
    auto fam = neighborhood_family(h, v, ap);
    if (fam.size() != d) continue;
    VertexSet u;
    for (VertexSet x : fam) u |= x;
    total += Rational(1, (b | u).size() + 1);
  }
  return total;
}

/// The per-set inequality for one (A, v_k): the rho-mass of all labelings of A \ {v_k} against
/// (1/m(A)) ((k - r l)/k) e k! / n^k.
inline RhoBoundResult per_set_rho_bound(const Hypergraph& h, VertexSet a, Vertex vk, std::size_t k, std::uint64_t l, unsigned r) {
  if (a.size() != k) throw InputError("|A| must equal k");
  if (!a.contains(vk)) throw InputError("v_k must lie in A");
  if (k > kRhoBoundMaxK) throw RefusalError("per-set rho bound refused above k = " + std::to_string(kRhoBoundMaxK));
  if (h.max_edge_size() > r) throw InapplicableError("hypergraph has edges larger than r");
  if (l < 1 || r * l >= k) throw InapplicableError("needs 1 <= l < k/r");
  if (edges_within(h, a) != l) throw InapplicableError("needs e(A) = l");
  VertexSet ni = nonisolated_within(h, a);
  if (!ni.contains(vk)) throw InapplicableError("v_k must be non-isolated in A");

  GoodSequences g(h, k, l);
  VertexSet ap = a - VertexSet::single(vk);
  RhoBoundResult res;
  res.Lambda_last = g.Lambda(ap);
  res.C_times_n = lambda_last_via_families(h, a, vk);
  const Rational inv_m(1, ni.size());

  // Every labeling of A' followed by v_k is good, so each prefix is good.
  std::vector<Vertex> rest = ap.to_vector();
  Rational lhs = 0;
  do {
    Rational rho = 1;
    VertexSet s;
    for (Vertex v : rest) {
      rho /= g.Lambda(s);
      s.insert(v);
    }
    // The sequence-level Lambda of this labeling, recomputed from its good one-step extensions.
    Rational last = 0;
    for (Vertex v : g.extensions(s)) last += g.lambda(s | VertexSet::single(v));
    if (last != res.Lambda_last) res.labeling_independent = false;
    lhs += rho / last * inv_m;
  } while (std::next_permutation(rest.begin(), rest.end()));
  res.lhs = lhs;

  Rational base = inv_m * Rational(from_u64(k - r * l), from_u64(k)) * Rational(factorial(k), ipow(from_u64(h.n()), k));
  base.canonicalize();
  res.rhs_lo = base * e_lower();
  res.rhs_hi = base * e_upper();
  res.pass = lhs >= res.rhs_hi;
  res.decided = res.pass || lhs < res.rhs_lo;
  return res;
}

// ---------------------------------------------------------------- pleasant and nice pairs

enum class PairFlavor { pleasant, nice };

inline std::string to_string(PairFlavor f) { return f == PairFlavor::pleasant ? "pleasant" : "nice"; }

/// Threshold parameter: eps for pleasant pairs (0 < eps < 1/2), z for nice pairs (z > 0).
struct FlavorParams {
  PairFlavor flavor = PairFlavor::pleasant;
  Rational eps = 0;
  SqrtRational z;

  static FlavorParams pleasant(const Rational& e) {
    if (!(e > 0 && e < Rational(1, 2))) throw InputError("pleasant pairs need 0 < eps < 1/2");
    return {PairFlavor::pleasant, e, {}};
  }
  static FlavorParams nice(const SqrtRational& zz) {
    if (!(zz.coef > 0 && zz.radicand > 0)) throw InputError("nice pairs need z > 0");
    return {PairFlavor::nice, 0, zz};
  }
  std::string describe() const { return to_string(flavor) + (flavor == PairFlavor::pleasant ? " eps=" + eps.get_str() : " z=" + z.describe()); }
};

/// eps sqrt(k) / (4 sqrt(r)) as coef * sqrt(radicand).
inline SqrtRational pleasant_threshold(std::size_t k, unsigned r, const Rational& eps) {
  return {eps / 4, Rational(from_u64(k), r)};
}

/// floor(sqrt(k)/2)
inline std::size_t tame_s(std::size_t k) { return to_u64(isqrt(from_u64(k))) / 2; }

struct PairClassification {
  PairStats stats;
  std::size_t outside = 0;  // |A \ B|
  bool cond[4] = {false, false, false, false};
  bool holds() const { return cond[0] && cond[1] && cond[2] && cond[3]; }
  std::string verdict(PairFlavor f) const { return holds() ? to_string(f) : "neither"; }
};

inline PairClassification classify_pair(const Hypergraph& h, VertexSet a, VertexSet b, std::size_t k, std::uint64_t l, unsigned r,
                                        const FlavorParams& p) {
  if (!b.subset_of(a)) throw InputError("classify_pair: B must be a subset of A");
  PairClassification c;
  c.stats = pair_stats(h, a, b);
  c.outside = (a - b).size();
  c.cond[0] = a.size() == k && edges_within(h, a) == l;
  const Rational hq(from_u64(c.stats.h));
  if (p.flavor == PairFlavor::pleasant) {
    SqrtRational t = pleasant_threshold(k, r, p.eps);
    c.cond[1] = c.stats.f == 0;
    c.cond[2] = t.leq(hq);
    c.cond[3] = t.leq(Rational(from_u64(c.outside - c.stats.h)));
  } else {
    const Rational out(from_u64(c.outside));
    c.cond[1] = p.z.leq(hq) && SqrtRational{Rational(1, 2), from_u64(k)}.geq(hq);
    c.cond[2] = SqrtRational{Rational(from_u64(2 * c.stats.f)), from_u64(k)}.leq(out);
    c.cond[3] = SqrtRational{Rational(1), from_u64(k)}.leq(out);
  }
  return c;
}

struct PartnerCount {
  BigInt count = 0;
  Interval bound;
  bool pass = false;
};

/// Number of A containing B with (A, B) pleasant / nice, against the per-B partner bound.
inline PartnerCount count_partner_sets(const Hypergraph& h, VertexSet b, std::size_t k, std::uint64_t l, unsigned r, const FlavorParams& p) {
  h.check_subset(b);
  if (b.size() > k) throw InputError("|B| must be at most k");
  std::size_t a = k - b.size();
  PartnerCount out;
  detail::for_each_subset(h.vertices() - b, a, [&](VertexSet t) {
    if (classify_pair(h, b | t, b, k, l, r, p).holds()) out.count += 1;
  });
  Interval coef = p.flavor == PairFlavor::pleasant ? bound_lemma_B_pleasant(r, k, p.eps) : bound_lemma_B_nice(p.z);
  out.bound = coef * count_scale(h.n(), a);
  out.pass = out.bound.lower_geq(out.count);
  return out;
}

// ---------------------------------------------------------------- tidy and tame sequences

namespace detail {

struct SeqContext {
  const Hypergraph& h;
  VertexSet b;
  std::size_t k, a;
  std::uint64_t l;
  unsigned r;
  FlavorParams p;
  VertexSet conn;  // vertices outside B connected to B
  std::size_t s = 0;
};

inline SeqContext make_context(const Hypergraph& h, VertexSet b, std::size_t k, std::uint64_t l, unsigned r, const FlavorParams& p) {
  h.check_subset(b);
  if (b.size() > k) throw InputError("|B| must be at most k");
  SeqContext c{h, b, k, k - b.size(), l, r, p, connected_to_set(h, b)};
  if (p.flavor == PairFlavor::nice) {
    c.s = tame_s(k);
    if (c.s < 1 || c.a < 2 * c.s) throw InapplicableError("tame sequences need s >= 1 and a >= 2s");
  }
  return c;
}

/// h for a full sequence, or nullopt when it is not tidy / tame.
inline std::optional<std::size_t> shape_index(const SeqContext& c, const std::vector<Vertex>& seq) {
  VertexSet all = c.b;
  for (Vertex v : seq) all.insert(v);
  if (edges_within(c.h, all) != c.l) return std::nullopt;
  VertexSet ni = nonisolated_within(c.h, all);
  const std::size_t a = c.a;
  std::size_t h = 0;
  for (Vertex v : seq) h += c.conn.contains(v);
  const Rational hq(from_u64(h));
  if (c.p.flavor == PairFlavor::pleasant) {
    if (h < 1 || h + 1 > a) return std::nullopt;
    SqrtRational t = pleasant_threshold(c.k, c.r, c.p.eps);
    if (!t.leq(hq) || !t.leq(Rational(from_u64(a - h)))) return std::nullopt;
    for (std::size_t i = 0; i < h; ++i)
      if (!c.conn.contains(seq[i])) return std::nullopt;
    for (std::size_t i = h; i < a; ++i)
      if (ni.contains(seq[i])) return std::nullopt;
    return h;
  }
  if (h < 1 || h > c.s || !c.p.z.leq(hq)) return std::nullopt;
  for (std::size_t i = 0; i < a - c.s; ++i)
    if (c.conn.contains(seq[i])) return std::nullopt;
  for (std::size_t i = a - c.s; i < a - c.s + h; ++i)
    if (!c.conn.contains(seq[i])) return std::nullopt;
  for (std::size_t i = a - c.s + h; i < a; ++i)
    if (ni.contains(seq[i])) return std::nullopt;
  return h;
}

/// Necessary condition on a partial sequence; prunes the tree search.
inline bool prefix_feasible(const SeqContext& c, const std::vector<Vertex>& seq, VertexSet used) {
  if (edges_within(c.h, used) > c.l) return false;
  std::size_t i = seq.size() - 1;
  bool conn = c.conn.contains(seq[i]);
  if (c.p.flavor == PairFlavor::pleasant) {
    // connected block first, then unconnected
    return !(conn && i > 0 && !c.conn.contains(seq[i - 1]));
  }
  if (i < c.a - c.s) return !conn;
  return !(conn && i > c.a - c.s && !c.conn.contains(seq[i - 1]));
}

inline void check_sequence(const SeqContext& c, const std::vector<Vertex>& seq) {
  VertexSet s = distinct_set(seq, c.h.n());
  if ((s & c.b).size() != 0) throw InputError("sequence must avoid B");
  if (seq.size() != c.a) throw InputError("sequence length must be a = k - |B|");
}

}  // namespace detail

/// h(B u seq, B) if seq is tidy (pleasant flavor) or tame (nice flavor), else nullopt.
inline std::optional<std::size_t> sequence_index(const Hypergraph& h, VertexSet b, const std::vector<Vertex>& seq, std::size_t k,
                                                 std::uint64_t l, unsigned r, const FlavorParams& p) {
  auto c = detail::make_context(h, b, k, l, r, p);
  detail::check_sequence(c, seq);
  return detail::shape_index(c, seq);
}

inline bool is_tidy(const Hypergraph& h, VertexSet b, const std::vector<Vertex>& seq, std::size_t k, std::uint64_t l, unsigned r,
                    const Rational& eps) {
  return sequence_index(h, b, seq, k, l, r, FlavorParams::pleasant(eps)).has_value();
}

inline bool is_tame(const Hypergraph& h, VertexSet b, const std::vector<Vertex>& seq, std::size_t k, std::uint64_t l, unsigned r,
                    const SqrtRational& z) {
  return sequence_index(h, b, seq, k, l, r, FlavorParams::nice(z)).has_value();
}

/// Number of labelings of A \ B that are tidy / tame, by running through all (a)! orders.
inline std::uint64_t count_good_labelings(const Hypergraph& h, VertexSet a, VertexSet b, std::size_t k, std::uint64_t l, unsigned r,
                                          const FlavorParams& p) {
  if (!b.subset_of(a)) throw InputError("B must be a subset of A");
  auto c = detail::make_context(h, b, k, l, r, p);
  std::vector<Vertex> rest = (a - b).to_vector();
  if (rest.size() != c.a) return 0;
  std::uint64_t count = 0;
  do count += detail::shape_index(c, rest).has_value();
  while (std::next_permutation(rest.begin(), rest.end()));
  return count;
}

struct ProcedureLeaf {
  std::vector<Vertex> seq;
  Rational prob;
  std::size_t h = 0;
};

struct ProcedureTree {
  VertexSet b;
  std::size_t n = 0, k = 0, a = 0;
  FlavorParams params;
  std::vector<ProcedureLeaf> leaves;  // lexicographic order
  std::size_t nodes = 0;
};

/// Exact law of the random procedure: each step picks uniformly among vertices that keep the
/// prefix extendable to a tidy / tame sequence.
inline ProcedureTree procedure_tree(const Hypergraph& h, VertexSet b, std::size_t k, std::uint64_t l, unsigned r, const FlavorParams& p) {
  auto c = detail::make_context(h, b, k, l, r, p);
  if (h.n() > kTreeMaxVertices || c.a > kTreeMaxA)
    throw RefusalError("procedure tree refused above n = " + std::to_string(kTreeMaxVertices) + " or a = " + std::to_string(kTreeMaxA));
  ProcedureTree tree{b, h.n(), k, c.a, p, {}, 0};
  std::vector<Vertex> seq;
  // Returns leaves below the current prefix with probabilities conditional on reaching it.
  std::function<std::vector<ProcedureLeaf>(VertexSet)> explore = [&](VertexSet used) -> std::vector<ProcedureLeaf> {
    ++tree.nodes;
    if (seq.size() == c.a) {
      auto idx = detail::shape_index(c, seq);
      if (!idx) return {};
      return {ProcedureLeaf{seq, Rational(1), *idx}};
    }
    std::vector<std::vector<ProcedureLeaf>> kids;
    for (Vertex v = 0; v < h.n(); ++v) {
      if (used.contains(v)) continue;
      VertexSet next = used | VertexSet::single(v);
      seq.push_back(v);
      if (detail::prefix_feasible(c, seq, next)) {
        auto sub = explore(next);
        if (!sub.empty()) kids.push_back(std::move(sub));
      }
      seq.pop_back();
    }
    std::vector<ProcedureLeaf> out;
    const Rational share(1, kids.size() ? kids.size() : 1);
    for (auto& sub : kids)
      for (auto& leaf : sub) {
        leaf.prob *= share;
        out.push_back(std::move(leaf));
      }
    return out;
  };
  tree.leaves = explore(b);
  if (tree.leaves.empty()) throw EmptyDomainError("no " + std::string(p.flavor == PairFlavor::pleasant ? "tidy" : "tame") + " sequence exists");
  return tree;
}

/// a^a / (h^h (a-h)^(a-h)) / n^a
inline Rational leaf_floor(std::size_t a, std::size_t h, std::size_t n) {
  BigInt num = ipow(from_u64(a), a);
  BigInt den = ipow(from_u64(h), h) * ipow(from_u64(a - h), a - h) * ipow(from_u64(n), a);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Per-set floor on P[B u seq = A]: pleasant eps^(1/2) k^(1/4) / (2 r^(1/4)) * a!/n^a, nice (3/4) sqrt(z) a!/n^a.
inline Interval set_mass_floor(std::size_t n, std::size_t k, std::size_t a, unsigned r, const FlavorParams& p) {
  Interval scale = Interval(factorial(a)) / Interval(ipow(from_u64(n), a));
  if (p.flavor == PairFlavor::pleasant)
    return Interval(p.eps).sqrt() * Interval(from_u64(k)).pow(Rational(1, 4)) / (Interval(2) * Interval(from_u64(r)).pow(Rational(1, 4))) * scale;
  return Interval(Rational(3, 4)) * (Interval(p.z.coef) * Interval(p.z.radicand).sqrt()).sqrt() * scale;
}

/// Everything the partner-count argument asserts for one (H, B, k, l, params), checked exactly.
struct MachineryReport {
  std::size_t partners = 0;
  bool partner_bound_ok = true;
  std::size_t labeling_floor_violations = 0;  // #good labelings of A \ B below h!(a-h)! (tidy) or 3/4 of it (tame)
  std::size_t leaf_floor_violations = 0;
  std::size_t set_mass_violations = 0;
  std::size_t leaves = 0;
  bool tree_built = false;
  bool tree_mass_one = true;
  bool applicable = true;
  std::string note;
  bool ok() const {
    return partner_bound_ok && labeling_floor_violations == 0 && leaf_floor_violations == 0 && set_mass_violations == 0 && tree_mass_one;
  }
};

inline MachineryReport check_partner_machinery(const Hypergraph& h, VertexSet b, std::size_t k, std::uint64_t l, unsigned r,
                                               const FlavorParams& p) {
  MachineryReport rep;
  std::size_t a;
  try {
    a = detail::make_context(h, b, k, l, r, p).a;
  } catch (const InapplicableError& e) {
    // Tame sequences are undefined here; the nice bound then holds because no nice pair exists.
    rep.applicable = false;
    rep.note = e.what();
    auto pc = count_partner_sets(h, b, k, l, r, p);
    rep.partners = to_u64(pc.count);
    rep.partner_bound_ok = pc.pass && pc.count == 0;
    return rep;
  }
  auto pc = count_partner_sets(h, b, k, l, r, p);
  rep.partners = to_u64(pc.count);
  rep.partner_bound_ok = pc.pass;

  std::vector<VertexSet> partners;
  detail::for_each_subset(h.vertices() - b, a, [&](VertexSet t) {
    if (classify_pair(h, b | t, b, k, l, r, p).holds()) partners.push_back(b | t);
  });
  for (VertexSet A : partners) {
    std::size_t hh = pair_stats(h, A, b).h;
    BigInt floor4 = 4 * factorial(hh) * factorial(a - hh);
    BigInt got = 4 * from_u64(count_good_labelings(h, A, b, k, l, r, p));
    if (p.flavor == PairFlavor::nice) floor4 = floor4 * 3 / 4;  // 4 * (3/4) h!(a-h)!
    if (got < floor4) ++rep.labeling_floor_violations;
  }

  std::optional<ProcedureTree> tree;
  try {
    tree = procedure_tree(h, b, k, l, r, p);
  } catch (const EmptyDomainError&) {
    if (!partners.empty()) ++rep.set_mass_violations;  // a partner implies a good labeling
    return rep;
  }
  rep.tree_built = true;
  rep.leaves = tree->leaves.size();
  Rational mass = 0;
  std::map<u128, Rational> by_set;
  for (const auto& leaf : tree->leaves) {
    mass += leaf.prob;
    if (leaf.prob < leaf_floor(a, leaf.h, h.n())) ++rep.leaf_floor_violations;
    VertexSet s = b;
    for (Vertex v : leaf.seq) s.insert(v);
    by_set[s.bits()] += leaf.prob;
  }
  rep.tree_mass_one = mass == 1;
  Interval floor = set_mass_floor(h.n(), k, a, r, p);
  for (VertexSet A : partners) {
    auto it = by_set.find(A.bits());
    Rational got = it == by_set.end() ? Rational(0) : it->second;
    if (!floor.upper_leq(got)) ++rep.set_mass_violations;
  }
  return rep;
}

// ---------------------------------------------------------------- random B

enum class RandomBLemma { pleasant_eps, nice_small_c, nice_large_c };

inline std::string to_string(RandomBLemma x) {
  switch (x) {
    case RandomBLemma::pleasant_eps: return "pleasant_eps";
    case RandomBLemma::nice_small_c: return "nice_small_c";
    case RandomBLemma::nice_large_c: return "nice_large_c";
  }
  return "?";
}

struct RandomBResult {
  bool hypothesis_ok = false;       // e(A) = l and m(A) in the lemma's window
  bool side_conditions_ok = false;  // the parameter assumptions the proof makes before sampling
  bool p_valid = false;             // 0 <= p <= 1
  bool exact = true;
  std::vector<BigInt> successes_by_size;  // index |B|; exact mode only
  Interval probability;
  std::optional<Rational> probability_q;  // when p is rational
  Rational floor;
  FlavorParams params;
  std::uint64_t samples = 0, hits = 0;
  bool applicable() const { return hypothesis_ok && side_conditions_ok && p_valid; }
  bool meets_floor() const { return probability.lower_geq(floor); }
};

/// P[(A, B) is pleasant / nice] when B keeps each vertex of A with probability p.
/// param is eps for pleasant_eps and c for the nice lemmas.
inline RandomBResult random_B_success(const Hypergraph& h, VertexSet a, std::size_t k, std::uint64_t l, unsigned r, RandomBLemma lemma,
                                      const Rational& param, std::uint64_t mc_samples = 0, std::uint64_t seed = 0) {
  h.check_subset(a);
  RandomBResult res;
  const Rational kq(from_u64(k));
  const std::size_t m = nonisolated_within(h, a).size();
  const Rational mq(from_u64(m));
  const bool base = a.size() == k && edges_within(h, a) == l && h.max_edge_size() <= r;
  SqrtRational q;  // 1 - p
  switch (lemma) {
    case RandomBLemma::pleasant_eps:
      res.params = FlavorParams::pleasant(param);
      res.hypothesis_ok = base && param * kq <= mq && mq <= (1 - param) * kq;
      res.side_conditions_ok = param * param * kq >= Rational(4096 * r);
      q = {Rational(1, 2), Rational(1, from_u64(r * k))};
      res.floor = Rational(1, 2);
      break;
    case RandomBLemma::nice_small_c:
      if (!(param > 0)) throw InputError("c must be positive");
      res.params = FlavorParams::nice(SqrtRational::rational(param / (32 * r)));
      res.hypothesis_ok = base && param <= mq && SqrtRational{Rational(1, 2), kq}.geq(mq);
      res.side_conditions_ok = SqrtRational{Rational(1, 2), kq}.geq(param) && 4 * param * param < kq && param >= Rational(1024 * r);
      q = SqrtRational::rational(Rational(1, 8 * r));
      res.floor = Rational(1, 4);
      break;
    case RandomBLemma::nice_large_c:
      if (!(param > 0)) throw InputError("c must be positive");
      res.params = FlavorParams::nice(SqrtRational{Rational(1, 64 * r), kq});
      res.hypothesis_ok = base && param <= mq && mq <= 2 * param;
      res.side_conditions_ok =
          4 * param * param >= kq && param <= kq / (32 * r) && kq >= Rational(BigInt(44 * 44) * (44 * 44) * (r * r));
      q = {1 / (16 * r * param), kq};
      res.floor = Rational(1, 4);
      break;
  }
  res.p_valid = q.leq(Rational(1));
  if (!res.p_valid) return res;
  Interval qi = Interval(q.coef) * Interval(q.radicand).sqrt();
  Interval pi = Interval(1) - qi;
  std::optional<Rational> qr;
  if (q.radicand == 1) qr = q.coef;
  else {
    BigInt num = isqrt(q.radicand.get_num()), den = isqrt(q.radicand.get_den());
    if (num * num == q.radicand.get_num() && den * den == q.radicand.get_den()) qr = q.coef * Rational(num, den);
  }
  if (qr) qr->canonicalize();

  std::vector<Vertex> av = a.to_vector();
  const std::size_t sz = av.size();
  if (sz <= kRandomBExactMax) {
    res.successes_by_size.assign(sz + 1, BigInt(0));
    for (std::uint64_t mask = 0; mask < (1ULL << sz); ++mask) {
      VertexSet b;
      for (std::size_t i = 0; i < sz; ++i)
        if (mask >> i & 1) b.insert(av[i]);
      if (classify_pair(h, a, b, k, l, r, res.params).holds()) res.successes_by_size[b.size()] += 1;
    }
    Interval total(0);
    Rational total_q = 0;
    for (std::size_t s = 0; s <= sz; ++s) {
      if (res.successes_by_size[s] == 0) continue;
      Interval term(res.successes_by_size[s]);
      for (std::size_t i = 0; i < s; ++i) term = term * pi;
      for (std::size_t i = s; i < sz; ++i) term = term * qi;
      total = total + term;
      if (qr) total_q += Rational(res.successes_by_size[s]) * qpow(1 - *qr, s) * qpow(*qr, sz - s);
    }
    if (qr) {
      res.probability_q = total_q;
      res.probability = Interval(total_q);
    } else {
      res.probability = total;
    }
    return res;
  }
  if (mc_samples == 0) throw RefusalError("exact random-B summation refused above |A| = " + std::to_string(kRandomBExactMax) + "; give a sample count");
  res.exact = false;
  res.samples = mc_samples;
  Philox rng(seed);
  const double p_keep = pi.mid();
  for (std::uint64_t t = 0; t < mc_samples; ++t) {
    VertexSet b;
    for (Vertex v : av)
      if (rng.uniform01() < p_keep) b.insert(v);
    res.hits += classify_pair(h, a, b, k, l, r, res.params).holds();
  }
  auto [lo, hi] = wilson_interval(res.hits, mc_samples, 0.99);
  res.probability = Interval(Rational(lo), Rational(hi));
  return res;
}

// ---------------------------------------------------------------- degree classes

struct DegreePartition {
  VertexSet low, med, high;
  bool assumptions_hold = false;  // C >= 3, k >= 1000 C, k >= 4 log^10 k
};

namespace detail {

/// deg * log^2 k >= 10 C n, decided with certified intervals.
inline bool high_degree(std::size_t deg, std::size_t k, const Rational& C, std::size_t n) {
  Interval lg = Interval(from_u64(k)).log2();
  Interval lhs = Interval(from_u64(deg)) * lg * lg;
  Interval rhs = Interval(Rational(10) * C * from_u64(n));
  if (rhs.certainly_leq(lhs)) return true;
  if (lhs.certainly_lt(rhs)) return false;
  throw RefusalError("degree threshold undecided at working precision");
}

}  // namespace detail

inline DegreePartition degree_partition(const Hypergraph& g, std::size_t k, const Rational& C) {
  if (!g.is_graph() && g.num_edges() > 0) throw InputError("degree partition needs a graph");
  if (k < 2) throw InputError("degree partition needs k >= 2");
  DegreePartition d;
  const std::size_t n = g.n();
  const Rational low_cut = Rational(10) * C * from_u64(n) / from_u64(k);
  for (Vertex v = 0; v < n; ++v) {
    std::size_t deg = g.degree(v);
    if (Rational(from_u64(deg)) <= low_cut) d.low.insert(v);
    else if (detail::high_degree(deg, k, C, n)) d.high.insert(v);
    else d.med.insert(v);
  }
  Interval lg = Interval(from_u64(k)).log2();
  Interval lg10 = Interval(1);
  for (int i = 0; i < 10; ++i) lg10 = lg10 * lg;
  d.assumptions_hold = C >= 3 && Rational(from_u64(k)) >= 1000 * C && (Interval(4) * lg10).certainly_leq(Interval(from_u64(k)));
  return d;
}

/// e(A) = l, A meets V_high, and |deg_A(v) - (k-1)/n deg_G(v)| <= sqrt(k log k) for all v in A.
inline bool is_interesting(const Hypergraph& g, VertexSet a, std::size_t k, std::uint64_t l, const Rational& C) {
  if (a.size() != k) throw InputError("|A| must equal k");
  if (edges_within(g, a) != l) return false;
  DegreePartition d = degree_partition(g, k, C);
  if ((a & d.high).size() == 0) return false;
  Interval cap = Interval(from_u64(k)) * Interval(from_u64(k)).log2();
  auto prof = subset_profile(g, a);
  for (const auto& [v, dA] : prof.within_degrees) {
    Rational x = Rational(from_u64(dA)) - Rational(from_u64((k - 1) * g.degree(v)), from_u64(g.n()));
    Interval x2(x * x);
    if (cap.certainly_lt(x2)) return false;
    if (!x2.certainly_leq(cap)) throw RefusalError("interesting-set threshold undecided at working precision");
  }
  return true;
}

/// P[|A n X| = j] for a uniform k-subset A of an n-set and a fixed x-subset X.
inline Rational hypergeometric_pj(std::uint64_t n, std::uint64_t x, std::uint64_t k, std::uint64_t j) {
  if (k > n || x > n || j > k) throw InputError("hypergeometric_pj needs 0 <= j <= k <= n and x <= n");
  Rational q(binomial(k, j) * falling(x, j) * falling(n - x, k - j), falling(n, k));
  q.canonicalize();
  return q;
}

/// The whole pmf p_0..p_k, by the ratio p_{j+1}/p_j = (k-j)(x-j) / ((j+1)(n-x-k+j+1)).
inline std::vector<Rational> hypergeometric_pmf(std::uint64_t n, std::uint64_t x, std::uint64_t k) {
  if (k > n || x > n) throw InputError("hypergeometric_pmf needs k <= n and x <= n");
  std::vector<Rational> p(k + 1, Rational(0));
  // Smallest attainable j is max(0, k - (n - x)).
  const std::uint64_t j0 = k > n - x ? k - (n - x) : 0;
  p[j0] = hypergeometric_pj(n, x, k, j0);
  for (std::uint64_t j = j0; j < k && j < x; ++j) {
    p[j + 1] = p[j] * Rational(from_u64((k - j) * (x - j)), from_u64((j + 1) * (n - x - k + j + 1)));
    p[j + 1].canonicalize();
  }
  return p;
}

}  // namespace edgestat
