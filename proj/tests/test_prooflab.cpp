#include <gtest/gtest.h>

#include <bit>
#include <functional>

#include "edgestat/prooflab.hpp"

using namespace edgestat;

namespace {

Hypergraph edge_plus_isolated(std::size_t n) { return Hypergraph::graph(n, {{0, 1}}); }

Hypergraph path(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return Hypergraph::graph(n, es);
}

Hypergraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  Philox rng(seed);
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) es.emplace_back(i, j);
  return Hypergraph::graph(n, es);
}

// Brute-force reading of the definitions over plain edge lists and uint masks.
struct BruteRho {
  std::size_t n, k;
  std::uint64_t l;
  std::vector<unsigned> edges;

  BruteRho(const Hypergraph& h, std::size_t k_, std::uint64_t l_) : n(h.n()), k(k_), l(l_) {
    for (const auto& e : h.edge_lists()) {
      unsigned m = 0;
      for (Vertex v : e) m |= 1u << v;
      edges.push_back(m);
    }
  }
  std::uint64_t e_of(unsigned s) const {
    std::uint64_t c = 0;
    for (unsigned e : edges) c += (e & s) == e;
    return c;
  }
  unsigned ni_of(unsigned s) const {
    unsigned out = 0;
    for (unsigned e : edges)
      if ((e & s) == e) out |= e;
    return out;
  }
  bool good(std::vector<unsigned>& seq) const {
    unsigned s = 0;
    for (unsigned v : seq) s |= 1u << v;
    if (seq.size() == k) return e_of(s) == l && (ni_of(s) >> seq.back() & 1);
    for (unsigned v = 0; v < n; ++v) {
      if (s >> v & 1) continue;
      seq.push_back(v);
      bool ok = good(seq);
      seq.pop_back();
      if (ok) return true;
    }
    return false;
  }
  Rational lam(std::vector<unsigned>& seq) const {
    if (seq.size() < k) return 1;
    unsigned s = 0;
    for (unsigned v : seq) s |= 1u << v;
    return Rational(1, std::popcount(ni_of(s)));
  }
  Rational Lam(std::vector<unsigned>& seq) const {
    Rational t = 0;
    unsigned s = 0;
    for (unsigned v : seq) s |= 1u << v;
    for (unsigned v = 0; v < n; ++v) {
      if (s >> v & 1) continue;
      seq.push_back(v);
      if (good(seq)) t += lam(seq);
      seq.pop_back();
    }
    return t;
  }
  Rational rho(const std::vector<unsigned>& seq) const {
    Rational r = 1;
    std::vector<unsigned> pre;
    for (unsigned v : seq) {
      Rational big = Lam(pre);
      pre.push_back(v);
      r *= lam(pre) / big;
    }
    return r;
  }
  Rational sum(std::size_t j) const {
    Rational t = 0;
    std::vector<unsigned> seq;
    std::function<void()> go = [&] {
      if (seq.size() == j) {
        if (good(seq)) t += rho(seq);
        return;
      }
      for (unsigned v = 0; v < n; ++v) {
        if (std::find(seq.begin(), seq.end(), v) != seq.end()) continue;
        seq.push_back(v);
        go();
        seq.pop_back();
      }
    };
    go();
    return t;
  }
};

VertexSet set_of(std::initializer_list<Vertex> vs) { return VertexSet::of(std::vector<Vertex>(vs)); }

}  // namespace

TEST(GoodSequence, HandExamples) {
  Hypergraph g = edge_plus_isolated(3);
  EXPECT_TRUE(is_good_sequence(g, 3, 1, {2, 0, 1}));
  EXPECT_FALSE(is_good_sequence(g, 3, 1, {0, 1, 2}));
  EXPECT_TRUE(is_good_sequence(g, 3, 1, {0}));
  EXPECT_FALSE(is_good_sequence(g, 3, 1, {0, 1}));  // both non-isolated vertices used up
  EXPECT_TRUE(is_good_sequence(g, 3, 1, {}));
  EXPECT_FALSE(is_good_sequence(g, 3, 0, {}));
  EXPECT_FALSE(is_good_sequence(Hypergraph(3, 2, {}), 3, 1, {}));
  EXPECT_THROW(is_good_sequence(g, 3, 1, {0, 0}), InputError);
  EXPECT_THROW(rho_sums(g, 3, 0), EmptyDomainError);
}

TEST(Rho, HandValuesOnEdgePlusIsolated) {
  Hypergraph g = edge_plus_isolated(3);
  GoodSequences gs(g, 3, 1);
  EXPECT_EQ(gs.Lambda(VertexSet()), 3);
  EXPECT_EQ(gs.Lambda(set_of({0})), 1);
  EXPECT_EQ(gs.Lambda(set_of({2})), 2);
  EXPECT_EQ(gs.Lambda(set_of({0, 2})), Rational(1, 2));
  EXPECT_EQ(gs.rho({2, 0, 1}), Rational(1, 6));
  EXPECT_EQ(gs.rho({0, 2, 1}), Rational(1, 3));
  for (std::size_t j = 1; j <= 3; ++j) EXPECT_EQ(rho_sum_check(g, 3, 1, j), 1);
}

TEST(Rho, SumsToOneAndMatchesBruteForce) {
  for (std::size_t j = 1; j <= 3; ++j) EXPECT_EQ(rho_sum_check(path(4), 3, 1, j), 1);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    std::size_t n = 4 + seed % 2;
    Hypergraph g = random_graph(n, 0.5, seed);
    for (std::size_t k = 1; k <= n; ++k)
      for (std::uint64_t l = 1; l <= k * (k - 1) / 2; ++l) {
        GoodSequences gs(g, k, l);
        if (!gs.any()) continue;
        auto sums = rho_sums(g, k, l);
        BruteRho brute(g, k, l);
        for (std::size_t j = 1; j <= k; ++j) {
          EXPECT_EQ(sums[j - 1], 1);
          EXPECT_EQ(brute.sum(j), sums[j - 1]);
        }
      }
  }
}

TEST(Rho, HypergraphSums) {
  Hypergraph h(6, 3, {{0, 1, 2}, {2, 3}, {3, 4, 5}, {1, 4}, {5}});
  for (std::size_t k = 1; k <= 6; ++k)
    for (std::uint64_t l = 1; l <= 5; ++l) {
      if (!GoodSequences(h, k, l).any()) continue;
      for (const auto& s : rho_sums(h, k, l)) EXPECT_EQ(s, 1);
    }
}

TEST(Rho, Ceiling) { EXPECT_THROW(rho_sums(Hypergraph(9, 2, {{0, 1}}), 3, 1), RefusalError); }

TEST(PerSetBound, EdgePlusIsolated) {
  Hypergraph g = edge_plus_isolated(4);
  auto res = per_set_rho_bound(g, set_of({0, 1, 2}), 1, 3, 1, 2);
  EXPECT_TRUE(res.pass);
  EXPECT_TRUE(res.decided);
  EXPECT_EQ(res.Lambda_last, res.C_times_n);
  EXPECT_TRUE(res.labeling_independent);
  EXPECT_THROW(per_set_rho_bound(g, set_of({0, 1, 2}), 2, 3, 1, 2), InapplicableError);  // v_k isolated
  EXPECT_THROW(per_set_rho_bound(g, set_of({0, 2, 3}), 0, 3, 1, 2), InapplicableError);  // e(A) = 0
  EXPECT_THROW(per_set_rho_bound(g, set_of({0, 1}), 1, 2, 1, 2), InapplicableError);     // r l = k
}

TEST(PerSetBound, LhsMatchesDirectRhoWhenNEqualsK) {
  Hypergraph g = path(5);
  VertexSet a = g.vertices();
  GoodSequences gs(g, 5, 4);
  // l = 4 is not below k/r = 2.5, so build the lhs for l = 2 on a subgraph instead.
  Hypergraph h = Hypergraph::graph(5, {{0, 1}, {2, 3}});
  GoodSequences hs(h, 5, 2);
  auto res = per_set_rho_bound(h, a, 3, 5, 2, 2);
  std::vector<Vertex> rest = {0, 1, 2, 4};
  Rational direct = 0;
  do {
    std::vector<Vertex> seq = rest;
    seq.push_back(3);
    direct += hs.rho(seq);
  } while (std::next_permutation(rest.begin(), rest.end()));
  EXPECT_EQ(res.lhs, direct);
  EXPECT_TRUE(res.pass);
}

TEST(PerSetBound, RandomGraphsAndFamilies) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Hypergraph g = random_graph(6, 0.35, seed);
    for (std::size_t k = 3; k <= 5; ++k)
      for (std::uint64_t l = 1; 2 * l < k; ++l)
        detail::for_each_subset(g.vertices(), k, [&](VertexSet a) {
          if (edges_within(g, a) != l) return;
          nonisolated_within(g, a).for_each([&](Vertex vk) {
            auto res = per_set_rho_bound(g, a, vk, k, l, 2);
            EXPECT_TRUE(res.pass);
            EXPECT_EQ(res.Lambda_last, res.C_times_n);
            EXPECT_TRUE(res.labeling_independent);
          });
        });
  }
}

TEST(Classify, Conditions) {
  Hypergraph g = edge_plus_isolated(6);
  VertexSet a = set_of({0, 1, 2, 3});
  auto eps = FlavorParams::pleasant(Rational(1, 10));
  // B = both endpoints: nothing outside B is connected to B, f = 0.
  auto c = classify_pair(g, a, set_of({0, 1}), 4, 1, 2, eps);
  EXPECT_EQ(c.stats.h, 0u);
  EXPECT_EQ(c.stats.f, 0u);
  EXPECT_TRUE(c.cond[0]);
  EXPECT_TRUE(c.cond[1]);
  EXPECT_FALSE(c.cond[2]);
  EXPECT_TRUE(c.cond[3]);
  // B = {0}: vertex 1 is connected, 2 and 3 isolated; threshold (1/40) sqrt(2) < 1.
  auto d = classify_pair(g, a, set_of({0}), 4, 1, 2, eps);
  EXPECT_EQ(d.stats.h, 1u);
  EXPECT_TRUE(d.holds());
  EXPECT_EQ(d.verdict(PairFlavor::pleasant), "pleasant");
  // B = A gives h = 0.
  EXPECT_FALSE(classify_pair(g, a, a, 4, 1, 2, eps).cond[2]);
  // e(A) != l fails (i).
  EXPECT_FALSE(classify_pair(g, a, set_of({0}), 4, 2, 2, eps).cond[0]);
  // Nice with z = 1: (ii) needs 1 <= h <= sqrt(4)/2 = 1; (iv) needs |A \ B| >= 2.
  auto z = FlavorParams::nice(SqrtRational::rational(1));
  auto n1 = classify_pair(g, a, set_of({0}), 4, 1, 2, z);
  EXPECT_TRUE(n1.holds());
  auto n2 = classify_pair(g, a, set_of({0, 1, 2}), 4, 1, 2, z);
  EXPECT_FALSE(n2.cond[1]);
  EXPECT_FALSE(n2.cond[3]);
  EXPECT_THROW(classify_pair(g, set_of({0}), set_of({1}), 4, 1, 2, eps), InputError);
  EXPECT_THROW(FlavorParams::pleasant(Rational(1, 2)), InputError);
}

TEST(Classify, PleasantThresholdIsExact) {
  // eps sqrt(k) / (4 sqrt(r)) = 1 exactly for eps = 2/5, k = 200, r = 2.
  SqrtRational t = pleasant_threshold(200, 2, Rational(2, 5));
  EXPECT_TRUE(t.leq(1));
  EXPECT_TRUE(t.geq(1));
  EXPECT_EQ(tame_s(15), 1u);
  EXPECT_EQ(tame_s(16), 2u);
}

TEST(Partners, CountsAndBounds) {
  Hypergraph g = edge_plus_isolated(6);
  auto eps = FlavorParams::pleasant(Rational(1, 10));
  auto none = count_partner_sets(g, set_of({2}), 4, 1, 2, eps);
  EXPECT_EQ(none.count, 0);
  EXPECT_TRUE(none.pass);
  // B = {0}: partners are {0,1,x,y} for x,y in {2..5}: C(4,2) = 6.
  auto six = count_partner_sets(g, set_of({0}), 4, 1, 2, eps);
  EXPECT_EQ(six.count, 6);
  EXPECT_TRUE(six.pass);
  EXPECT_TRUE(bound_lemma_B_pleasant(2, 4, Rational(1, 20)).lower_gt(bound_lemma_B_pleasant(2, 4, Rational(1, 10)).upper_q()));
}

TEST(Sequences, TidyAndTame) {
  Hypergraph g = edge_plus_isolated(6);
  VertexSet b = set_of({0});
  Rational eps(1, 10);
  EXPECT_TRUE(is_tidy(g, b, {1, 2, 3}, 4, 1, 2, eps));
  EXPECT_EQ(*sequence_index(g, b, {1, 2, 3}, 4, 1, 2, FlavorParams::pleasant(eps)), 1u);
  EXPECT_FALSE(is_tidy(g, b, {2, 1, 3}, 4, 1, 2, eps));  // connected vertex after an unconnected one
  EXPECT_FALSE(is_tidy(g, b, {1, 2}, 3, 2, 2, eps));    // e = 1 != l
  EXPECT_THROW(is_tidy(g, b, {1, 2}, 4, 1, 2, eps), InputError);
  EXPECT_THROW(is_tidy(g, b, {1, 1, 2}, 4, 1, 2, eps), InputError);
  EXPECT_THROW(is_tidy(g, b, {0, 1, 2}, 4, 1, 2, eps), InputError);
  // Tame with k = 4: s = 1, a = 3 >= 2. Layout: a - s = 2 unconnected, then the connected vertex.
  SqrtRational z = SqrtRational::rational(1);
  EXPECT_TRUE(is_tame(g, b, {2, 3, 1}, 4, 1, 2, z));
  EXPECT_FALSE(is_tame(g, b, {1, 2, 3}, 4, 1, 2, z));
  EXPECT_THROW(is_tame(g, set_of({0, 2, 3}), {1}, 4, 1, 2, z), InapplicableError);  // a = 1 < 2s
}

TEST(ProcedureTree, EdgeWithOneEndpointInB) {
  Hypergraph g = edge_plus_isolated(4);
  auto p = FlavorParams::pleasant(Rational(1, 10));
  auto tree = procedure_tree(g, set_of({0}), 3, 1, 2, p);
  ASSERT_EQ(tree.leaves.size(), 2u);
  EXPECT_EQ(tree.leaves[0].seq, (std::vector<Vertex>{1, 2}));
  EXPECT_EQ(tree.leaves[0].prob, Rational(1, 2));
  EXPECT_EQ(tree.leaves[1].prob, Rational(1, 2));
  EXPECT_EQ(leaf_floor(2, 1, 4), Rational(1, 4));
  for (const auto& leaf : tree.leaves) EXPECT_GE(leaf.prob, leaf_floor(2, leaf.h, 4));
  EXPECT_THROW(procedure_tree(g, set_of({2}), 3, 1, 2, p), EmptyDomainError);
  EXPECT_THROW(procedure_tree(Hypergraph(11, 2, {{0, 1}}), set_of({0}), 3, 1, 2, p), RefusalError);
}

TEST(ProcedureTree, LeavesAreAllGoodSequencesAndSumToOne) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Hypergraph g = random_graph(7, 0.3, seed);
    for (unsigned bmask = 1; bmask < 8; ++bmask) {
      VertexSet b(bmask);
      for (auto p : {FlavorParams::pleasant(Rational(1, 20)), FlavorParams::nice(SqrtRational::rational(Rational(1, 2)))}) {
        const std::size_t k = 6;
        for (std::uint64_t l = 1; l <= 4; ++l) {
          std::optional<ProcedureTree> tree;
          try {
            tree = procedure_tree(g, b, k, l, 2, p);
          } catch (const EmptyDomainError&) {
            continue;
          } catch (const InapplicableError&) {
            continue;
          }
          Rational mass = 0;
          for (const auto& leaf : tree->leaves) {
            mass += leaf.prob;
            EXPECT_TRUE(sequence_index(g, b, leaf.seq, k, l, 2, p).has_value());
          }
          EXPECT_EQ(mass, 1);
          // Brute force: every good sequence appears as a leaf.
          std::size_t brute = 0;
          detail::for_each_subset(g.vertices() - b, k - b.size(), [&](VertexSet t) {
            brute += count_good_labelings(g, b | t, b, k, l, 2, p);
          });
          EXPECT_EQ(brute, tree->leaves.size());
        }
      }
    }
  }
}

TEST(Machinery, RandomSmallGraphs) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Hypergraph g = random_graph(6, 0.3, seed);
    for (std::size_t k = 2; k <= 6; ++k)
      for (std::uint64_t l = 1; l <= 3; ++l)
        for (unsigned bmask = 0; bmask < 64; bmask += 5) {
          VertexSet b(bmask);
          if (b.size() > k) continue;
          for (auto p : {FlavorParams::pleasant(Rational(1, 20)), FlavorParams::nice(SqrtRational::rational(Rational(1, 5)))}) {
            auto rep = check_partner_machinery(g, b, k, l, 2, p);
            EXPECT_TRUE(rep.ok()) << seed << " k" << k << " l" << l << " B" << b.to_string() << " " << p.describe();
          }
        }
  }
}

TEST(RandomB, ExactSmallInstances) {
  Hypergraph g = random_graph(10, 0.2, 4);
  VertexSet a = g.vertices();
  std::uint64_t l = edges_within(g, a);
  auto res = random_B_success(g, a, 10, l, 2, RandomBLemma::nice_small_c, Rational(1));
  EXPECT_TRUE(res.exact);
  EXPECT_TRUE(res.probability_q.has_value());  // p = 1 - 1/16
  EXPECT_FALSE(res.side_conditions_ok);
  BigInt total = 0;
  for (const auto& s : res.successes_by_size) total += s;
  EXPECT_LE(total, BigInt(1024));
  EXPECT_GE(*res.probability_q, 0);
  EXPECT_LE(*res.probability_q, 1);
  // e(A) != l: nothing succeeds.
  auto zero = random_B_success(g, a, 10, l + 1, 2, RandomBLemma::pleasant_eps, Rational(1, 4));
  EXPECT_FALSE(zero.hypothesis_ok);
  EXPECT_TRUE(zero.probability.upper_leq(0));
  // Irrational p = 1 - 1/(2 sqrt(20)).
  auto irr = random_B_success(g, a, 10, l, 2, RandomBLemma::pleasant_eps, Rational(1, 4));
  EXPECT_FALSE(irr.probability_q.has_value());
  EXPECT_LT(irr.probability.upper() - irr.probability.lower(), 1e-15);
  // q = sqrt(k)/(16 r c) > 1 for tiny c: p is not a probability.
  auto bad = random_B_success(g, a, 10, l, 2, RandomBLemma::nice_large_c, Rational(1, 100));
  EXPECT_FALSE(bad.p_valid);
  EXPECT_FALSE(bad.applicable());
}

TEST(RandomB, BySizeMatchesDirectClassification) {
  Hypergraph g = random_graph(8, 0.3, 9);
  VertexSet a = g.vertices();
  std::uint64_t l = edges_within(g, a);
  auto res = random_B_success(g, a, 8, l, 2, RandomBLemma::nice_small_c, Rational(1, 2));
  std::vector<BigInt> want(9, BigInt(0));
  for (unsigned mask = 0; mask < 256; ++mask)
    if (classify_pair(g, a, VertexSet(mask), 8, l, 2, FlavorParams::nice(SqrtRational::rational(Rational(1, 128)))).holds())
      want[std::popcount(mask)] += 1;
  EXPECT_EQ(res.successes_by_size, want);
}

TEST(Degree, PartitionAndInteresting) {
  // Cycle on 40 vertices: degree 2 <= 10*3*40/k for k <= 600.
  std::vector<std::pair<Vertex, Vertex>> cyc;
  for (Vertex i = 0; i < 40; ++i) cyc.emplace_back(i, (i + 1) % 40);
  auto d = degree_partition(Hypergraph::graph(40, cyc), 100, Rational(3));
  EXPECT_EQ(d.low.size(), 40u);
  EXPECT_FALSE(d.assumptions_hold);
  // Star K_{1,119}, k = 1024, C = 1: low cut 1200/1024 ~ 1.17, high cut 1200/100 = 12.
  std::vector<std::pair<Vertex, Vertex>> star;
  for (Vertex i = 1; i < 120; ++i) star.emplace_back(0, i);
  Hypergraph s = Hypergraph::graph(120, star);
  auto ds = degree_partition(s, 1024, Rational(1));
  EXPECT_TRUE(ds.high.contains(0));
  EXPECT_EQ(ds.low.size(), 119u);
  // Boundary: deg exactly 10 C n / k is low (closed inequality). n = 20, k = 100, C = 1 -> cut 2.
  std::vector<std::pair<Vertex, Vertex>> c20;
  for (Vertex i = 0; i < 20; ++i) c20.emplace_back(i, (i + 1) % 20);
  EXPECT_EQ(degree_partition(Hypergraph::graph(20, c20), 100, Rational(1)).low.size(), 20u);
  // Interesting: e(A) != l fails; A inside V_low fails.
  VertexSet a = set_of({1, 2, 3, 4});
  EXPECT_FALSE(is_interesting(s, a, 4, 1, Rational(1)));
  EXPECT_FALSE(is_interesting(s, a, 4, 0, Rational(1)));
}

TEST(Degree, InterestingHub) {
  // Hub 0 joined to 1..30 in a 60-vertex graph; k = 4, C = 1/100: high cut 10*(1/100)*60/4 = 1.5.
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 1; i <= 30; ++i) es.emplace_back(0, i);
  Hypergraph g = Hypergraph::graph(60, es);
  VertexSet a = set_of({0, 1, 40, 41});
  // deg_A(0) = 1 vs (3/60) 30 = 1.5; every deviation is tiny against sqrt(4 * 2) ~ 2.83.
  EXPECT_TRUE(is_interesting(g, a, 4, 1, Rational(1, 100)));
  EXPECT_FALSE(is_interesting(g, set_of({40, 41, 42, 43}), 4, 0, Rational(1, 100)));
}

TEST(Hypergeometric, Values) {
  EXPECT_EQ(hypergeometric_pj(50, 0, 10, 0), 1);
  EXPECT_EQ(hypergeometric_pj(50, 0, 10, 3), 0);
  EXPECT_EQ(hypergeometric_pj(100, 1, 10, 1), Rational(1, 10));
  for (std::uint64_t x : {0, 1, 7, 33, 60}) {
    Rational total = 0;
    for (std::uint64_t j = 0; j <= 20; ++j) total += hypergeometric_pj(60, x, 20, j);
    EXPECT_EQ(total, 1);
  }
  EXPECT_THROW(hypergeometric_pj(10, 11, 5, 1), InputError);
  EXPECT_THROW(hypergeometric_pj(10, 3, 5, 6), InputError);
}

TEST(Hypergeometric, PmfMatchesPointwise) {
  for (auto [n, x, k] : std::vector<std::array<std::uint64_t, 3>>{{60, 0, 20}, {60, 7, 20}, {60, 50, 20}, {20, 20, 20}, {30, 29, 5}}) {
    auto pmf = hypergeometric_pmf(n, x, k);
    Rational total = 0;
    for (std::uint64_t j = 0; j <= k; ++j) {
      EXPECT_EQ(pmf[j], hypergeometric_pj(n, x, k, j)) << n << " " << x << " " << k << " " << j;
      total += pmf[j];
    }
    EXPECT_EQ(total, 1);
  }
}
