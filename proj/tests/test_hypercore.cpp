#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "edgestat/combinations.hpp"
#include "edgestat/exact.hpp"
#include "edgestat/hypergraph.hpp"
#include "edgestat/interval.hpp"
#include "edgestat/io.hpp"
#include "edgestat/rng.hpp"

using namespace edgestat;

namespace {

Hypergraph cycle(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 0; i < n; ++i) es.emplace_back(i, static_cast<Vertex>((i + 1) % n));
  return Hypergraph::graph(n, es);
}

Hypergraph path3() { return Hypergraph::graph(3, {{0, 1}, {1, 2}}); }

}  // namespace

TEST(VertexSet, BasicOps) {
  VertexSet a{1, 5, 100};
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(a.contains(100));
  EXPECT_EQ(a.lowest(), 1u);
  EXPECT_EQ(a.highest(), 100u);
  EXPECT_EQ(a.to_vector(), (std::vector<Vertex>{1, 5, 100}));
  EXPECT_TRUE(VertexSet({1, 5}).subset_of(a));
  EXPECT_EQ((a - VertexSet{5}).size(), 2u);
  EXPECT_EQ(VertexSet::prefix(128).size(), 128u);
  EXPECT_THROW(a.insert(128), InputError);
}

TEST(Hypergraph, InvariantsAndOrdering) {
  Hypergraph h(5, 3, {{2, 1, 0}, {4}, {3, 1}, {0, 1, 2}});
  ASSERT_EQ(h.num_edges(), 3u);  // duplicate removed
  EXPECT_EQ(std::vector<Vertex>(h.edge(0).begin(), h.edge(0).end()), std::vector<Vertex>{4});
  EXPECT_EQ(std::vector<Vertex>(h.edge(1).begin(), h.edge(1).end()), (std::vector<Vertex>{1, 3}));
  EXPECT_THROW(Hypergraph(3, 2, {{0, 1, 2}}), InputError);  // rank violation rejected
  EXPECT_THROW(Hypergraph(3, 2, {{}}), InputError);
  EXPECT_THROW(Hypergraph(3, 2, {{0, 3}}), InputError);
  EXPECT_THROW(Hypergraph(3, 2, {{1, 1}}), InputError);
}

TEST(Hypergraph, EdgesWithin) {
  Hypergraph k3 = Hypergraph::graph(3, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_EQ(edges_within(k3, VertexSet{0, 1, 2}), 3u);
  EXPECT_EQ(edges_within(path3(), VertexSet{0, 2}), 0u);
  EXPECT_EQ(edges_within(cycle(5), VertexSet{0, 1, 3}), 1u);
  EXPECT_THROW(edges_within(k3, VertexSet{0, 7}), InputError);
  std::vector<Vertex> w{0, 1, 3};
  EXPECT_EQ(edges_within_list(cycle(5), w), 1u);
}

TEST(Hypergraph, SubsetProfile) {
  Hypergraph k3 = Hypergraph::graph(3, {{0, 1}, {0, 2}, {1, 2}});
  auto p = subset_profile(k3, VertexSet{0, 1, 2});
  EXPECT_EQ(p.eA, 3u);
  EXPECT_EQ(p.mA, 3u);
  auto q = subset_profile(Hypergraph::graph(3, {{0, 1}}), VertexSet{0, 1, 2});
  EXPECT_EQ(q.eA, 1u);
  EXPECT_EQ(q.mA, 2u);
  EXPECT_EQ(q.within_degrees.at(2), 0u);
  Hypergraph h3(5, 3, {{0, 1, 2}, {2, 3, 4}});
  auto r = subset_profile(h3, VertexSet{0, 1, 2, 3, 4});
  EXPECT_EQ(r.eA, 2u);
  EXPECT_EQ(r.mA, 5u);
  std::size_t deg_sum = 0;
  for (auto [v, d] : r.within_degrees) deg_sum += d;
  EXPECT_EQ(deg_sum, 6u);
}

TEST(Hypergraph, NeighborhoodFamily) {
  auto fam = neighborhood_family(path3(), 1, VertexSet{0, 2});
  std::set<VertexSet> got(fam.begin(), fam.end());
  EXPECT_EQ(got, (std::set<VertexSet>{VertexSet{0}, VertexSet{2}}));
  Hypergraph iso(3, 2, {{0, 1}});
  EXPECT_TRUE(neighborhood_family(iso, 2, VertexSet{0, 1}).empty());
  Hypergraph h3(4, 3, {{0, 1, 2}});
  auto f3 = neighborhood_family(h3, 0, VertexSet{1, 2, 3});
  ASSERT_EQ(f3.size(), 1u);
  EXPECT_EQ(f3[0], (VertexSet{1, 2}));
  EXPECT_THROW(neighborhood_family(h3, 1, VertexSet{1, 2}), InputError);
}

TEST(Hypergraph, ConnectedTo) {
  Hypergraph e(2, 2, {{0, 1}});
  EXPECT_TRUE(is_connected_to(e, 0, VertexSet{1}));
  Hypergraph single(3, 2, {{2}});
  EXPECT_TRUE(is_connected_to(single, 2, VertexSet{}));
  EXPECT_TRUE(is_connected_to(single, 2, VertexSet{0, 1}));
  Hypergraph h3(3, 3, {{0, 1, 2}});
  EXPECT_FALSE(is_connected_to(h3, 0, VertexSet{1}));
  EXPECT_THROW(is_connected_to(h3, 1, VertexSet{1}), InputError);
}

TEST(Hypergraph, PairStats) {
  auto s = pair_stats(path3(), VertexSet{0, 1, 2}, VertexSet{1});
  EXPECT_EQ(s.h, 2u);
  EXPECT_EQ(s.m, 2u);
  EXPECT_EQ(s.f, 0u);
  auto t = pair_stats(path3(), VertexSet{0, 1, 2}, VertexSet{0, 1, 2});
  EXPECT_EQ(t.h + t.m + t.f, 0u);
  auto u = pair_stats(Hypergraph::graph(3, {{0, 1}}), VertexSet{0, 1, 2}, VertexSet{});
  EXPECT_EQ(u.m, 2u);
  EXPECT_EQ(u.h, 0u);
  EXPECT_EQ(u.f, 2u);
  EXPECT_THROW(pair_stats(path3(), VertexSet{0}, VertexSet{1}), InputError);
}

TEST(Hypergraph, PairStatsInvariantsOnAllSubsets) {
  Hypergraph h(6, 3, {{0, 1}, {1, 2, 3}, {3, 4}, {5}, {0, 4, 5}});
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = a;; b = (b - 1) & a) {
      auto s = pair_stats(h, VertexSet(a), VertexSet(b));
      auto prof = subset_profile(h, VertexSet(a));
      EXPECT_LE(s.h, s.m);
      EXPECT_LE(s.m, std::min(prof.mA, VertexSet(a - b).size()));
      if (b == 0) break;
    }
}

TEST(Hypergraph, ComplementAndRelabel) {
  Hypergraph c5 = cycle(5);
  Hypergraph comp = c5.complement();
  EXPECT_EQ(comp.num_edges(), 5u);
  EXPECT_EQ(comp.complement(), c5);
  Hypergraph r = c5.relabel({0, 2, 4, 1, 3});
  EXPECT_TRUE(r.has_edge({0, 2}));
  EXPECT_EQ(r, comp);  // C5 is self-complementary via this map
}

TEST(Hypergraph, LargeVertexCountUsesPackedKeys) {
  Hypergraph big(1000, 3, {{999, 5, 17}, {3, 4}});
  EXPECT_FALSE(big.bitmask());
  EXPECT_TRUE(big.has_edge({5, 17, 999}));
  std::vector<Vertex> w{4, 5, 17, 999};
  EXPECT_EQ(edges_within_list(big, w), 1u);
  EXPECT_THROW(edges_within(big, VertexSet{1}), InputError);
  EXPECT_THROW(Hypergraph(1000, 5, {}), InputError);
}

TEST(IO, RoundTrip) {
  Hypergraph h(6, 3, {{0, 1, 2}, {5}, {3, 4}});
  std::string text = format_hypergraph(h, {"construction: {\"kind\":\"x\"}"});
  EXPECT_EQ(parse_hypergraph(text), h);
  EXPECT_EQ(header_field(text, "construction").value(), "{\"kind\":\"x\"}");
  std::istringstream el("0 1\n# c\n1 2\n");
  EXPECT_EQ(parse_edge_list(el), path3());
}

TEST(IO, Rejections) {
  EXPECT_THROW(parse_hypergraph("3 2\n0 1 2\n"), InputError);
  EXPECT_THROW(parse_hypergraph("3 2\n0 x\n"), InputError);
  EXPECT_THROW(parse_hypergraph("# only comments\n"), InputError);
  EXPECT_THROW(parse_hypergraph("3 2\n0 5\n"), InputError);
  EXPECT_THROW(read_hypergraph_file("/nonexistent/file.txt"), InputError);
}

TEST(Exact, ParseRational) {
  EXPECT_EQ(parse_rational("0.05"), Rational(1, 20));
  EXPECT_EQ(parse_rational("1/20"), Rational(1, 20));
  EXPECT_EQ(parse_rational("-2.5e-1"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_THROW(parse_rational("1/0"), InputError);
}

TEST(Exact, EBracket) {
  EXPECT_LT(e_lower(), e_upper());
  EXPECT_LT(e_upper() - e_lower(), Rational(1, BigInt("1000000000000000000000000000000")));
  Interval e = Interval::e();
  EXPECT_TRUE(e.lower_geq(e_lower()));
  EXPECT_TRUE(e.upper_leq(e_upper()));
}

TEST(Exact, SqrtRationalComparisons) {
  SqrtRational half_sqrt3{Rational(1, 2), 3};  // 0.866...
  EXPECT_TRUE(half_sqrt3.leq(1));
  EXPECT_FALSE(half_sqrt3.geq(1));
  EXPECT_TRUE(half_sqrt3.geq(Rational(86, 100)));
  SqrtRational two{Rational(1, 2), 16};
  EXPECT_TRUE(two.leq(2));
  EXPECT_TRUE(two.geq(2));
}

TEST(Interval, OutwardRounding) {
  Interval third(Rational(1, 3));
  EXPECT_LT(third.lower_q(), Rational(1, 3));
  EXPECT_GT(third.upper_q(), Rational(1, 3));
  Interval x = Interval(2).sqrt() * Interval(2).sqrt();
  EXPECT_TRUE(x.lower_q() <= 2 && x.upper_q() >= 2);
  Interval p = Interval(16).pow(Rational(1, 4));
  EXPECT_TRUE(p.lower_q() <= 2 && p.upper_q() >= 2);
  EXPECT_NEAR(Interval(8).log2().mid(), 3.0, 1e-30);
}

TEST(Philox, KnownAnswerVectors) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}), (A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamsAndSampling) {
  Philox a(42, 0), b(42, 0), c(42, 1);
  std::uint64_t x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  Philox r(7);
  std::vector<int> hist(5, 0);
  for (int i = 0; i < 50000; ++i) ++hist[r.below(5)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
  for (int i = 0; i < 200; ++i) {
    auto s = r.k_subset(10, 4);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
    EXPECT_LT(s.back(), 10u);
  }
  int ones = 0;
  for (int i = 0; i < 30000; ++i) ones += r.bernoulli(Rational(1, 3));
  EXPECT_NEAR(ones, 10000, 400);
}

TEST(RevolvingDoor, VisitsEverySubsetOnceWithSingleSwaps) {
  for (unsigned n = 0; n <= 9; ++n)
    for (unsigned t = 0; t <= n; ++t) {
      RevolvingDoor door(n, t);
      std::set<std::vector<unsigned>> seen;
      auto cur = door.current();
      seen.insert(cur);
      std::set<unsigned> as_set(cur.begin(), cur.end());
      while (auto sw = door.next()) {
        ASSERT_TRUE(as_set.count(sw->out)) << n << " " << t;
        ASSERT_FALSE(as_set.count(sw->in)) << n << " " << t;
        as_set.erase(sw->out);
        as_set.insert(sw->in);
        auto now = door.current();
        ASSERT_EQ(std::vector<unsigned>(as_set.begin(), as_set.end()), now);
        ASSERT_TRUE(std::is_sorted(now.begin(), now.end()));
        ASSERT_LT(now.empty() ? 0 : now.back(), std::max(n, 1u));
        ASSERT_TRUE(seen.insert(now).second) << "repeat at n=" << n << " t=" << t;
      }
      EXPECT_EQ(seen.size(), to_u64(binomial(n, t))) << n << " " << t;
    }
}
