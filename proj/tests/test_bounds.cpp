#include <gtest/gtest.h>

#include <cmath>

#include "edgestat/bounds.hpp"

using namespace edgestat;

namespace {

const double kE = std::exp(1.0);

Hypergraph path3() { return Hypergraph::graph(3, {{0, 1}, {1, 2}}); }

Hypergraph complete(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) es.emplace_back(i, j);
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

// Interval must be tight and contain the double reference.
void expect_near(const Interval& v, double want, double tol = 1e-9) {
  EXPECT_LE(v.lower(), want + tol);
  EXPECT_GE(v.upper(), want - tol);
  EXPECT_LT(v.upper() - v.lower(), 1e-30 + tol);
}

}  // namespace

TEST(HyperOneOverE, Values) {
  expect_near(bound_thm_hyper_1e(2, 10, 1), 1.25 / kE);
  EXPECT_NEAR(bound_thm_hyper_1e(2, 10, 1).mid(), 0.4598493, 1e-7);
  Interval big = bound_thm_hyper_1e(3, 10, 3);
  EXPECT_NEAR(big.mid(), 3.6788, 1e-4);
  EXPECT_TRUE(vacuous_probability(big));
  EXPECT_FALSE(vacuous_probability(bound_thm_hyper_1e(2, 10, 1)));
  EXPECT_THROW(bound_thm_hyper_1e(2, 10, 5), InapplicableError);
  EXPECT_THROW(bound_thm_hyper_1e(2, 10, 0), InapplicableError);
  // Tends to 1/e as k grows.
  EXPECT_NEAR(bound_thm_hyper_1e(2, 1000000, 1).mid(), 1 / kE, 1e-5);
}

TEST(GraphO1, RegimesAndCrossover) {
  // k = 2^16: log^4 k = k, so l = 1 sits exactly on the boundary and both branches give 90.
  EXPECT_EQ(graph_o1_regime(65536, 1), GraphO1Regime::small_l);
  expect_near(bound_thm_graph_o1(65536, 1, Rational(1, 2)), 90.0);
  expect_near(graph_o1_large_formula(65536), 90.0);
  EXPECT_TRUE(vacuous_probability(bound_thm_graph_o1(65536, 1, Rational(1, 2))));
  // k = 2^20: boundary k/log^4 k = 2^20/20^4 = 6.5536.
  EXPECT_EQ(graph_o1_regime(1 << 20, 6), GraphO1Regime::small_l);
  EXPECT_EQ(graph_o1_regime(1 << 20, 7), GraphO1Regime::large_l);
  expect_near(graph_o1_small_formula(1 << 10), 90 * std::pow(2.0, -2.5));
  EXPECT_NEAR(graph_o1_small_formula(1 << 10).mid(), 15.91, 5e-3);
  // l = 2^10 is far above the boundary, so the large-l branch 90 * 20 / 32 applies.
  expect_near(bound_thm_graph_o1(1 << 20, 1 << 10, Rational(1, 2)), 56.25);
  EXPECT_THROW(bound_thm_graph_o1(100, 50, Rational(1, 10)), InapplicableError);
  EXPECT_THROW(bound_thm_graph_o1(100, 0, Rational(1, 10)), InapplicableError);
}

TEST(GraphO1, BranchIdsRespectRegime) {
  BoundSpec s{BoundId::thm_graph_o1_small, 2, 1 << 20, 1 << 10, {}, {}, Rational(1, 2), {}, {}, false};
  EXPECT_THROW(evaluate_bound(s), InapplicableError);
  s.id = BoundId::thm_graph_o1_large;
  expect_near(evaluate_bound(s), 56.25);
  EXPECT_TRUE(requires_large_k(s.id));
}

TEST(HyperO1, Values) {
  expect_near(bound_thm_hyper_o1(3, 10000000, 1000000, Rational(1, 2)), 10.0, 1e-9);
  expect_near(bound_thm_hyper_o1(3, 30, 1, Rational(1, 2)), 100.0);
  EXPECT_THROW(bound_thm_hyper_o1(2, 30, 1, Rational(1, 2)), InapplicableError);
  EXPECT_THROW(bound_thm_hyper_o1(3, 30, 9, Rational(1, 2)), InapplicableError);
}

TEST(Forest, Applicability) {
  expect_near(bound_thm_forest(16, 1), 50.0);
  EXPECT_THROW(bound_thm_forest(15, 1), InapplicableError);
  EXPECT_THROW(bound_thm_forest(63, 2), InapplicableError);
  expect_near(bound_thm_forest(64, 2), 50 / std::sqrt(2.0));
  auto rep = check_forest_bound(path3(), 15, 1);
  EXPECT_EQ(rep.verdict(), "inapplicable");
  EXPECT_EQ(check_forest_bound(Hypergraph(20, 2, {}), 16, 1).verdict(), "vacuous");
}

TEST(Propo, Formulas) {
  expect_near(bound_propo1(2, 10, Rational(1)), 32 * std::sqrt(2.0));
  EXPECT_THROW(bound_propo1(2, 4, Rational(1)), InapplicableError);  // c must be < sqrt(k)/2
  expect_near(bound_propo2(2, 6400, Rational(40)), 44 * std::sqrt(2.0) / std::pow(6400.0, 0.25));
  EXPECT_THROW(bound_propo2(2, 6400, Rational(39)), InapplicableError);
  EXPECT_THROW(bound_propo2(2, 6400, Rational(101)), InapplicableError);
  expect_near(bound_propo3(2, 5, Rational(3, 10)), 8 * std::pow(2.0, 0.25) / std::sqrt(0.3) / std::pow(5.0, 0.25));
  EXPECT_THROW(bound_propo3(2, 5, Rational(1, 2)), InapplicableError);
  EXPECT_THROW(bound_coro_o1(2, 100, Rational(1), Rational(1, 4), false), InapplicableError);
  expect_near(bound_coro_o1(2, 256, Rational(2), Rational(1, 4), true), 32.0 + 23 * std::sqrt(2.0) * 8 / 4);
}

TEST(Phi, ValuesAndGrid) {
  EXPECT_EQ(phi(0.0, 10, 2, 1), 0.0);
  EXPECT_NEAR(phi(0.125, 10, 2, 1), 1 / (8 * kE), 1e-15);
  EXPECT_NEAR(phi_max(10, 2, 1), 0.0459849, 1e-7);
  expect_near(phi_max_interval(10, 2, 1), 1 / (8 * kE), 1e-15);
  EXPECT_THROW(phi(0.1, 4, 2, 2), InputError);
  EXPECT_THROW(phi_max(4, 2, 2), InputError);
  for (std::uint64_t K = 1; K <= 50; ++K)
    for (int i = 0; i <= 10000; ++i) EXPECT_LE(phi(i * 1e-3, K, 1, 0), phi_max(K, 1, 0) + 1e-12);
}

TEST(Lemmas, PartnerCoefficients) {
  expect_near(bound_lemma_B_pleasant(2, 16, Rational(1, 4)), 2 * std::pow(2.0, 0.25) * 2 / 2);
  expect_near(bound_lemma_B_nice(SqrtRational{Rational(1, 2), 4}), 4.0 / 3);
  expect_near(bound_lemma_B_nice(SqrtRational{Rational(1), 2}), 4.0 / 3 / std::pow(2.0, 0.25));
  EXPECT_THROW(bound_lemma_B_nice(SqrtRational{Rational(0), 2}), InapplicableError);
}

TEST(Monotone, Grid) {
  for (unsigned r = 2; r <= 4; ++r)
    for (std::uint64_t k = 10; k <= 40; k += 5) {
      for (std::uint64_t l = 1; r * (l + 1) < k; ++l)
        EXPECT_TRUE(bound_thm_hyper_1e(r, k, l).certainly_lt(bound_thm_hyper_1e(r, k, l + 1)));
      for (std::uint64_t l = 1; r * l < k; ++l)
        EXPECT_TRUE(bound_thm_hyper_1e(r, k + 1, l).certainly_lt(bound_thm_hyper_1e(r, k, l)));
      EXPECT_TRUE(bound_propo3(r, k + 1, Rational(1, 4)).certainly_lt(bound_propo3(r, k, Rational(1, 4))));
      EXPECT_TRUE(bound_propo3(r, k, Rational(1, 3)).certainly_lt(bound_propo3(r, k, Rational(1, 4))));
      EXPECT_TRUE(bound_propo1(r, k, Rational(3, 2)).certainly_lt(bound_propo1(r, k, Rational(1))));
      EXPECT_TRUE(bound_propo1(r, k, Rational(1)).certainly_lt(bound_propo1(r + 1, k, Rational(1))));
      EXPECT_TRUE(bound_lemma_B_pleasant(r, k, Rational(1, 2)).certainly_lt(bound_lemma_B_pleasant(r, k, Rational(1, 4))));
    }
  for (std::uint64_t l = 1; l < 50; ++l) {
    EXPECT_TRUE(bound_thm_forest(100000, l + 1).certainly_lt(bound_thm_forest(100000, l)));
    EXPECT_TRUE(bound_thm_hyper_o1(3, 1000, l + 1, Rational(1, 2)).certainly_lt(bound_thm_hyper_o1(3, 1000, l, Rational(1, 2))));
    EXPECT_TRUE(graph_o1_small_formula(l + 1).certainly_lt(graph_o1_small_formula(l)));
  }
  for (std::uint64_t k = 4096; k < 4200; ++k)
    EXPECT_TRUE(bound_propo2(2, k + 1, Rational(40)).certainly_lt(bound_propo2(2, k, Rational(40))));
}

TEST(CountChecks, TrivialCases) {
  BoundSpec p1{BoundId::propo1, 2, 3, 1, Rational(1), {}, {}, {}, {}, false};
  // c = 1 exceeds sqrt(3)/2, so the hypothesis itself fails.
  EXPECT_EQ(check_count_bound(path3(), p1).verdict(), "inapplicable");
  // Window [c, sqrt(k)/2] with c = 3/4 < sqrt(3)/2 holds no integer m: observed 0.
  p1.c = Rational(3, 4);
  auto rep = check_count_bound(path3(), p1);
  ASSERT_TRUE(rep.applicable);
  EXPECT_EQ(rep.observed, 0);
  EXPECT_TRUE(rep.pass);

  BoundSpec p3{BoundId::propo3, 2, 4, 1, {}, {}, Rational(1, 4), {}, {}, false};
  auto empty = check_count_bound(Hypergraph(8, 2, {}), p3);
  EXPECT_EQ(empty.observed, 0);
  EXPECT_TRUE(empty.pass);

  // Complete graphs have no 4-set with one edge.
  auto kn = check_thm_hyper_1e_counts(complete(8), 4, 1, 2);
  EXPECT_EQ(kn.observed, 0);
  EXPECT_TRUE(kn.pass);
  EXPECT_EQ(check_thm_hyper_1e_counts(path3(), 2, 1, 2).verdict(), "inapplicable");
  // Edges bigger than r make the statement inapplicable.
  EXPECT_EQ(check_thm_hyper_1e_counts(Hypergraph(5, 3, {{0, 1, 2}}), 4, 1, 2).verdict(), "inapplicable");

  BoundSpec coro{BoundId::coro_o1, 2, 6, 1, {}, Rational(1), Rational(1, 4), {}, {}, false};
  EXPECT_EQ(check_count_bound(complete(8), coro).verdict(), "inapplicable");
  coro.assume_large_k = true;
  EXPECT_TRUE(check_count_bound(complete(8), coro).applicable);
}

TEST(CountChecks, ObservedMatchesWindowCount) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Hypergraph g = random_graph(7, 0.3 + 0.01 * static_cast<double>(seed), seed);
    auto d = exact_joint_distribution(g, 5);
    BoundSpec s{BoundId::propo3, 2, 5, 2, {}, {}, Rational(3, 10), {}, {}, false};
    auto rep = check_count_bound(d, 2, s);
    ASSERT_TRUE(rep.applicable);
    EXPECT_EQ(rep.observed, count_with_m_range(d, 2, SqrtRational::rational(Rational(3, 2)), SqrtRational::rational(Rational(7, 2))));
    EXPECT_TRUE(rep.pass);
    auto thm = check_thm_hyper_1e_counts(d, 2, 1, 2);
    EXPECT_EQ(thm.observed, d.count_l(1));
    // (5/3) e^{-1} 7^5 / 120 ~ 85.9
    EXPECT_NEAR(thm.bound.mid(), 5.0 / 3 / kE * 16807 / 120, 1e-9);
    EXPECT_EQ(thm.pass, thm.observed <= 85);
  }
}

TEST(CountChecks, VacuityAndReport) {
  // On 7 vertices propo-3's count bound exceeds C(7,5) = 21.
  BoundSpec s{BoundId::propo3, 2, 5, 2, {}, {}, Rational(3, 10), {}, {}, false};
  auto rep = check_count_bound(random_graph(7, 0.5, 3), s);
  EXPECT_EQ(rep.verdict(), "vacuous");
  auto j = to_json(rep);
  EXPECT_EQ(j["verdict"], "vacuous");
  EXPECT_EQ(j["spec"]["eps"], "3/10");
  EXPECT_TRUE(j.contains("bound_lo"));
  EXPECT_GT(rep.slack(), 0.0);
  // 1/e-form on a large sparse instance is informative.
  JointDistribution sparse{1000, 10, {{{0, 0}, binomial(1000, 10)}}};
  auto thm = check_thm_hyper_1e_counts(sparse, 2, 1, 2);
  EXPECT_EQ(thm.verdict(), "pass");
  EXPECT_EQ(bound_id("propo2"), BoundId::propo2);
  EXPECT_THROW(bound_id("propo9"), InputError);
}
