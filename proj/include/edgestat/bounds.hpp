#pragma once

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "edgestat/enumerate.hpp"
#include "edgestat/exact.hpp"
#include "edgestat/interval.hpp"

namespace edgestat {

enum class BoundId {
  thm_hyper_1e,
  thm_graph_o1_small,
  thm_graph_o1_large,
  thm_hyper_o1,
  thm_forest,
  propo1,
  propo2,
  propo3,
  coro_o1,
  lemma_B_pleasant,
  lemma_B_nice,
  lemma_phi
};

inline const std::vector<std::pair<BoundId, std::string>>& bound_names() {
  static const std::vector<std::pair<BoundId, std::string>> names = {
      {BoundId::thm_hyper_1e, "thm_hyper_1e"},   {BoundId::thm_graph_o1_small, "thm_graph_o1_small"},
      {BoundId::thm_graph_o1_large, "thm_graph_o1_large"}, {BoundId::thm_hyper_o1, "thm_hyper_o1"},
      {BoundId::thm_forest, "thm_forest"},       {BoundId::propo1, "propo1"},
      {BoundId::propo2, "propo2"},               {BoundId::propo3, "propo3"},
      {BoundId::coro_o1, "coro_o1"},             {BoundId::lemma_B_pleasant, "lemma_B_pleasant"},
      {BoundId::lemma_B_nice, "lemma_B_nice"},   {BoundId::lemma_phi, "lemma_phi"}};
  return names;
}

inline std::string to_string(BoundId id) {
  for (const auto& [b, name] : bound_names())
    if (b == id) return name;
  return "?";
}

inline BoundId bound_id(const std::string& s) {
  for (const auto& [b, name] : bound_names())
    if (name == s) return b;
  throw InputError("unknown bound id '" + s + "'");
}

struct BoundSpec {
  BoundId id = BoundId::thm_hyper_1e;
  unsigned r = 2;
  std::uint64_t k = 0, l = 0;
  std::optional<Rational> c, c_prime, eps;
  std::optional<SqrtRational> z;
  std::optional<std::uint64_t> a;
  bool assume_large_k = false;
};

inline nlohmann::json to_json(const BoundSpec& s) {
  nlohmann::json j = {{"id", to_string(s.id)}, {"r", s.r}, {"k", s.k}, {"l", s.l}};
  if (s.c) j["c"] = s.c->get_str();
  if (s.c_prime) j["c_prime"] = s.c_prime->get_str();
  if (s.eps) j["eps"] = s.eps->get_str();
  if (s.z) j["z"] = s.z->describe();
  if (s.a) j["a"] = *s.a;
  if (s.assume_large_k) j["assume_large_k"] = true;
  return j;
}

// ---------------------------------------------------------------- evaluators (certified intervals)

namespace detail {

inline void applicable_if(bool ok, const std::string& why) {
  if (!ok) throw InapplicableError(why);
}

inline Interval sqrt_rational(const SqrtRational& s) { return Interval(s.coef) * Interval(s.radicand).sqrt(); }

inline Interval root(std::uint64_t x, std::uint64_t q) { return Interval(from_u64(x)).pow(Rational(1, from_u64(q))); }

}  // namespace detail

/// n^k / k! as an outward-rounded interval.
inline Interval count_scale(std::uint64_t n, std::uint64_t k) {
  Rational q(ipow(from_u64(n), k), factorial(k));
  q.canonicalize();
  return Interval(q);
}

/// (k / (k - r l)) / e; requires 1 <= l < k / r.
inline Interval bound_thm_hyper_1e(unsigned r, std::uint64_t k, std::uint64_t l) {
  detail::applicable_if(l >= 1 && r * l < k, "needs 1 <= l < k/r");
  return Interval(Rational(from_u64(k), from_u64(k - r * l))) / Interval::e();
}

inline Interval bound_thm_hyper_1e_count(unsigned r, std::uint64_t k, std::uint64_t l, std::uint64_t n) {
  detail::applicable_if(n >= k, "needs n >= k");
  return bound_thm_hyper_1e(r, k, l) * count_scale(n, k);
}

enum class GraphO1Regime { small_l, large_l, boundary };

/// Which branch of the graph bound applies: l <= k / log^4 k (small) or above.
inline GraphO1Regime graph_o1_regime(std::uint64_t k, std::uint64_t l) {
  Interval lg = Interval(from_u64(k)).log2();
  Interval lhs = Interval(from_u64(l)) * lg * lg * lg * lg;
  Interval rhs(from_u64(k));
  if (lhs.certainly_leq(rhs)) return GraphO1Regime::small_l;
  if (rhs.certainly_lt(lhs)) return GraphO1Regime::large_l;
  return GraphO1Regime::boundary;
}

inline Interval graph_o1_small_formula(std::uint64_t l) { return Interval(90) / detail::root(l, 4); }
inline Interval graph_o1_large_formula(std::uint64_t k) {
  return Interval(90) * Interval(from_u64(k)).log2() / detail::root(k, 4);
}

/// 90 l^{-1/4} when l <= k / log^4 k, else 90 k^{-1/4} log k; requires 1 <= l <= (1 - eps) k / 2.
inline Interval bound_thm_graph_o1(std::uint64_t k, std::uint64_t l, const Rational& eps) {
  detail::applicable_if(eps > 0 && eps < 1, "needs 0 < eps < 1");
  detail::applicable_if(k >= 2, "needs k >= 2");
  detail::applicable_if(l >= 1 && Rational(from_u64(2 * l)) <= (1 - eps) * from_u64(k), "needs 1 <= l <= (1-eps) k/2");
  switch (graph_o1_regime(k, l)) {
    case GraphO1Regime::small_l: return graph_o1_small_formula(l);
    case GraphO1Regime::large_l: return graph_o1_large_formula(k);
    case GraphO1Regime::boundary: break;
  }
  return Interval::hull(graph_o1_small_formula(l), graph_o1_large_formula(k));
}

/// 100 l^{-1/(2r)}; requires r >= 3 and 1 <= l <= (1 - eps) k / r.
inline Interval bound_thm_hyper_o1(unsigned r, std::uint64_t k, std::uint64_t l, const Rational& eps) {
  detail::applicable_if(r >= 3, "needs r >= 3");
  detail::applicable_if(eps > 0 && eps < 1, "needs 0 < eps < 1");
  detail::applicable_if(l >= 1 && Rational(from_u64(r * l)) <= (1 - eps) * from_u64(k), "needs 1 <= l <= (1-eps) k/r");
  return Interval(100) / detail::root(l, 2 * r);
}

/// 50 l^{-1/2}; requires 1 <= l <= sqrt(k)/4.
inline Interval bound_thm_forest(std::uint64_t k, std::uint64_t l) {
  detail::applicable_if(l >= 1 && 16 * l * l <= k, "needs 1 <= l <= sqrt(k)/4");
  return Interval(50) / detail::root(l, 2);
}

/// 32 sqrt(r) / sqrt(c); requires 0 < c < sqrt(k)/2.
inline Interval bound_propo1(unsigned r, std::uint64_t k, const Rational& c) {
  detail::applicable_if(c > 0 && 4 * c * c < from_u64(k), "needs 0 < c < sqrt(k)/2");
  return Interval(32) * detail::root(r, 2) / Interval(c).sqrt();
}

/// 44 sqrt(r) k^{-1/4}; requires sqrt(k)/2 <= c <= k/(32 r).
inline Interval bound_propo2(unsigned r, std::uint64_t k, const Rational& c) {
  detail::applicable_if(4 * c * c >= from_u64(k) && c > 0 && c <= Rational(from_u64(k), 32 * r), "needs sqrt(k)/2 <= c <= k/(32r)");
  return Interval(44) * detail::root(r, 2) / detail::root(k, 4);
}

/// 8 r^{1/4} eps^{-1/2} k^{-1/4}; requires 0 < eps < 1/2.
inline Interval bound_propo3(unsigned r, std::uint64_t k, const Rational& eps) {
  detail::applicable_if(eps > 0 && eps < Rational(1, 2), "needs 0 < eps < 1/2");
  return Interval(8) * detail::root(r, 4) / Interval(eps).sqrt() / detail::root(k, 4);
}

/// 32 sqrt(r)/sqrt(c') + 23 sqrt(r) k^{-1/4} log k; requires c' > 0, eps > 0 and a large-k acknowledgment.
inline Interval bound_coro_o1(unsigned r, std::uint64_t k, const Rational& c_prime, const Rational& eps, bool assume_large_k) {
  detail::applicable_if(c_prime > 0, "needs c' > 0");
  detail::applicable_if(eps > 0 && eps < 1, "needs 0 < eps < 1");
  detail::applicable_if(assume_large_k, "holds only for k sufficiently large in eps; pass --assume-large-k to acknowledge");
  detail::applicable_if(k >= 2, "needs k >= 2");
  Interval sr = detail::root(r, 2);
  return Interval(32) * sr / Interval(c_prime).sqrt() + Interval(23) * sr * Interval(from_u64(k)).log2() / detail::root(k, 4);
}

/// Partner-count coefficient for eps-pleasant pairs: 2 r^{1/4} eps^{-1/2} k^{-1/4} (times n^a / a!).
inline Interval bound_lemma_B_pleasant(unsigned r, std::uint64_t k, const Rational& eps) {
  detail::applicable_if(eps > 0, "needs eps > 0");
  detail::applicable_if(k >= 1, "needs k >= 1");
  return Interval(2) * detail::root(r, 4) / Interval(eps).sqrt() / detail::root(k, 4);
}

/// Partner-count coefficient for z-nice pairs: (4/3) z^{-1/2} (times n^a / a!).
inline Interval bound_lemma_B_nice(const SqrtRational& z) {
  detail::applicable_if(z.coef > 0 && z.radicand > 0, "needs z > 0");
  return Interval(Rational(4, 3)) / detail::sqrt_rational(z).sqrt();
}

/// x exp(-(k - r l) x)
inline double phi(double x, std::uint64_t k, unsigned r, std::uint64_t l) {
  if (r * l >= k) throw InputError("phi needs k - r l > 0");
  if (x < 0) throw InputError("phi needs x >= 0");
  return x * std::exp(-static_cast<double>(k - r * l) * x);
}

/// 1 / ((k - r l) e), attained at x = 1/(k - r l).
inline double phi_max(std::uint64_t k, unsigned r, std::uint64_t l) {
  if (r * l >= k) throw InputError("phi_max needs k - r l > 0");
  return 1.0 / (static_cast<double>(k - r * l) * std::exp(1.0));
}

/// Certified version of phi_max.
inline Interval phi_max_interval(std::uint64_t k, unsigned r, std::uint64_t l) {
  if (r * l >= k) throw InputError("phi_max needs k - r l > 0");
  return Interval(1) / (Interval(from_u64(k - r * l)) * Interval::e());
}

/// Bounds whose source statement only holds for k beyond an unstated threshold.
inline bool requires_large_k(BoundId id) {
  return id == BoundId::thm_graph_o1_small || id == BoundId::thm_graph_o1_large || id == BoundId::thm_hyper_o1 ||
         id == BoundId::coro_o1;
}

/// A probability-form value is informative only if it is certainly below 1.
inline bool vacuous_probability(const Interval& v) { return !v.upper_lt(Rational(1)); }

/// Probability-form value of a pure bound spec.
inline Interval evaluate_bound(const BoundSpec& s) {
  auto need = [](const auto& opt, const char* name) -> const auto& {
    if (!opt) throw InputError(std::string("bound needs parameter ") + name);
    return *opt;
  };
  switch (s.id) {
    case BoundId::thm_hyper_1e: return bound_thm_hyper_1e(s.r, s.k, s.l);
    case BoundId::thm_graph_o1_small:
      detail::applicable_if(graph_o1_regime(s.k, s.l) != GraphO1Regime::large_l, "small-l branch needs l <= k/log^4 k");
      bound_thm_graph_o1(s.k, s.l, need(s.eps, "eps"));
      return graph_o1_small_formula(s.l);
    case BoundId::thm_graph_o1_large:
      detail::applicable_if(graph_o1_regime(s.k, s.l) != GraphO1Regime::small_l, "large-l branch needs l >= k/log^4 k");
      bound_thm_graph_o1(s.k, s.l, need(s.eps, "eps"));
      return graph_o1_large_formula(s.k);
    case BoundId::thm_hyper_o1: return bound_thm_hyper_o1(s.r, s.k, s.l, need(s.eps, "eps"));
    case BoundId::thm_forest: return bound_thm_forest(s.k, s.l);
    case BoundId::propo1: return bound_propo1(s.r, s.k, need(s.c, "c"));
    case BoundId::propo2: return bound_propo2(s.r, s.k, need(s.c, "c"));
    case BoundId::propo3: return bound_propo3(s.r, s.k, need(s.eps, "eps"));
    case BoundId::coro_o1: return bound_coro_o1(s.r, s.k, need(s.c_prime, "c_prime"), need(s.eps, "eps"), s.assume_large_k);
    case BoundId::lemma_B_pleasant: return bound_lemma_B_pleasant(s.r, s.k, need(s.eps, "eps"));
    case BoundId::lemma_B_nice: return bound_lemma_B_nice(need(s.z, "z"));
    case BoundId::lemma_phi: return phi_max_interval(s.k, s.r, s.l);
  }
  throw InputError("unknown bound");
}

// ---------------------------------------------------------------- checks against exact counts

struct BoundReport {
  BoundSpec spec;
  std::uint64_t n = 0;
  bool applicable = false;
  std::string reason;  // why inapplicable
  Interval bound;      // count form
  BigInt observed = 0;
  BigInt possible = 0;  // number of subsets the count ranges over
  bool pass = false;
  bool vacuous = false;

  /// pass | vacuous | fail | inapplicable
  std::string verdict() const {
    if (!applicable) return "inapplicable";
    if (!pass) return "fail";
    return vacuous ? "vacuous" : "pass";
  }
  /// bound - observed, using the certified lower end.
  double slack() const { return applicable ? bound.lower() - observed.get_d() : 0.0; }
};

inline nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j = {{"spec", to_json(r.spec)}, {"n", r.n}, {"verdict", r.verdict()}, {"applicable", r.applicable}};
  if (!r.applicable) {
    j["reason"] = r.reason;
    return j;
  }
  j["observed"] = r.observed.get_str();
  j["bound_lo"] = r.bound.lower_str();
  j["bound_hi"] = r.bound.upper_str();
  j["pass"] = r.pass;
  if (requires_large_k(r.spec.id)) j["assumes_large_k"] = r.spec.assume_large_k;
  j["vacuous"] = r.vacuous;
  j["slack"] = r.slack();
  return j;
}

namespace detail {

inline void finish(BoundReport& rep, const Interval& coefficient, const Interval& scale) {
  rep.bound = coefficient * scale;
  rep.applicable = true;
  rep.pass = rep.bound.lower_geq(rep.observed);
  // Informative only if the bound is certainly below the trivial count.
  rep.vacuous = !rep.bound.upper_lt(Rational(rep.possible));
}

// Coefficients depend on (id, r, k, parameters) only, and suites ask for the same ones millions
// of times. Inapplicability is remembered too.
template <class F>
Interval memo_interval(const std::string& key, F&& compute) {
  static std::mutex mu;
  static std::map<std::string, std::pair<std::optional<Interval>, std::string>> memo;
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(key); it != memo.end()) {
      if (it->second.first) return *it->second.first;
      throw InapplicableError(it->second.second);
    }
  }
  std::pair<std::optional<Interval>, std::string> entry;
  try {
    entry.first = compute();
  } catch (const InapplicableError& e) {
    entry.second = e.what();
  }
  std::lock_guard lock(mu);
  memo.emplace(key, entry);
  if (!entry.first) throw InapplicableError(entry.second);
  return *entry.first;
}

template <class F>
BoundReport guarded(BoundReport rep, F&& f) {
  try {
    f(rep);
  } catch (const InapplicableError& e) {
    rep.applicable = false;
    rep.reason = e.what();
  }
  return rep;
}

}  // namespace detail

/// Counting lemmas (propo1/2/3, coro_o1) against a precomputed (l, m) table.
/// The hypergraph's edges must have size <= spec.r.
inline BoundReport check_count_bound(const JointDistribution& d, unsigned max_edge_size, const BoundSpec& spec) {
  BoundReport rep;
  rep.spec = spec;
  rep.n = d.n;
  return detail::guarded(rep, [&](BoundReport& out) {
    detail::applicable_if(spec.k == d.k, "spec k differs from the distribution's k");
    detail::applicable_if(max_edge_size <= spec.r, "hypergraph has edges larger than r");
    detail::applicable_if(spec.l >= 1, "needs l >= 1");
    detail::applicable_if(d.n >= d.k, "needs n >= k");
    const Rational kq(from_u64(spec.k));
    nlohmann::json key_spec = to_json(spec);
    key_spec.erase("l");
    const std::string key = key_spec.dump();
    SqrtRational lo, hi;
    Interval coef;
    auto need = [](const auto& opt, const char* name) -> const auto& {
      if (!opt) throw InputError(std::string("bound needs parameter ") + name);
      return *opt;
    };
    switch (spec.id) {
      case BoundId::propo1:
        coef = detail::memo_interval(key, [&] { return bound_propo1(spec.r, spec.k, need(spec.c, "c")); });
        lo = SqrtRational::rational(*spec.c);
        hi = SqrtRational{Rational(1, 2), kq};
        break;
      case BoundId::propo2:
        coef = detail::memo_interval(key, [&] { return bound_propo2(spec.r, spec.k, need(spec.c, "c")); });
        lo = SqrtRational::rational(*spec.c);
        hi = SqrtRational::rational(2 * *spec.c);
        break;
      case BoundId::propo3:
        coef = detail::memo_interval(key, [&] { return bound_propo3(spec.r, spec.k, need(spec.eps, "eps")); });
        lo = SqrtRational::rational(*spec.eps * kq);
        hi = SqrtRational::rational((1 - *spec.eps) * kq);
        break;
      case BoundId::coro_o1:
        coef = detail::memo_interval(key, [&] { return bound_coro_o1(spec.r, spec.k, need(spec.c_prime, "c_prime"), need(spec.eps, "eps"), spec.assume_large_k); });
        lo = SqrtRational::rational(*spec.c_prime);
        hi = SqrtRational::rational((1 - *spec.eps) * kq);
        break;
      default:
        throw InputError("check_count_bound handles propo1, propo2, propo3 and coro_o1 only");
    }
    out.observed = count_with_m_range(d, spec.l, lo, hi);
    out.possible = binomial(d.n, d.k);
    detail::finish(out, coef, detail::memo_interval("scale " + std::to_string(d.n) + " " + std::to_string(d.k), [&] { return count_scale(d.n, d.k); }));
  });
}

inline BoundReport check_count_bound(const Hypergraph& h, const BoundSpec& spec, const EnumerationOptions& opt = {}) {
  return check_count_bound(exact_joint_distribution(h, spec.k, opt), h.max_edge_size(), spec);
}

/// #{A : e(A) = l} <= (k/(k - r l)) e^{-1} n^k / k!.
inline BoundReport check_thm_hyper_1e_counts(const JointDistribution& d, unsigned max_edge_size, std::uint64_t l, unsigned r) {
  BoundReport rep;
  rep.spec.id = BoundId::thm_hyper_1e;
  rep.spec.r = r;
  rep.spec.k = d.k;
  rep.spec.l = l;
  rep.n = d.n;
  return detail::guarded(rep, [&](BoundReport& out) {
    detail::applicable_if(max_edge_size <= r, "hypergraph has edges larger than r");
    Interval coef = bound_thm_hyper_1e(r, d.k, l);
    out.observed = d.count_l(l);
    out.possible = binomial(d.n, d.k);
    detail::finish(out, coef, count_scale(d.n, d.k));
  });
}

inline BoundReport check_thm_hyper_1e_counts(const Hypergraph& h, std::uint64_t k, std::uint64_t l, unsigned r,
                                             const EnumerationOptions& opt = {}) {
  return check_thm_hyper_1e_counts(exact_joint_distribution(h, k, opt), h.max_edge_size(), l, r);
}

/// Forest-inducing k-subsets with l edges <= 50 l^{-1/2} n^k / k!.
inline BoundReport check_forest_bound(const Hypergraph& g, std::uint64_t k, std::uint64_t l, const EnumerationOptions& opt = {}) {
  BoundReport rep;
  rep.spec.id = BoundId::thm_forest;
  rep.spec.k = k;
  rep.spec.l = l;
  rep.n = g.n();
  return detail::guarded(rep, [&](BoundReport& out) {
    Interval coef = bound_thm_forest(k, l);
    out.observed = count_forest_subsets(g, k, l, opt);
    out.possible = binomial(g.n(), k);
    detail::finish(out, coef, count_scale(g.n(), k));
  });
}

/// I(G, k, l) <= value, checked as #{A : e(A) = l} <= value * C(n, k).
inline BoundReport check_probability_bound(const JointDistribution& d, unsigned max_edge_size, const BoundSpec& spec) {
  BoundReport rep;
  rep.spec = spec;
  rep.n = d.n;
  return detail::guarded(rep, [&](BoundReport& out) {
    detail::applicable_if(spec.k == d.k, "spec k differs from the distribution's k");
    detail::applicable_if(max_edge_size <= spec.r, "hypergraph has edges larger than r");
    Interval coef = evaluate_bound(spec);
    out.observed = d.count_l(spec.l);
    out.possible = binomial(d.n, d.k);
    detail::finish(out, coef, Interval(Rational(out.possible)));
  });
}

/// Any count-form statement except the forest one, against an exact (l, m) table.
inline BoundReport check_bound(const JointDistribution& d, unsigned max_edge_size, const BoundSpec& spec) {
  switch (spec.id) {
    case BoundId::thm_hyper_1e: {
      BoundReport rep = check_thm_hyper_1e_counts(d, max_edge_size, spec.l, spec.r);
      rep.spec = spec;
      return rep;
    }
    case BoundId::propo1:
    case BoundId::propo2:
    case BoundId::propo3:
    case BoundId::coro_o1: return check_count_bound(d, max_edge_size, spec);
    case BoundId::thm_graph_o1_small:
    case BoundId::thm_graph_o1_large:
    case BoundId::thm_hyper_o1: return check_probability_bound(d, max_edge_size, spec);
    case BoundId::thm_forest: throw InputError("thm_forest needs the graph itself, not a count table");
    default: throw InputError(to_string(spec.id) + " is not a count statement about a fixed hypergraph");
  }
}

inline BoundReport check_bound(const Hypergraph& h, const BoundSpec& spec, const EnumerationOptions& opt = {}) {
  if (spec.id == BoundId::thm_forest) return check_forest_bound(h, spec.k, spec.l, opt);
  return check_bound(exact_joint_distribution(h, spec.k, opt), h.max_edge_size(), spec);
}

}  // namespace edgestat
