#pragma once

#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "edgestat/canonical.hpp"
#include "edgestat/constructions.hpp"
#include "edgestat/enumerate.hpp"
#include "edgestat/io.hpp"
#include "json.hpp"

namespace edgestat {

enum class SearchMethod { exhaustive, local, anneal };

inline std::string to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::exhaustive: return "exhaustive";
    case SearchMethod::local: return "local";
    case SearchMethod::anneal: return "anneal";
  }
  return "?";
}

inline SearchMethod search_method(const std::string& s) {
  if (s == "exhaustive") return SearchMethod::exhaustive;
  if (s == "local" || s == "hill") return SearchMethod::local;
  if (s == "anneal") return SearchMethod::anneal;
  throw InputError("unknown search method '" + s + "' (exhaustive, local, anneal)");
}

struct TrajectoryPoint {
  std::uint64_t restart = 0, iteration = 0;
  Rational value;
  std::size_t edges = 0;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct SearchResult {
  std::size_t n = 0, k = 0;
  std::uint64_t l = 0;
  unsigned r = 2;
  Rational best_value;
  Hypergraph witness;
  SearchMethod method = SearchMethod::exhaustive;
  std::vector<TrajectoryPoint> trajectory;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> visited;  // isomorphism classes, exhaustive only

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

inline nlohmann::json to_json(const SearchResult& s) {
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& p : s.trajectory)
    traj.push_back({{"restart", p.restart}, {"iteration", p.iteration}, {"value", to_string(p.value)}, {"edges", p.edges}});
  nlohmann::json j = {{"parameters", {{"n", s.n}, {"k", s.k}, {"l", s.l}, {"r", s.r}}},
                      {"best_value", to_string(s.best_value)},
                      {"best_value_approx", s.best_value.get_d()},
                      {"witness", format_hypergraph(s.witness)},
                      {"method", to_string(s.method)},
                      {"trajectory", traj}};
  j["seed"] = s.seed ? nlohmann::json(*s.seed) : nlohmann::json(nullptr);
  if (s.visited) j["visited_classes"] = *s.visited;
  return j;
}

inline SearchResult search_result_from_json(const nlohmann::json& j) {
  try {
    SearchResult s;
    const auto& p = j.at("parameters");
    s.n = p.at("n").get<std::size_t>();
    s.k = p.at("k").get<std::size_t>();
    s.l = p.at("l").get<std::uint64_t>();
    s.r = p.at("r").get<unsigned>();
    s.best_value = parse_rational(j.at("best_value").get<std::string>());
    s.witness = parse_hypergraph(j.at("witness").get<std::string>());
    s.method = search_method(j.at("method").get<std::string>());
    for (const auto& t : j.at("trajectory"))
      s.trajectory.push_back({t.at("restart").get<std::uint64_t>(), t.at("iteration").get<std::uint64_t>(),
                              parse_rational(t.at("value").get<std::string>()), t.at("edges").get<std::size_t>()});
    if (!j.at("seed").is_null()) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("visited_classes")) s.visited = j.at("visited_classes").get<std::uint64_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed search result: ") + e.what());
  }
}

namespace detail {

inline EdgeSizes search_sizes(unsigned r) {
  if (r < 2) throw InputError("search needs rank r >= 2");
  return EdgeSizes(1) << r;
}

inline std::size_t exhaustive_ceiling(unsigned r) { return r == 2 ? 8 : r == 3 ? 5 : 4; }

// Strict preference: larger value, then fewer edges, then smaller certificate.
inline bool better(const Rational& v1, const Hypergraph& g1, const Rational& v2, const Hypergraph& g2) {
  if (v1 != v2) return v1 > v2;
  if (g1.num_edges() != g2.num_edges()) return g1.num_edges() < g2.num_edges();
  return certificate_of(g1) < certificate_of(g2);
}

}  // namespace detail

/// max I(G, k, l) over all isomorphism classes of r-uniform hypergraphs on n vertices.
inline SearchResult exhaustive_extremal(std::size_t n, std::size_t k, std::uint64_t l, unsigned r, unsigned jobs = 1) {
  EdgeSizes sizes = detail::search_sizes(r);
  if (k < 1 || k > n) throw InputError("exhaustive search needs 1 <= k <= n");
  if (n > detail::exhaustive_ceiling(r)) {
    std::size_t slots = 0;
    for (unsigned s = 1; s <= r; ++s)
      if (sizes >> s & 1) slots += to_u64(binomial(n, s));
    Rational est(ipow(2, slots), factorial(n));
    throw RefusalError("exhaustive search refused: n = " + std::to_string(n) + " exceeds ceiling " +
                       std::to_string(detail::exhaustive_ceiling(r)) + " for r = " + std::to_string(r) + " (about " +
                       std::to_string(est.get_d()) + " isomorphism classes)");
  }
  const auto& all = noniso_hypergraphs(n, sizes);
  struct Best {
    std::size_t index = 0;
    Rational value = -1;
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(all.size())));
  std::vector<Best> part(jobs);
  // The class list is ordered by (edges, certificate), so the first maximum wins ties.
  auto work = [&](unsigned w) {
    std::size_t lo = all.size() * w / jobs, hi = all.size() * (w + 1) / jobs;
    for (std::size_t i = lo; i < hi; ++i) {
      Rational v = I_value(all[i], k, l, {1, ~0ULL});
      if (v > part[w].value) part[w] = {i, v};
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  Best best;
  for (const auto& b : part)
    if (b.value > best.value) best = b;
  SearchResult res;
  res.n = n;
  res.k = k;
  res.l = l;
  res.r = r;
  res.best_value = best.value;
  res.witness = all[best.index];
  res.method = SearchMethod::exhaustive;
  res.visited = all.size();
  return res;
}

/// Knobs for local search. Every field has a default; from_json rejects unknown keys.
struct SearchConfig {
  SearchMethod method = SearchMethod::local;
  std::uint64_t iterations = 2000;
  std::uint64_t restarts = 4;
  double t0 = 0.05;        // annealing start temperature, in units of probability
  double cooling = 0.998;  // geometric factor per iteration
  std::string init = "random";  // random | empty | complete
  Rational init_p = Rational(1, 2);
  std::uint64_t log_every = 100;

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

inline nlohmann::json to_json(const SearchConfig& c) {
  return {{"method", to_string(c.method)}, {"iterations", c.iterations}, {"restarts", c.restarts}, {"t0", c.t0},
          {"cooling", c.cooling}, {"init", c.init}, {"init_p", to_string(c.init_p)}, {"log_every", c.log_every}};
}

inline SearchConfig search_config_from_json(const nlohmann::json& j) {
  SearchConfig c;
  if (!j.is_object()) throw InputError("search config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "method") c.method = search_method(v.get<std::string>());
      else if (key == "iterations") c.iterations = v.get<std::uint64_t>();
      else if (key == "restarts") c.restarts = v.get<std::uint64_t>();
      else if (key == "t0") c.t0 = v.get<double>();
      else if (key == "cooling") c.cooling = v.get<double>();
      else if (key == "init") c.init = v.get<std::string>();
      else if (key == "init_p") c.init_p = parse_rational(v.is_string() ? v.get<std::string>() : v.dump());
      else if (key == "log_every") c.log_every = v.get<std::uint64_t>();
      else throw InputError("unknown search config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed search config: ") + e.what());
  }
  if (c.method == SearchMethod::exhaustive) throw InputError("search config: method must be local or anneal");
  if (c.restarts < 1) throw InputError("search config: restarts must be >= 1");
  if (c.init != "random" && c.init != "empty" && c.init != "complete") throw InputError("search config: init must be random, empty or complete");
  if (c.init_p < 0 || c.init_p > 1) throw InputError("search config: init_p must lie in [0, 1]");
  if (!(c.t0 > 0) || !(c.cooling > 0 && c.cooling <= 1)) throw InputError("search config: need t0 > 0 and 0 < cooling <= 1");
  if (c.log_every < 1) throw InputError("search config: log_every must be >= 1");
  return c;
}

namespace detail {

inline std::vector<std::vector<Vertex>> candidate_edges(std::size_t n, EdgeSizes sizes) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (unsigned s = 1; s <= max_size(sizes); ++s)
    if (sizes >> s & 1) for_each_subset(pool, s, [&](const std::vector<Vertex>& e) { out.push_back(e); });
  return out;
}

inline Hypergraph from_toggles(std::size_t n, unsigned r, const std::vector<std::vector<Vertex>>& cand, const std::vector<char>& on) {
  std::vector<std::vector<Vertex>> es;
  for (std::size_t i = 0; i < cand.size(); ++i)
    if (on[i]) es.push_back(cand[i]);
  return Hypergraph(n, r, std::move(es));
}

struct RestartOutcome {
  Rational value;
  Hypergraph graph;
  std::vector<TrajectoryPoint> log;
};

}  // namespace detail

/// Hill climbing or simulated annealing over single-edge toggles. Restart i draws from
/// Philox(seed, i), so the result does not depend on jobs.
inline SearchResult local_search(std::size_t n, std::size_t k, std::uint64_t l, unsigned r, const SearchConfig& cfg,
                                 std::uint64_t seed, unsigned jobs = 1, const std::optional<Hypergraph>& initial = std::nullopt) {
  EdgeSizes sizes = detail::search_sizes(r);
  if (k < 1 || k > n) throw InputError("local search needs 1 <= k <= n");
  if (n > kMaxBitmaskVertices) throw InputError("local search needs n <= 128");
  if (cfg.method == SearchMethod::exhaustive) throw InputError("local_search: method must be local or anneal");
  const std::uint64_t ceiling = work_ceiling();
  detail::check_work(Hypergraph(n, r, {}), k, ceiling);
  const auto cand = detail::candidate_edges(n, sizes);
  if (initial) {
    if (initial->n() != n) throw InputError("initial graph has the wrong vertex count");
    for (std::size_t i = 0; i < initial->num_edges(); ++i) {
      auto e = initial->edge(i);
      if (!(sizes >> e.size() & 1)) throw InputError("initial graph has an edge size outside the search space");
    }
  }
  auto value_of = [&](const Hypergraph& g) { return I_value(g, k, l, {1, ceiling}); };

  auto run = [&](std::uint64_t restart) {
    Philox rng(seed, restart);
    std::vector<char> on(cand.size(), 0);
    if (initial) {
      for (std::size_t i = 0; i < cand.size(); ++i) on[i] = initial->has_edge(cand[i]);
    } else if (cfg.init == "complete") {
      std::fill(on.begin(), on.end(), 1);
    } else if (cfg.init == "random") {
      for (auto& b : on) b = rng.bernoulli(cfg.init_p);
    }
    Hypergraph cur = detail::from_toggles(n, r, cand, on);
    Rational cur_v = value_of(cur);
    detail::RestartOutcome out{cur_v, cur, {}};
    out.log.push_back({restart, 0, cur_v, cur.num_edges()});
    double temp = cfg.t0;
    for (std::uint64_t it = 1; it <= cfg.iterations; ++it) {
      std::size_t pick = rng.below(cand.size());
      on[pick] ^= 1;
      Hypergraph next = detail::from_toggles(n, r, cand, on);
      Rational v = value_of(next);
      bool accept = v >= cur_v;
      if (!accept && cfg.method == SearchMethod::anneal) {
        double delta = Rational(v - cur_v).get_d();
        accept = rng.uniform01() < std::exp(delta / temp);
      }
      if (accept) {
        cur = std::move(next);
        cur_v = v;
      } else {
        on[pick] ^= 1;
      }
      temp *= cfg.cooling;
      bool improved = accept && detail::better(cur_v, cur, out.value, out.graph);
      if (improved) {
        out.value = cur_v;
        out.graph = cur;
      }
      if (improved || it % cfg.log_every == 0 || it == cfg.iterations) out.log.push_back({restart, it, cur_v, cur.num_edges()});
    }
    return out;
  };

  std::vector<std::optional<detail::RestartOutcome>> outs(cfg.restarts);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cfg.restarts)));
  if (jobs == 1) {
    for (std::uint64_t i = 0; i < cfg.restarts; ++i) outs[i] = run(i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t i; (i = next.fetch_add(1)) < cfg.restarts;) outs[i] = run(i);
      });
    for (auto& t : pool) t.join();
  }
  SearchResult res;
  res.n = n;
  res.k = k;
  res.l = l;
  res.r = r;
  res.method = cfg.method;
  res.seed = seed;
  const detail::RestartOutcome* best = nullptr;
  for (const auto& o : outs) {
    if (!best || detail::better(o->value, o->graph, best->value, best->graph)) best = &*o;
    res.trajectory.insert(res.trajectory.end(), o->log.begin(), o->log.end());
  }
  res.best_value = best->value;
  res.witness = canonical_form(best->graph).graph;
  return res;
}

struct ConstructionValue {
  std::string name;
  Rational value;
};

/// I(G, k, l) of every applicable deterministic construction at this n, rounding block sizes.
inline std::vector<ConstructionValue> construction_lower_bounds(std::size_t n, std::size_t k, std::uint64_t l, unsigned r) {
  std::vector<ConstructionValue> out;
  auto add = [&](const std::string& name, auto make) {
    try {
      Hypergraph g = make();
      out.push_back({name, I_value(g, k, l)});
    } catch (const InputError&) {
    }
  };
  add("empty", [&] { return Hypergraph(n, r, {}); });
  if (r == 2) {
    add("complete", [&] { return planted_clique(n, k, k, true); });
    if (l == k - 1) add("bipartite_kminus1", [&] { return bipartite_kminus1(n, k, true); });
    for (std::uint64_t m = 2; m <= k; ++m)
      if (m * (m - 1) / 2 == l) add("planted_clique m=" + std::to_string(m), [&] { return planted_clique(n, k, m, true); });
    add("star_forest", [&] { return star_forest(n, k, l, true); });
  } else {
    for (std::uint64_t m = r; m <= k; ++m)
      if (binomial(m, r) == from_u64(l)) add("r_clique m=" + std::to_string(m), [&] { return r_clique(n, k, m, r, true); });
  }
  return out;
}

struct MonotoneRow {
  std::size_t n = 0;
  Rational value;
  Hypergraph witness;
  std::vector<ConstructionValue> constructions;
  bool dominates_constructions = true;
};

struct MonotoneReport {
  std::size_t k = 0;
  std::uint64_t l = 0;
  unsigned r = 2;
  std::vector<MonotoneRow> rows;
  bool nonincreasing = true;
  bool dominates = true;
  bool pass() const { return nonincreasing && dominates; }
};

inline MonotoneReport verify_monotone_in_n(std::size_t k, std::uint64_t l, unsigned r, std::size_t n_from, std::size_t n_to, unsigned jobs = 1) {
  if (n_from < k || n_to < n_from) throw InputError("need k <= n_from <= n_to");
  if (n_to > detail::exhaustive_ceiling(r)) exhaustive_extremal(n_to, k, l, r, jobs);  // throws the refusal
  MonotoneReport rep{k, l, r, {}, true, true};
  for (std::size_t n = n_from; n <= n_to; ++n) {
    auto res = exhaustive_extremal(n, k, l, r, jobs);
    MonotoneRow row{n, res.best_value, res.witness, construction_lower_bounds(n, k, l, r), true};
    for (const auto& c : row.constructions) row.dominates_constructions = row.dominates_constructions && c.value <= row.value;
    if (!rep.rows.empty() && row.value > rep.rows.back().value) rep.nonincreasing = false;
    rep.dominates = rep.dominates && row.dominates_constructions;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline nlohmann::json to_json(const MonotoneReport& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : m.rows) {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : r.constructions) cs.push_back({{"name", c.name}, {"value", to_string(c.value)}});
    rows.push_back({{"n", r.n}, {"value", to_string(r.value)}, {"witness", format_hypergraph(r.witness)},
                    {"constructions", cs}, {"dominates_constructions", r.dominates_constructions}});
  }
  return {{"k", m.k}, {"l", m.l}, {"r", m.r}, {"rows", rows}, {"nonincreasing", m.nonincreasing},
          {"dominates_constructions", m.dominates}, {"pass", m.pass()}};
}

}  // namespace edgestat
