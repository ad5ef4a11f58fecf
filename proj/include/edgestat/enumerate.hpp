#pragma once

#include <boost/math/distributions/normal.hpp>
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "edgestat/combinations.hpp"
#include "edgestat/exact.hpp"
#include "edgestat/hypergraph.hpp"
#include "edgestat/rng.hpp"

namespace edgestat {

/// Default ceiling on enumerated subsets; EDGESTAT_CEILING overrides.
inline constexpr std::uint64_t kDefaultWorkCeiling = 1'000'000'000ULL;

inline std::uint64_t work_ceiling() {
  if (const char* env = std::getenv("EDGESTAT_CEILING"); env && *env) {
    Rational q = parse_rational(env);
    if (q < 1) throw InputError("EDGESTAT_CEILING must be >= 1");
    BigInt f = floor_q(q);
    return mpz_sizeinbase(f.get_mpz_t(), 2) > 64 ? ~0ULL : to_u64(f);
  }
  return kDefaultWorkCeiling;
}

struct EnumerationOptions {
  unsigned jobs = 1;
  std::uint64_t ceiling = work_ceiling();
};

namespace detail {

inline void check_work(const Hypergraph& h, std::size_t k, std::uint64_t ceiling) {
  h.require_bitmask();
  if (k < 1 || k > h.n())
    throw InputError("need 1 <= k <= n; got k = " + std::to_string(k) + ", n = " + std::to_string(h.n()));
  BigInt work = binomial(h.n(), k);
  if (work > from_u64(ceiling)) {
    // Roughly 5e7 subsets per second per worker on the incremental path.
    double secs = work.get_d() / 5e7;
    std::ostringstream msg;
    msg << "refusing exhaustive enumeration: C(" << h.n() << "," << k << ") = " << work.get_str()
        << " subsets exceeds ceiling " << ceiling << " (estimated " << secs
        << " worker-seconds); raise EDGESTAT_CEILING to proceed";
    throw RefusalError(msg.str());
  }
}

/// Incrementally maintained e(A), m(A) and within-degrees under insert/erase.
class SubsetTracker {
 public:
  explicit SubsetTracker(const Hypergraph& h) : h_(h), deg_(h.n(), 0) {}

  void insert(Vertex y) {
    set_.insert(y);
    for (std::uint32_t ei : h_.incident(y)) {
      VertexSet e = h_.edge_masks()[ei];
      if (!e.subset_of(set_)) continue;
      ++e_;
      e.for_each([&](Vertex w) {
        if (deg_[w]++ == 0) ++m_;
      });
    }
  }

  void erase(Vertex x) {
    for (std::uint32_t ei : h_.incident(x)) {
      VertexSet e = h_.edge_masks()[ei];
      if (!e.subset_of(set_)) continue;
      --e_;
      e.for_each([&](Vertex w) {
        if (--deg_[w] == 0) --m_;
      });
    }
    set_.erase(x);
  }

  VertexSet set() const { return set_; }
  std::size_t e() const { return e_; }
  std::size_t m() const { return m_; }

 private:
  const Hypergraph& h_;
  std::vector<std::uint32_t> deg_;
  VertexSet set_;
  std::size_t e_ = 0, m_ = 0;
};

/// Runs visit(acc, A, e(A), m(A)) over every k-subset. The space is split by minimum vertex;
/// accumulators are returned in task order so merges are deterministic.
template <class Acc, class MakeAcc, class Visit>
std::vector<Acc> partitioned_subsets(const Hypergraph& h, std::size_t k, unsigned jobs, MakeAcc make_acc, Visit visit) {
  const std::size_t n = h.n();
  const std::size_t tasks = n - k + 1;
  std::vector<Acc> accs;
  accs.reserve(tasks);
  for (std::size_t i = 0; i < tasks; ++i) accs.push_back(make_acc());

  auto run_task = [&](std::size_t s) {
    Acc& acc = accs[s];
    SubsetTracker tr(h);
    tr.insert(static_cast<Vertex>(s));
    const auto base = static_cast<Vertex>(s + 1);
    RevolvingDoor door(static_cast<unsigned>(n - s - 1), static_cast<unsigned>(k - 1));
    for (unsigned c : door.current()) tr.insert(base + c);
    visit(acc, tr.set(), tr.e(), tr.m());
    while (auto sw = door.next()) {
      tr.erase(base + sw->out);
      tr.insert(base + sw->in);
      visit(acc, tr.set(), tr.e(), tr.m());
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks)));
  if (jobs == 1) {
    for (std::size_t s = 0; s < tasks; ++s) run_task(s);
    return accs;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (std::size_t s; (s = next.fetch_add(1)) < tasks;) run_task(s);
    });
  for (auto& t : pool) t.join();
  return accs;
}

}  // namespace detail

/// Exact counts of k-subsets by (e(A), m(A)).
struct JointDistribution {
  std::size_t n = 0, k = 0;
  std::map<std::pair<std::uint64_t, std::uint64_t>, BigInt> counts;  // (l, m) -> count, nonzero entries only

  BigInt at(std::uint64_t l, std::uint64_t m) const {
    auto it = counts.find({l, m});
    return it == counts.end() ? BigInt(0) : it->second;
  }
  BigInt total() const {
    BigInt t = 0;
    for (const auto& [key, c] : counts) t += c;
    return t;
  }
  /// Count with e(A) = l.
  BigInt count_l(std::uint64_t l) const {
    BigInt t = 0;
    for (auto it = counts.lower_bound({l, 0}); it != counts.end() && it->first.first == l; ++it) t += it->second;
    return t;
  }
  std::map<std::uint64_t, BigInt> marginal() const {
    std::map<std::uint64_t, BigInt> out;
    for (const auto& [key, c] : counts) out[key.first] += c;
    return out;
  }
  friend bool operator==(const JointDistribution& a, const JointDistribution& b) {
    return a.n == b.n && a.k == b.k && a.counts == b.counts;
  }
};

inline JointDistribution exact_joint_distribution(const Hypergraph& h, std::size_t k, const EnumerationOptions& opt = {}) {
  detail::check_work(h, k, opt.ceiling);
  std::size_t max_l = 0;
  for (unsigned i = 1; i <= h.rank(); ++i) max_l += to_u64(binomial(k, i));
  max_l = std::min(max_l, h.num_edges());
  const std::size_t width = k + 1;
  using Table = std::vector<std::uint64_t>;
  auto tables = detail::partitioned_subsets<Table>(
      h, k, opt.jobs, [&] { return Table((max_l + 1) * width, 0); },
      [&](Table& t, VertexSet, std::size_t e, std::size_t m) { ++t[e * width + m]; });
  std::vector<std::uint64_t> sum((max_l + 1) * width, 0);
  for (const auto& t : tables)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += t[i];
  JointDistribution d{h.n(), k, {}};
  for (std::size_t l = 0; l <= max_l; ++l)
    for (std::size_t m = 0; m < width; ++m)
      if (auto c = sum[l * width + m]) d.counts[{l, m}] = from_u64(c);
  return d;
}

/// Reference enumerator: every vertex subset of the right size, every edge scanned. Shares no code
/// with the incremental engine and exists to cross-check it.
inline JointDistribution naive_joint_distribution(const Hypergraph& h, std::size_t k) {
  if (h.n() > 24) throw RefusalError("naive enumeration is limited to n <= 24");
  if (k < 1 || k > h.n()) throw InputError("need 1 <= k <= n");
  const auto edges = h.edge_lists();
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> raw;
  for (std::uint32_t s = 0; s < (std::uint32_t(1) << h.n()); ++s) {
    if (static_cast<std::size_t>(__builtin_popcount(s)) != k) continue;
    std::uint64_t e = 0;
    std::uint32_t covered = 0;
    for (const auto& ed : edges) {
      std::uint32_t m = 0;
      for (Vertex v : ed) m |= std::uint32_t(1) << v;
      if ((m & s) == m) {
        ++e;
        covered |= m;
      }
    }
    ++raw[{e, static_cast<std::uint64_t>(__builtin_popcount(covered))}];
  }
  JointDistribution d{h.n(), k, {}};
  for (const auto& [key, c] : raw) d.counts[key] = from_u64(c);
  return d;
}

/// I(H, k, l) as an exact reduced fraction.
inline Rational I_value(const JointDistribution& d, std::uint64_t l) {
  Rational q(d.count_l(l), binomial(d.n, d.k));
  q.canonicalize();
  return q;
}

inline Rational I_value(const Hypergraph& h, std::size_t k, std::uint64_t l, const EnumerationOptions& opt = {}) {
  return I_value(exact_joint_distribution(h, k, opt), l);
}

/// Subsets with e(A) = l and lo <= m(A) <= hi, the endpoints being exact reals of the form q*sqrt(s).
inline BigInt count_with_m_range(const JointDistribution& d, std::uint64_t l, const SqrtRational& lo, const SqrtRational& hi) {
  BigInt t = 0;
  for (auto it = d.counts.lower_bound({l, 0}); it != d.counts.end() && it->first.first == l; ++it) {
    Rational m(from_u64(it->first.second));
    if (lo.leq(m) && hi.geq(m)) t += it->second;
  }
  return t;
}

inline BigInt count_with_m_range(const Hypergraph& h, std::size_t k, std::uint64_t l, const Rational& lo, const Rational& hi,
                                 const EnumerationOptions& opt = {}) {
  return count_with_m_range(exact_joint_distribution(h, k, opt), l, SqrtRational::rational(lo), SqrtRational::rational(hi));
}

/// k-subsets inducing a forest with exactly l edges.
inline BigInt count_forest_subsets(const Hypergraph& g, std::size_t k, std::uint64_t l, const EnumerationOptions& opt = {}) {
  if (g.rank() != 2 || (g.num_edges() > 0 && !g.is_graph()))
    throw InputError("count_forest_subsets needs a simple graph (rank 2, edges of size 2)");
  detail::check_work(g, k, opt.ceiling);
  auto accs = detail::partitioned_subsets<std::uint64_t>(
      g, k, opt.jobs, [] { return std::uint64_t{0}; },
      [&](std::uint64_t& acc, VertexSet a, std::size_t e, std::size_t) {
        if (e != l) return;
        // acyclic iff e = |A| - #components
        std::size_t comps = 0;
        VertexSet left = a;
        while (!left.empty()) {
          ++comps;
          VertexSet frontier = VertexSet::single(left.lowest());
          left -= frontier;
          while (!frontier.empty()) {
            Vertex v = frontier.lowest();
            frontier.erase(v);
            VertexSet nb = g.neighbors(v) & left;
            left -= nb;
            frontier |= nb;
          }
        }
        acc += (e + comps == k);
      });
  BigInt t = 0;
  for (auto c : accs) t += from_u64(c);
  return t;
}

// ---------------------------------------------------------------- Monte Carlo

struct SampleEstimate {
  double estimate = 0, lo = 0, hi = 0;
  std::uint64_t successes = 0, samples = 0, seed = 0;
  double level = 0.99;
};

/// Wilson score interval.
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t samples, double level) {
  if (samples == 0) throw InputError("wilson_interval: zero samples");
  if (!(level > 0 && level < 1)) throw InputError("confidence level must lie in (0,1)");
  boost::math::normal_distribution<double> nd;
  const double z = boost::math::quantile(nd, 1 - (1 - level) / 2);
  const double nn = static_cast<double>(samples), p = static_cast<double>(successes) / nn;
  const double z2 = z * z, denom = 1 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

namespace detail {

/// e(A) for a sorted k-subset of an arbitrary-size hypergraph.
class SampleCounter {
 public:
  explicit SampleCounter(const Hypergraph& h) : h_(h) {
    for (unsigned i = 1; i <= std::min(h.max_edge_size(), 4u); ++i) sizes_.push_back(i);
  }

  std::size_t count(const std::vector<Vertex>& a) const {
    if (h_.bitmask() && h_.num_edges() <= 64) return edges_within(h_, VertexSet::of(a));
    std::size_t inc_cost = 0;
    for (Vertex v : a) inc_cost += h_.degree(v);
    double lookup_cost = 0;
    if (h_.max_edge_size() <= 4)
      for (unsigned i : sizes_) lookup_cost += binomial(a.size(), i).get_d();
    else
      lookup_cost = 1e300;
    if (static_cast<double>(inc_cost) <= lookup_cost) return edges_within_list(h_, a);
    return by_lookup(a);
  }

 private:
  std::size_t by_lookup(const std::vector<Vertex>& a) const {
    std::size_t c = 0, k = a.size();
    Vertex buf[4];
    for (unsigned s : sizes_) {
      std::vector<std::size_t> idx(s);
      for (std::size_t i = 0; i < s; ++i) idx[i] = i;
      if (s > k) continue;
      for (;;) {
        for (std::size_t i = 0; i < s; ++i) buf[i] = a[idx[i]];
        c += h_.has_sorted({buf, s});
        std::size_t i = s;
        while (i > 0 && idx[i - 1] == k - s + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    return c;
  }

  const Hypergraph& h_;
  std::vector<unsigned> sizes_;
};

}  // namespace detail

inline constexpr std::uint64_t kSampleBlock = 4096;

/// Fraction of uniform k-subsets with e(A) = l. Block b of kSampleBlock samples draws from
/// Philox(seed, stream = b), so results do not depend on the worker count.
inline SampleEstimate monte_carlo_estimate(const Hypergraph& h, std::size_t k, std::uint64_t l, std::uint64_t samples,
                                           std::uint64_t seed, double level = 0.99, unsigned jobs = 1) {
  if (samples < 1) throw InputError("samples must be >= 1");
  if (k < 1 || k > h.n()) throw InputError("need 1 <= k <= n");
  detail::SampleCounter counter(h);
  const std::uint64_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  auto run_block = [&](std::uint64_t b) {
    Philox rng(seed, b);
    std::uint64_t todo = std::min(kSampleBlock, samples - b * kSampleBlock), c = 0;
    for (std::uint64_t i = 0; i < todo; ++i) c += counter.count(rng.k_subset(h.n(), k)) == l;
    hits[b] = c;
  };
  jobs = std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(jobs, blocks)));
  if (jobs == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::uint64_t b; (b = next.fetch_add(1)) < blocks;) run_block(b);
      });
    for (auto& t : pool) t.join();
  }
  SampleEstimate est;
  for (auto c : hits) est.successes += c;
  est.samples = samples;
  est.seed = seed;
  est.level = level;
  est.estimate = static_cast<double>(est.successes) / static_cast<double>(samples);
  std::tie(est.lo, est.hi) = wilson_interval(est.successes, samples, level);
  return est;
}

// ---------------------------------------------------------------- serialization

inline nlohmann::json to_json(const JointDistribution& d) {
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& [key, c] : d.counts) counts.push_back({key.first, key.second, c.get_str()});
  return {{"n", d.n}, {"k", d.k}, {"counts", counts}};
}

inline JointDistribution distribution_from_json(const nlohmann::json& j) {
  try {
    JointDistribution d{j.at("n").get<std::size_t>(), j.at("k").get<std::size_t>(), {}};
    for (const auto& row : j.at("counts")) {
      if (!row.is_array() || row.size() != 3) throw InputError("distribution row must be [l, m, \"count\"]");
      BigInt c = parse_bigint(row[2].get<std::string>());
      if (c < 0) throw InputError("negative count");
      if (c != 0) d.counts[{row[0].get<std::uint64_t>(), row[1].get<std::uint64_t>()}] += c;
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed distribution JSON: ") + e.what());
  }
}

inline std::string to_csv(const JointDistribution& d) {
  std::ostringstream out;
  out << "l,m,count\n";
  for (const auto& [key, c] : d.counts) out << key.first << ',' << key.second << ',' << c.get_str() << '\n';
  return out.str();
}

/// CSV carries no n, k; the caller supplies them. Lines starting with '#' are skipped.
inline JointDistribution distribution_from_csv(const std::string& text, std::size_t n, std::size_t k) {
  std::istringstream in(text);
  std::string line;
  JointDistribution d{n, k, {}};
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      if (line != "l,m,count") throw InputError("CSV header must be 'l,m,count'");
      header = false;
      continue;
    }
    auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw InputError("bad CSV row: " + line);
    BigInt l = parse_bigint(line.substr(0, c1)), m = parse_bigint(line.substr(c1 + 1, c2 - c1 - 1));
    BigInt c = parse_bigint(line.substr(c2 + 1));
    if (c != 0) d.counts[{to_u64(l), to_u64(m)}] += c;
  }
  return d;
}

inline nlohmann::json to_json(const SampleEstimate& s) {
  return {{"estimate", s.estimate}, {"lo", s.lo}, {"hi", s.hi}, {"successes", s.successes},
          {"samples", s.samples}, {"seed", s.seed}, {"level", s.level}};
}

}  // namespace edgestat
