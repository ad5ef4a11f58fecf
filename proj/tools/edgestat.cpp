#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "edgestat/io.hpp"
#include "edgestat/suites.hpp"
#include "json.hpp"

#ifndef EDGESTAT_VERSION
#define EDGESTAT_VERSION "0.0.0"
#endif

using namespace edgestat;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0, kExitViolation = 1, kExitUsage = 2;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr)) throw std::runtime_error("sha256 failed");
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

// SOURCE_DATE_EPOCH pins the clock for reproducible artifacts.
std::string timestamp() {
  std::time_t t;
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH"); e && *e) {
    try {
      t = static_cast<std::time_t>(std::stoll(e));
    } catch (const std::exception&) {
      throw InputError("SOURCE_DATE_EPOCH must be an integer");
    }
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

struct Manifest {
  std::string subcommand;
  json parameters = json::object();
  json seeds = json::object();
  json inputs = json::array();
  std::string time = timestamp();

  void input(const std::string& path, const std::string& bytes) {
    inputs.push_back({{"path", path}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
  }
  json to_json() const {
    return {{"subcommand", subcommand}, {"parameters", parameters}, {"seeds", seeds},
            {"version", EDGESTAT_VERSION},  {"inputs", inputs},         {"timestamp", time}};
  }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, Manifest& m) {
  if (flag) {
    m.seeds["seed"] = {{"value", *flag}, {"source", "flag"}};
    return *flag;
  }
  std::random_device rd;
  std::uint64_t v = (std::uint64_t(rd()) << 32) ^ rd();
  m.seeds["seed"] = {{"value", v}, {"source", "entropy"}};
  return v;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path + "'");
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_file(out, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_with_manifest(const Manifest& m, const std::string& csv) { return "# manifest: " + m.to_json().dump() + "\n" + csv; }

// ---------------------------------------------------------------- graph sources

struct Source {
  std::string graph;
  std::string kind;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> m, r, s, ell;
  bool round = false;

  void add(CLI::App* app, bool with_graph = true) {
    if (with_graph) app->add_option("--graph", graph, "hypergraph file (hypercore text, or .edges/.el edge list)");
    app->add_option("--construct", kind, "construction kind");
    app->add_option("--n", n, "construction: vertex count");
    app->add_option("--m", m, "construction: m");
    app->add_option("--r", r, "construction or statement: rank r");
    app->add_option("--s", s, "construction: s");
    app->add_option("--l", ell, "edge count l");
    app->add_flag("--round", round, "construction: round block sizes instead of requiring divisibility");
  }

  ConstructionSpec spec(std::uint64_t k, const std::optional<std::uint64_t>& seed_flag, Manifest& man) const {
    ConstructionSpec c;
    c.kind = construction_kind(kind);
    c.n = n;
    c.k = k;
    c.m = m;
    c.r = r;
    c.s = s;
    c.ell = ell;
    c.round = round;
    if (is_randomized(c.kind)) c.seed = resolve_seed(seed_flag, man);
    return c;
  }
};

struct Loaded {
  std::string name;
  Hypergraph graph;
};

Loaded load_file(const std::string& path, const std::string& name, Manifest& man) {
  std::string text = read_text_file(path);
  man.input(name, text);
  return {name, parse_hypergraph_named(path, text)};
}

Loaded load_source(const Source& src, std::uint64_t k, const std::optional<std::uint64_t>& seed, Manifest& man) {
  if (src.graph.empty() == src.kind.empty()) throw InputError("give exactly one of --graph or --construct");
  if (!src.graph.empty()) {
    man.parameters["graph"] = src.graph;
    return load_file(src.graph, src.graph, man);
  }
  auto spec = src.spec(k, seed, man);
  man.parameters["construction"] = to_json(spec);
  return {"construct:" + to_json(spec).dump(), build(spec)};
}

json marginal_json(const std::map<std::uint64_t, BigInt>& m) {
  json j = json::object();
  for (const auto& [l, c] : m) j[std::to_string(l)] = c.get_str();
  return j;
}

// Block constructions too large to enumerate: the law of e(A) is a hypergeometric pushforward.
std::optional<json> pushforward(const ConstructionSpec& c) {
  std::uint64_t block;
  std::function<std::uint64_t(std::uint64_t)> f;
  const std::uint64_t k = c.k;
  switch (c.kind) {
    case ConstructionKind::bipartite_kminus1:
      block = bipartite_small_part(c.n, k, c.round);
      f = [k](std::uint64_t b) { return b * (k - b); };
      break;
    case ConstructionKind::planted_clique:
      if (!c.m) throw InputError("planted_clique needs parameter m");
      block = clique_block(c.n, k, *c.m, c.round);
      f = [](std::uint64_t b) { return b * (b - 1) / 2; };
      break;
    case ConstructionKind::r_clique: {
      if (!c.m || !c.r) throw InputError("r_clique needs parameters m and r");
      block = clique_block(c.n, k, *c.m, c.round);
      std::uint64_t r = *c.r;
      f = [r](std::uint64_t b) { return to_u64(binomial(b, r)); };
      break;
    }
    default: return std::nullopt;
  }
  json j = json::object();
  for (const auto& [l, p] : block_pushforward(c.n, block, k, f)) j[std::to_string(l)] = to_string(p);
  return json{{"block", block}, {"probabilities", j}};
}

// ---------------------------------------------------------------- dist / sample

struct DistArgs {
  Source src;
  std::uint64_t k = 0;
  bool exact = false;
  std::optional<std::uint64_t> samples, seed;
  double level = 0.99;
  std::string format = "json", out;
  unsigned jobs = 1;
};

json sample_json(const Hypergraph& h, const DistArgs& a, std::uint64_t seed) {
  if (!a.src.ell) throw InputError("sampling needs --l");
  return to_json(monte_carlo_estimate(h, a.k, *a.src.ell, *a.samples, seed, a.level, a.jobs));
}

int run_dist(DistArgs a, const std::string& sub) {
  Manifest man;
  man.subcommand = sub;
  if (sub == "sample" && !a.samples) throw InputError("sample needs --samples");
  if (a.exact && a.samples) throw InputError("--exact and --samples are exclusive");
  const bool sampling = a.samples.has_value();
  man.parameters["k"] = a.k;
  man.parameters["mode"] = sampling ? "sample" : "exact";
  if (sampling) {
    man.parameters["samples"] = *a.samples;
    man.parameters["level"] = a.level;
    if (a.src.ell) man.parameters["l"] = *a.src.ell;
  }
  man.parameters["format"] = a.format;
  if (a.format != "json" && a.format != "csv") throw InputError("--format is json or csv");

  // Exact laws of big block constructions never materialise the graph.
  if (!sampling && !a.src.kind.empty() && a.src.n > kMaxBitmaskVertices) {
    auto spec = a.src.spec(a.k, a.seed, man);
    man.parameters["construction"] = to_json(spec);
    auto pf = pushforward(spec);
    if (!pf) throw InputError(to_string(spec.kind) + " on n > " + std::to_string(kMaxBitmaskVertices) + " vertices has no exact pushforward; use --samples");
    if (a.format == "csv") {
      std::string csv = "l,probability\n";
      for (const auto& [l, p] : (*pf)["probabilities"].items()) csv += l + "," + p.get<std::string>() + "\n";
      emit(csv_with_manifest(man, csv), a.out);
    } else {
      emit(dump({{"manifest", man.to_json()}, {"pushforward", *pf}}), a.out);
    }
    return kExitOk;
  }

  std::optional<std::uint64_t> seed;
  Loaded g = load_source(a.src, a.k, a.seed, man);
  if (sampling) seed = man.seeds.contains("seed") ? man.seeds["seed"]["value"].get<std::uint64_t>() : resolve_seed(a.seed, man);
  if (sampling) {
    json est = sample_json(g.graph, a, *seed);
    if (a.format == "csv") {
      std::ostringstream csv;
      csv << "l,successes,samples,estimate,lo,hi\n"
          << *a.src.ell << ',' << est["successes"] << ',' << est["samples"] << ',' << est["estimate"] << ',' << est["lo"] << ',' << est["hi"] << '\n';
      emit(csv_with_manifest(man, csv.str()), a.out);
    } else {
      emit(dump({{"manifest", man.to_json()}, {"estimate", est}}), a.out);
    }
    return kExitOk;
  }
  EnumerationOptions opt;
  opt.jobs = a.jobs;
  auto d = exact_joint_distribution(g.graph, a.k, opt);
  if (a.format == "csv") {
    emit(csv_with_manifest(man, to_csv(d)), a.out);
  } else {
    emit(dump({{"manifest", man.to_json()},
               {"distribution", to_json(d)},
               {"marginal", marginal_json(d.marginal())},
               {"total", d.total().get_str()}}),
         a.out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- construct

int run_construct(const Source& src, std::uint64_t k, const std::optional<std::uint64_t>& seed, const std::string& out) {
  Manifest man;
  man.subcommand = "construct";
  if (src.kind.empty()) throw InputError("construct needs --construct KIND");
  auto spec = src.spec(k, seed, man);
  man.parameters["construction"] = to_json(spec);
  Hypergraph h = build(spec);
  emit(format_hypergraph(h, {"construction: " + to_json(spec).dump(), "manifest: " + man.to_json().dump()}), out);
  return kExitOk;
}

// ---------------------------------------------------------------- check-bounds

struct BoundArgs {
  std::vector<std::string> graphs;
  std::string corpus, construct, out, csv, out_dir;
  std::vector<std::string> specs;
  std::vector<std::uint64_t> ks, ls;
  std::optional<unsigned> r;
  std::string c, c_prime, eps;
  bool assume_large_k = false;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

std::string spec_label(const BoundSpec& s) {
  std::string out = to_string(s.id) + ";r=" + std::to_string(s.r) + ";k=" + std::to_string(s.k) + ";l=" + std::to_string(s.l);
  if (s.c) out += ";c=" + to_string(*s.c);
  if (s.c_prime) out += ";c_prime=" + to_string(*s.c_prime);
  if (s.eps) out += ";eps=" + to_string(*s.eps);
  if (s.assume_large_k) out += ";assume_large_k";
  return out;
}

std::string file_stem(const std::string& name) {
  std::string s;
  for (char ch : name) s += std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ? ch : '_';
  return s;
}

struct Row {
  std::string graph;
  BoundReport rep;
};

int run_check_bounds(BoundArgs a) {
  Manifest man;
  man.subcommand = "check-bounds";
  if (a.specs.empty()) throw InputError("give at least one --spec");
  std::vector<BoundId> ids;
  for (const auto& s : a.specs) ids.push_back(bound_id(s));
  man.parameters["specs"] = a.specs;
  if (!a.ks.empty()) man.parameters["k"] = a.ks;
  if (!a.ls.empty()) man.parameters["l"] = a.ls;
  if (a.r) man.parameters["r"] = *a.r;
  if (!a.c.empty()) man.parameters["c"] = a.c;
  if (!a.c_prime.empty()) man.parameters["c_prime"] = a.c_prime;
  if (!a.eps.empty()) man.parameters["eps"] = a.eps;
  man.parameters["assume_large_k"] = a.assume_large_k;
  std::optional<Rational> c, c_prime, eps;
  if (!a.c.empty()) c = parse_rational(a.c);
  if (!a.c_prime.empty()) c_prime = parse_rational(a.c_prime);
  if (!a.eps.empty()) eps = parse_rational(a.eps);

  std::vector<Loaded> graphs;
  if (!a.corpus.empty()) {
    man.parameters["corpus"] = a.corpus;
    if (!fs::is_directory(a.corpus)) throw InputError("corpus '" + a.corpus + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.corpus)) {
      auto ext = e.path().extension().string();
      if (e.is_regular_file() && (ext == ".txt" || ext == ".hg" || ext == ".edges" || ext == ".el")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) graphs.push_back(load_file(f.string(), f.filename().string(), man));
  }
  if (!a.graphs.empty()) man.parameters["graphs"] = a.graphs;
  for (const auto& g : a.graphs) graphs.push_back(load_file(g, g, man));
  if (!a.construct.empty()) {
    ConstructionSpec spec;
    try {
      spec = construction_from_json(json::parse(a.construct));
    } catch (const json::exception& e) {
      throw InputError(std::string("--construct: ") + e.what());
    }
    if (is_randomized(spec.kind) && !spec.seed) spec.seed = resolve_seed(a.seed, man);
    man.parameters["construction"] = to_json(spec);
    graphs.push_back({"construct:" + to_json(spec).dump(), build(spec)});
  }
  if (graphs.empty()) throw InputError("no graphs: give --corpus, --graph or --construct");

  // One work item per graph; rows merge in corpus order.
  std::vector<std::vector<Row>> rows(graphs.size());
  std::vector<std::string> errors(graphs.size());
  auto work = [&](std::size_t gi) {
    const Hypergraph& h = graphs[gi].graph;
    const unsigned r = a.r.value_or(std::max(2u, h.max_edge_size()));
    std::vector<std::uint64_t> ks = a.ks;
    if (ks.empty())
      for (std::uint64_t k = 2; k <= h.n(); ++k) ks.push_back(k);
    for (auto k : ks) {
      auto d = exact_joint_distribution(h, k);
      std::vector<std::uint64_t> ls = a.ls;
      if (ls.empty()) {
        std::uint64_t top = 0;
        for (const auto& [key, cnt] : d.counts) top = std::max(top, key.first);
        for (std::uint64_t l = 1; l <= top; ++l) ls.push_back(l);
      }
      for (auto l : ls)
        for (auto id : ids) {
          BoundSpec s;
          s.id = id;
          s.r = r;
          s.k = k;
          s.l = l;
          s.c = c;
          s.c_prime = c_prime;
          s.eps = eps;
          s.assume_large_k = a.assume_large_k;
          BoundReport rep = id == BoundId::thm_forest ? check_forest_bound(h, k, l) : check_bound(d, h.max_edge_size(), s);
          rep.spec = s;
          rows[gi].push_back({graphs[gi].name, std::move(rep)});
        }
    }
  };
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < graphs.size();) {
      try {
        work(i);
      } catch (const std::exception& e) {
        errors[i] = graphs[i].name + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::max(1u, a.jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw InputError(e);

  std::map<std::string, std::uint64_t> summary = {{"pass", 0}, {"vacuous", 0}, {"fail", 0}, {"inapplicable", 0}};
  json reports = json::array();
  std::ostringstream csv;
  csv << "graph,spec,observed,bound,pass,slack\n";
  std::vector<std::string> violations;
  const json mj = man.to_json();
  if (!a.out_dir.empty()) fs::create_directories(a.out_dir);
  for (const auto& rs : rows)
    for (const auto& row : rs) {
      const auto v = row.rep.verdict();
      ++summary[v];
      json rj = to_json(row.rep);
      rj["graph"] = row.graph;
      reports.push_back(rj);
      std::ostringstream slack;
      slack << std::setprecision(12) << row.rep.slack();
      csv << row.graph << ',' << spec_label(row.rep.spec) << ',' << (row.rep.applicable ? row.rep.observed.get_str() : "") << ','
          << (row.rep.applicable ? row.rep.bound.lower_str() : "") << ',' << v << ',' << (row.rep.applicable ? slack.str() : "") << '\n';
      if (v == "fail") violations.push_back(row.graph + " " + spec_label(row.rep.spec) + " observed " + row.rep.observed.get_str() + " > " + row.rep.bound.lower_str());
      if (!a.out_dir.empty()) {
        std::string name = file_stem(row.graph) + "." + to_string(row.rep.spec.id) + ".k" + std::to_string(row.rep.spec.k) + ".l" + std::to_string(row.rep.spec.l) + ".json";
        write_file((fs::path(a.out_dir) / name).string(), dump({{"manifest", mj}, {"report", rj}}));
      }
    }
  json js = json::object();
  for (const auto& [k, v] : summary) js[k] = v;
  if (!a.out_dir.empty()) write_file((fs::path(a.out_dir) / "summary.csv").string(), csv_with_manifest(man, csv.str()));
  if (!a.csv.empty()) emit(csv_with_manifest(man, csv.str()), a.csv);
  emit(dump({{"manifest", mj}, {"summary", js}, {"reports", reports}}), a.out);
  for (const auto& v : violations) std::cerr << "violation: " << v << '\n';
  return violations.empty() ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- check-lemmas

struct LemmaArgs {
  std::string suite, out;
  std::optional<std::size_t> max_n;
  std::optional<std::uint64_t> samples, seed;
  bool all_records = false;
  unsigned jobs = 1;
};

int run_check_lemmas(const LemmaArgs& a) {
  Manifest man;
  man.subcommand = "check-lemmas";
  man.parameters["suite"] = a.suite;
  if (a.max_n) man.parameters["max_n"] = *a.max_n;
  if (a.samples) man.parameters["samples"] = *a.samples;
  man.parameters["all_records"] = a.all_records;
  SuiteOptions o;
  o.max_n = a.max_n.value_or(0);
  o.samples = a.samples.value_or(0);
  o.jobs = a.jobs;
  o.all_records = a.all_records;
  std::vector<std::string> names;
  if (a.suite == "all")
    for (const auto& [n, f] : suite_registry()) names.push_back(n);
  else
    names.push_back(a.suite);
  // Only the sampling suites consume a seed; the others stay free of entropy.
  bool random = false;
  for (const auto& n : names) random = random || n == "count-lemmas" || n == "envelopes" || n == "constructions";
  if (random) o.seed = resolve_seed(a.seed, man);
  json suites = json::array();
  bool ok = true;
  std::vector<std::string> violations;
  for (const auto& n : names) {
    auto rep = run_suite(n, o);
    ok = ok && rep.pass();
    for (const auto& rec : rep.body.records)
      if (rec.verdict == "fail" || rec.verdict == "undecided")
        violations.push_back(n + " " + rec.claim + " " + rec.verdict + " " + rec.instance.dump() + " lhs=" + rec.lhs + " rhs=" + rec.rhs);
    if (rep.checked() == 0) violations.push_back(n + ": nothing checked");
    suites.push_back(to_json(rep));
  }
  emit(dump({{"manifest", man.to_json()}, {"pass", ok}, {"suites", suites}}), a.out);
  const std::size_t shown = std::min<std::size_t>(violations.size(), 50);
  for (std::size_t i = 0; i < shown; ++i) std::cerr << "violation: " << violations[i] << '\n';
  if (violations.size() > shown) std::cerr << "... " << violations.size() - shown << " more\n";
  return ok ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- search

struct SearchArgs {
  std::size_t n = 0, k = 0;
  std::uint64_t l = 0;
  unsigned r = 2;
  std::string method, config, init, results, out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

int run_search(const SearchArgs& a) {
  Manifest man;
  man.subcommand = "search";
  man.parameters["n"] = a.n;
  man.parameters["k"] = a.k;
  man.parameters["l"] = a.l;
  man.parameters["r"] = a.r;
  SearchConfig cfg;
  if (!a.config.empty()) {
    std::string text = read_text_file(a.config);
    man.input(a.config, text);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw InputError("config '" + a.config + "': " + e.what());
    }
    cfg = search_config_from_json(j);
  }
  SearchMethod method = a.method.empty() ? (a.config.empty() ? SearchMethod::exhaustive : cfg.method) : search_method(a.method);
  cfg.method = method == SearchMethod::exhaustive ? cfg.method : method;
  man.parameters["method"] = to_string(method);
  SearchResult res;
  if (method == SearchMethod::exhaustive) {
    res = exhaustive_extremal(a.n, a.k, a.l, a.r, a.jobs);
  } else {
    man.parameters["config"] = to_json(cfg);
    std::optional<Hypergraph> init;
    if (!a.init.empty()) {
      init = load_file(a.init, a.init, man).graph;
      man.parameters["init_graph"] = a.init;
    }
    std::uint64_t seed = resolve_seed(a.seed, man);
    res = local_search(a.n, a.k, a.l, a.r, cfg, seed, a.jobs, init);
  }
  json cons = json::array();
  for (const auto& c : construction_lower_bounds(a.n, a.k, a.l, a.r)) cons.push_back({{"name", c.name}, {"value", to_string(c.value)}});
  const std::string text = dump({{"manifest", man.to_json()}, {"result", to_json(res)}, {"constructions", cons}});
  if (!a.results.empty()) {
    fs::create_directories(a.results);
    std::string name = "n" + std::to_string(a.n) + "-k" + std::to_string(a.k) + "-l" + std::to_string(a.l) + "-r" + std::to_string(a.r) + "-" +
                       to_string(method) + "-seed" + (res.seed ? std::to_string(*res.seed) : std::string("none")) + ".json";
    write_file((fs::path(a.results) / name).string(), text);
  }
  if (a.results.empty() || !a.out.empty()) emit(text, a.out);
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string results, format = "json", out;
  bool monotone = false;
  std::size_t k = 3, from = 3, to = 7;
  std::uint64_t l = 1;
  unsigned r = 2;
  unsigned jobs = 1;
};

int run_report(const ReportArgs& a) {
  Manifest man;
  man.subcommand = "report";
  man.parameters["format"] = a.format;
  if (a.format != "json" && a.format != "csv") throw InputError("--format is json or csv");
  if (a.monotone == !a.results.empty()) throw InputError("give exactly one of --results DIR or --monotone");
  if (a.monotone) {
    man.parameters["monotone"] = {{"k", a.k}, {"l", a.l}, {"r", a.r}, {"from", a.from}, {"to", a.to}};
    auto rep = verify_monotone_in_n(a.k, a.l, a.r, a.from, a.to, a.jobs);
    if (a.format == "csv") {
      std::string csv = "n,value,value_approx,witness_edges,dominates_constructions\n";
      for (const auto& row : rep.rows)
        csv += std::to_string(row.n) + "," + to_string(row.value) + "," + std::to_string(row.value.get_d()) + "," +
               std::to_string(row.witness.num_edges()) + "," + (row.dominates_constructions ? "true" : "false") + "\n";
      emit(csv_with_manifest(man, csv), a.out);
    } else {
      emit(dump({{"manifest", man.to_json()}, {"monotone", to_json(rep)}}), a.out);
    }
    return rep.pass() ? kExitOk : kExitViolation;
  }
  man.parameters["results"] = a.results;
  if (!fs::is_directory(a.results)) throw InputError("results '" + a.results + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.results))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json rows = json::array();
  std::string csv = "file,n,k,l,r,method,seed,best_value,best_value_approx,witness_edges\n";
  for (const auto& f : files) {
    std::string text = read_text_file(f.string());
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception&) {
      continue;
    }
    if (!j.is_object() || !j.contains("result")) continue;
    man.input(f.filename().string(), text);
    SearchResult s = search_result_from_json(j["result"]);
    json row = {{"file", f.filename().string()},
                {"n", s.n},
                {"k", s.k},
                {"l", s.l},
                {"r", s.r},
                {"method", to_string(s.method)},
                {"seed", s.seed ? json(*s.seed) : json(nullptr)},
                {"best_value", to_string(s.best_value)},
                {"best_value_approx", s.best_value.get_d()},
                {"witness_edges", s.witness.num_edges()}};
    rows.push_back(row);
    csv += f.filename().string() + "," + std::to_string(s.n) + "," + std::to_string(s.k) + "," + std::to_string(s.l) + "," +
           std::to_string(s.r) + "," + to_string(s.method) + "," + (s.seed ? std::to_string(*s.seed) : "") + "," +
           to_string(s.best_value) + "," + row["best_value_approx"].dump() + "," + std::to_string(s.witness.num_edges()) + "\n";
  }
  if (a.format == "csv")
    emit(csv_with_manifest(man, csv), a.out);
  else
    emit(dump({{"manifest", man.to_json()}, {"rows", rows}}), a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edgestat: induced edge statistics of graphs and hypergraphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EDGESTAT_VERSION);

  auto add_common = [](CLI::App* s, std::optional<std::uint64_t>& seed, unsigned& jobs, std::string& out) {
    s->add_option("--seed", seed, "seed for all randomness; drawn from system entropy when omitted");
    s->add_option("--jobs", jobs, "worker threads; outputs do not depend on it")->check(CLI::Range(1u, 1024u));
    s->add_option("--out", out, "output file (default stdout)");
  };

  DistArgs dist, sample;
  for (auto [name, args] : {std::pair{"dist", &dist}, std::pair{"sample", &sample}}) {
    auto* s = app.add_subcommand(name, std::string(name) == "dist" ? "exact or sampled distribution of e(A)" : "Monte Carlo estimate of I(G, k, l)");
    args->src.add(s);
    s->add_option("--k", args->k, "subset size")->required();
    if (std::string(name) == "dist") s->add_flag("--exact", args->exact, "exact enumeration (default)");
    s->add_option("--samples", args->samples, "sample count");
    s->add_option("--level", args->level, "confidence level of the Wilson interval");
    s->add_option("--format", args->format, "json or csv");
    add_common(s, args->seed, args->jobs, args->out);
  }

  Source csrc;
  std::uint64_t ck = 0;
  std::optional<std::uint64_t> cseed;
  std::string cout_path;
  unsigned cjobs = 1;
  auto* construct = app.add_subcommand("construct", "write a construction as a hypergraph file");
  csrc.add(construct, false);
  construct->add_option("--k", ck, "construction parameter k")->required();
  add_common(construct, cseed, cjobs, cout_path);

  BoundArgs bounds;
  auto* cb = app.add_subcommand("check-bounds", "check bound statements against exact counts");
  cb->add_option("--corpus", bounds.corpus, "directory of hypergraph files");
  cb->add_option("--graph", bounds.graphs, "hypergraph file (repeatable)");
  cb->add_option("--construct", bounds.construct, "construction spec as JSON, e.g. {\"kind\":\"bipartite_kminus1\",\"n\":12,\"k\":4}");
  cb->add_option("--spec", bounds.specs, "bound id (repeatable)")->required();
  cb->add_option("--k", bounds.ks, "subset sizes (default 2..n)");
  cb->add_option("--l", bounds.ls, "edge counts (default 1..largest observed)");
  cb->add_option("--r", bounds.r, "rank r in the statement (default max(2, largest edge))");
  cb->add_option("--c", bounds.c, "c");
  cb->add_option("--c-prime", bounds.c_prime, "c'");
  cb->add_option("--eps", bounds.eps, "epsilon");
  cb->add_flag("--assume-large-k", bounds.assume_large_k, "acknowledge the 'k sufficiently large' hypothesis");
  cb->add_option("--csv", bounds.csv, "CSV summary file");
  cb->add_option("--out-dir", bounds.out_dir, "directory for one JSON report per (graph, spec) plus summary.csv");
  add_common(cb, bounds.seed, bounds.jobs, bounds.out);

  LemmaArgs lemmas;
  auto* cl = app.add_subcommand("check-lemmas", "run a small-instance suite");
  std::string suite_help = "suite name or 'all':";
  for (const auto& [n, f] : suite_registry()) suite_help += " " + n;
  cl->add_option("suite", lemmas.suite, suite_help)->required();
  cl->add_option("--max-n", lemmas.max_n, "largest vertex count");
  cl->add_option("--samples", lemmas.samples, "random samples where the suite draws any");
  cl->add_flag("--all-records", lemmas.all_records, "keep passing records too");
  add_common(cl, lemmas.seed, lemmas.jobs, lemmas.out);

  SearchArgs search;
  auto* cs = app.add_subcommand("search", "extremal search for I(n, k, l)");
  cs->add_option("--n", search.n, "vertices")->required();
  cs->add_option("--k", search.k, "subset size")->required();
  cs->add_option("--l", search.l, "edge count")->required();
  cs->add_option("--r", search.r, "uniformity (2 for graphs)");
  cs->add_option("--method", search.method, "exhaustive, local or anneal");
  cs->add_option("--config", search.config, "JSON search config");
  cs->add_option("--init", search.init, "starting hypergraph file for local search");
  cs->add_option("--results", search.results, "results directory");
  add_common(cs, search.seed, search.jobs, search.out);

  ReportArgs report;
  std::optional<std::uint64_t> rseed;
  auto* cr = app.add_subcommand("report", "summarise search results or tabulate I(n, k, l) against n");
  cr->add_option("--results", report.results, "results directory written by search");
  cr->add_flag("--monotone", report.monotone, "exhaustive I(n, k, l) for n in [from, to]");
  cr->add_option("--k", report.k, "k for --monotone");
  cr->add_option("--l", report.l, "l for --monotone");
  cr->add_option("--r", report.r, "r for --monotone");
  cr->add_option("--from", report.from, "first n for --monotone");
  cr->add_option("--to", report.to, "last n for --monotone");
  cr->add_option("--format", report.format, "json or csv");
  add_common(cr, rseed, report.jobs, report.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*app.get_subcommand("dist")) return run_dist(dist, "dist");
    if (*app.get_subcommand("sample")) return run_dist(sample, "sample");
    if (*construct) return run_construct(csrc, ck, cseed, cout_path);
    if (*cb) return run_check_bounds(bounds);
    if (*cl) return run_check_lemmas(lemmas);
    if (*cs) return run_search(search);
    if (*cr) return run_report(report);
  } catch (const std::exception& e) {
    std::cerr << "edgestat: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
