#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "edgestat/hypergraph.hpp"

namespace edgestat {

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<long long> parse_ints(const std::string& line, std::size_t lineno) {
  std::istringstream in(line);
  std::vector<long long> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != tok.size()) throw InputError("line " + std::to_string(lineno) + ": not an integer: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline Vertex as_vertex(long long v, std::size_t lineno) {
  if (v < 0 || v > 0xFFFFFFFELL) throw InputError("line " + std::to_string(lineno) + ": bad vertex index " + std::to_string(v));
  return static_cast<Vertex>(v);
}

}  // namespace detail

/// Text format: first non-comment line "n r", then one edge per line. Lines starting with '#' are comments.
inline Hypergraph parse_hypergraph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::pair<std::size_t, unsigned>> header;
  std::vector<std::vector<Vertex>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto nums = detail::parse_ints(t, lineno);
    if (!header) {
      if (nums.size() != 2 || nums[0] < 0 || nums[1] < 1)
        throw InputError("line " + std::to_string(lineno) + ": expected header 'n r'");
      header = {{static_cast<std::size_t>(nums[0]), static_cast<unsigned>(nums[1])}};
      continue;
    }
    std::vector<Vertex> e;
    for (long long v : nums) e.push_back(detail::as_vertex(v, lineno));
    edges.push_back(std::move(e));
  }
  if (!header) throw InputError("missing 'n r' header");
  return Hypergraph(header->first, header->second, std::move(edges));
}

inline Hypergraph parse_hypergraph(const std::string& text) {
  std::istringstream in(text);
  return parse_hypergraph(in);
}

/// Edge list "u v" per line; n is one more than the largest index unless given.
inline Hypergraph parse_edge_list(std::istream& in, std::optional<std::size_t> n = std::nullopt) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::vector<Vertex>> edges;
  std::size_t max_plus_one = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto nums = detail::parse_ints(t, lineno);
    if (nums.size() != 2) throw InputError("line " + std::to_string(lineno) + ": expected 'u v'");
    Vertex u = detail::as_vertex(nums[0], lineno), v = detail::as_vertex(nums[1], lineno);
    if (u == v) throw InputError("line " + std::to_string(lineno) + ": self-loop");
    max_plus_one = std::max<std::size_t>(max_plus_one, std::max(u, v) + 1);
    edges.push_back({u, v});
  }
  return Hypergraph(n.value_or(max_plus_one), 2, std::move(edges));
}

/// The text after "# <key>:" on the first matching comment line, if any.
inline std::optional<std::string> header_field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line, prefix = "# " + key + ":";
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) return detail::trim(line.substr(prefix.size()));
  return std::nullopt;
}

inline std::string format_hypergraph(const Hypergraph& h, const std::vector<std::string>& comments = {}) {
  std::ostringstream out;
  for (const auto& c : comments) out << "# " << c << '\n';
  out << h.n() << ' ' << h.rank() << '\n';
  for (std::size_t i = 0; i < h.num_edges(); ++i) {
    bool first = true;
    for (Vertex v : h.edge(i)) {
      out << (first ? "" : " ") << v;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Hypercore text format, or an edge list when the file extension is .edges / .el.
inline Hypergraph parse_hypergraph_named(const std::string& path, const std::string& text) {
  std::istringstream in(text);
  auto ends_with = [&](const std::string& suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with(".edges") || ends_with(".el")) return parse_edge_list(in);
  return parse_hypergraph(in);
}

inline Hypergraph read_hypergraph_file(const std::string& path) { return parse_hypergraph_named(path, read_text_file(path)); }

}  // namespace edgestat
