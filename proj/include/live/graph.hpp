#pragma once
// Vertex-labeled undirected graph with sorted adjacency lists, plus the
// plain-text exchange format shared by every tool in the pipeline:
//
//   t <|V|> <|E|>
//   v <id> <label> <degree>     one line per vertex, in id order
//   e <u> <v>                   one line per undirected edge, u < v
//
// Fields are whitespace-separated ASCII decimal. Graphs are immutable after
// construction; build them through make_graph or the generators.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace live {

struct Graph {
  std::vector<uint32_t> labels;
  std::vector<std::vector<uint32_t>> adjacency;  // sorted, no self-loops, no duplicates
  uint64_t edge_count = 0;

  uint32_t vertex_count() const { return static_cast<uint32_t>(labels.size()); }
  uint32_t degree(uint32_t v) const { return static_cast<uint32_t>(adjacency[v].size()); }
  uint32_t label(uint32_t v) const { return labels[v]; }

  bool has_edge(uint32_t u, uint32_t v) const {
    const auto& a = adjacency[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  // smallest label alphabet covering the graph (max label + 1)
  uint32_t label_alphabet() const {
    uint32_t m = 0;
    for (uint32_t l : labels) m = std::max(m, l + 1);
    return m;
  }

  bool operator==(const Graph& o) const = default;
};

// Builds a graph from an edge list, validating endpoints and rejecting
// self-loops and duplicate edges.
inline Graph make_graph(uint32_t n, std::vector<uint32_t> labels,
                        const std::vector<std::pair<uint32_t, uint32_t>>& edges) {
  if (labels.size() != n) throw std::invalid_argument("make_graph: label count != vertex count");
  Graph g;
  g.labels = std::move(labels);
  g.adjacency.assign(n, {});
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("make_graph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("make_graph: self-loop");
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& a : g.adjacency) {
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw std::invalid_argument("make_graph: duplicate edge");
  }
  g.edge_count = edges.size();
  return g;
}

namespace detail {

[[noreturn]] inline void parse_fail(size_t line_no, const std::string& what) {
  throw std::runtime_error("graph parse error at line " + std::to_string(line_no) + ": " + what);
}

inline bool next_record(std::istream& in, std::istringstream& fields, size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;  // blank
    fields.clear();
    fields.str(line);
    return true;
  }
  return false;
}

inline uint64_t read_uint(std::istringstream& fields, size_t line_no, const char* what,
                          uint64_t max_value = std::numeric_limits<uint64_t>::max()) {
  std::string tok;
  if (!(fields >> tok)) parse_fail(line_no, std::string("missing ") + what);
  uint64_t value = 0;
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    parse_fail(line_no, std::string("malformed ") + what + " '" + tok + "'");
  for (char c : tok) {
    if (value > max_value / 10) parse_fail(line_no, std::string(what) + " out of range");
    value = value * 10 + static_cast<uint64_t>(c - '0');
  }
  if (value > max_value) parse_fail(line_no, std::string(what) + " out of range");
  return value;
}

inline void expect_end(std::istringstream& fields, size_t line_no) {
  std::string extra;
  if (fields >> extra) parse_fail(line_no, "trailing token '" + extra + "'");
}

}  // namespace detail

inline Graph load_graph(std::istream& in) {
  using namespace detail;
  size_t line_no = 0;
  std::istringstream fields;
  std::string tag;

  if (!next_record(in, fields, line_no)) parse_fail(line_no + 1, "empty input");
  fields >> tag;
  if (tag != "t") parse_fail(line_no, "expected header 't <|V|> <|E|>'");
  const auto n = static_cast<uint32_t>(read_uint(fields, line_no, "vertex count", 0xffffffffu));
  const uint64_t m = read_uint(fields, line_no, "edge count");
  expect_end(fields, line_no);

  Graph g;
  g.labels.resize(n);
  g.adjacency.assign(n, {});
  std::vector<uint32_t> declared_degree(n);

  for (uint32_t i = 0; i < n; ++i) {
    if (!next_record(in, fields, line_no)) parse_fail(line_no + 1, "vertex section truncated");
    fields >> tag;
    if (tag != "v") parse_fail(line_no, "expected vertex line");
    const auto id = read_uint(fields, line_no, "vertex id", 0xffffffffu);
    if (id != i) parse_fail(line_no, "vertex ids must be 0..|V|-1 in order");
    g.labels[i] = static_cast<uint32_t>(read_uint(fields, line_no, "label", 0xffffffffu));
    declared_degree[i] = static_cast<uint32_t>(read_uint(fields, line_no, "degree", 0xffffffffu));
    expect_end(fields, line_no);
  }

  for (uint64_t e = 0; e < m; ++e) {
    if (!next_record(in, fields, line_no)) parse_fail(line_no + 1, "edge section truncated");
    fields >> tag;
    if (tag != "e") parse_fail(line_no, "expected edge line");
    const auto u = static_cast<uint32_t>(read_uint(fields, line_no, "edge endpoint", 0xffffffffu));
    const auto v = static_cast<uint32_t>(read_uint(fields, line_no, "edge endpoint", 0xffffffffu));
    expect_end(fields, line_no);
    if (u >= n || v >= n) parse_fail(line_no, "edge endpoint out of range");
    if (u == v) parse_fail(line_no, "self-loop");
    if (u > v) parse_fail(line_no, "edge endpoints must satisfy u < v");
    if (g.has_edge(u, v)) parse_fail(line_no, "duplicate edge");
    // insertion keeps adjacency sorted so the duplicate check above can bisect
    auto& au = g.adjacency[u];
    au.insert(std::upper_bound(au.begin(), au.end(), v), v);
    auto& av = g.adjacency[v];
    av.insert(std::upper_bound(av.begin(), av.end(), u), u);
  }
  if (next_record(in, fields, line_no)) parse_fail(line_no, "content after edge section");

  for (uint32_t i = 0; i < n; ++i)
    if (declared_degree[i] != g.adjacency[i].size())
      throw std::runtime_error("graph parse error: vertex " + std::to_string(i) +
                               " declares degree " + std::to_string(declared_degree[i]) +
                               " but has " + std::to_string(g.adjacency[i].size()) +
                               " incident edges");
  g.edge_count = m;
  return g;
}

inline void save_graph(const Graph& g, std::ostream& out) {
  out << "t " << g.vertex_count() << ' ' << g.edge_count << '\n';
  for (uint32_t v = 0; v < g.vertex_count(); ++v)
    out << "v " << v << ' ' << g.labels[v] << ' ' << g.degree(v) << '\n';
  for (uint32_t u = 0; u < g.vertex_count(); ++u)
    for (uint32_t v : g.adjacency[u])
      if (u < v) out << "e " << u << ' ' << v << '\n';
}

// Vertices within distance t of v (BFS), v included, sorted by id.
inline std::vector<uint32_t> khop_neighborhood(const Graph& g, uint32_t v, uint32_t t) {
  std::vector<uint32_t> out{v};
  if (t == 0) {
    return out;
  }
  std::vector<char> seen(g.vertex_count(), 0);
  seen[v] = 1;
  std::vector<uint32_t> frontier{v}, next;
  for (uint32_t depth = 0; depth < t && !frontier.empty(); ++depth) {
    next.clear();
    for (uint32_t u : frontier)
      for (uint32_t w : g.adjacency[u])
        if (!seen[w]) {
          seen[w] = 1;
          next.push_back(w);
          out.push_back(w);
        }
    frontier.swap(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_connected(const Graph& g) {
  const uint32_t n = g.vertex_count();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<uint32_t> stack{0};
  seen[0] = 1;
  uint32_t visited = 1;
  while (!stack.empty()) {
    const uint32_t u = stack.back();
    stack.pop_back();
    for (uint32_t w : g.adjacency[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        stack.push_back(w);
      }
  }
  return visited == n;
}

}  // namespace live
