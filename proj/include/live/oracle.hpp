#pragma once
// Reference matcher: exhaustive label + edge-consistency backtracking straight
// off the graph structure. No embeddings, no index, no synopses; it exists so
// the indexed path has something independent to be checked against.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "live/graph.hpp"

namespace live {

// All label-preserving, edge-preserving injective mappings of q into g,
// each indexed by query vertex id. Ordered mappings: automorphic images are
// distinct matches.
inline std::vector<std::vector<uint32_t>> oracle_match(const Graph& g, const Graph& q) {
  const uint32_t nq = q.vertex_count();
  std::vector<std::vector<uint32_t>> results;
  if (nq == 0) return results;

  // BFS order over q (new component seeds in id order) so that every vertex
  // after a component seed has at least one earlier neighbor
  constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> order;
  order.reserve(nq);
  std::vector<char> seen(nq, 0);
  for (uint32_t s = 0; s < nq; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    size_t head = order.size();
    order.push_back(s);
    while (head < order.size()) {
      const uint32_t u = order[head++];
      for (uint32_t w : q.adjacency[u])
        if (!seen[w]) {
          seen[w] = 1;
          order.push_back(w);
        }
    }
  }
  std::vector<uint32_t> position(nq);
  for (uint32_t r = 0; r < nq; ++r) position[order[r]] = r;
  // earlier neighbor with the smallest position, if any (anchor for expansion)
  std::vector<uint32_t> anchor(nq, kNone);
  std::vector<std::vector<uint32_t>> earlier(nq);
  for (uint32_t r = 0; r < nq; ++r) {
    const uint32_t u = order[r];
    for (uint32_t w : q.adjacency[u])
      if (position[w] < r) {
        earlier[u].push_back(w);
        if (anchor[u] == kNone || position[w] < position[anchor[u]]) anchor[u] = w;
      }
  }

  std::vector<uint32_t> image(nq, kNone);
  std::vector<char> used(g.vertex_count(), 0);

  auto extend = [&](auto&& self, uint32_t depth) -> void {
    if (depth == nq) {
      results.push_back(image);
      return;
    }
    const uint32_t u = order[depth];
    auto try_vertex = [&](uint32_t v) {
      if (used[v] || g.labels[v] != q.labels[u]) return;
      for (uint32_t w : earlier[u])
        if (!g.has_edge(v, image[w])) return;
      image[u] = v;
      used[v] = 1;
      self(self, depth + 1);
      used[v] = 0;
      image[u] = kNone;
    };
    if (anchor[u] == kNone) {
      for (uint32_t v = 0; v < g.vertex_count(); ++v) try_vertex(v);
    } else {
      for (uint32_t v : g.adjacency[image[anchor[u]]]) try_vertex(v);
    }
  };
  extend(extend, 0);
  return results;
}

// canonical form for set comparison
inline void sort_mappings(std::vector<std::vector<uint32_t>>& mappings) {
  std::sort(mappings.begin(), mappings.end());
}

}  // namespace live
