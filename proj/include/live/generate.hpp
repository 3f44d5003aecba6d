#pragma once
// Synthetic workloads: Newman-Watts-Strogatz small-world graphs with i.i.d.
// vertex labels, and query extraction from a data graph via random walks with
// density thinning.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "live/graph.hpp"
#include "live/rng.hpp"

namespace live {

enum class LabelDist { uniform, gaussian, zipf };

struct LabelDistribution {
  LabelDist kind = LabelDist::uniform;
  uint32_t alphabet = 15;
  // gaussian parameters in 1-based label space; <= 0 means "derive from alphabet"
  double gauss_mean = 0.0;
  double gauss_stddev = 0.0;
  double zipf_exponent = 1.0;
};

class LabelSampler {
 public:
  explicit LabelSampler(const LabelDistribution& dist) : dist_(dist) {
    if (dist.alphabet == 0) throw std::invalid_argument("label alphabet must be non-empty");
    if (dist.kind == LabelDist::zipf) {
      cumulative_.reserve(dist.alphabet);
      double total = 0.0;
      for (uint32_t i = 1; i <= dist.alphabet; ++i) {
        total += 1.0 / std::pow(static_cast<double>(i), dist.zipf_exponent);
        cumulative_.push_back(total);
      }
    }
    if (dist.kind == LabelDist::gaussian) {
      mean_ = dist.gauss_mean > 0.0 ? dist.gauss_mean : (1.0 + dist.alphabet) / 2.0;
      stddev_ = dist.gauss_stddev > 0.0 ? dist.gauss_stddev : dist.alphabet / 6.0;
    }
  }

  uint32_t operator()(rng_t& rng) const {
    switch (dist_.kind) {
      case LabelDist::uniform:
        return static_cast<uint32_t>(uniform_below(rng, dist_.alphabet));
      case LabelDist::gaussian: {
        // sample in 1-based space, round, clamp to [1, alphabet]
        const double x = std::llround(mean_ + stddev_ * gaussian(rng));
        const double c = std::min(static_cast<double>(dist_.alphabet), std::max(1.0, x));
        return static_cast<uint32_t>(c) - 1;
      }
      case LabelDist::zipf: {
        const double u = uniform01(rng) * cumulative_.back();
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        return static_cast<uint32_t>(it - cumulative_.begin());
      }
    }
    throw std::logic_error("unreachable");
  }

 private:
  LabelDistribution dist_;
  std::vector<double> cumulative_;
  double mean_ = 0.0, stddev_ = 1.0;
};

// Ring lattice over n vertices (each joined to its k nearest neighbors, k/2
// per side), then one pass over the lattice edges adding a random shortcut
// with probability p. Shortcuts never remove edges, so the result stays
// connected for k >= 2.
inline Graph generate_synthetic(uint32_t n, uint32_t k, double p, const LabelDistribution& dist,
                                uint64_t seed) {
  if (k < 2) throw std::invalid_argument("generate_synthetic: k must be >= 2");
  if (n < k + 1) throw std::invalid_argument("generate_synthetic: need n >= k + 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("generate_synthetic: p must be in [0, 1]");

  rng_t rng = make_rng(seed);
  const LabelSampler sampler(dist);
  std::vector<uint32_t> labels(n);
  for (auto& l : labels) l = sampler(rng);

  std::vector<std::vector<uint32_t>> adj(n);
  auto has = [&](uint32_t u, uint32_t v) {
    for (uint32_t w : adj[u])
      if (w == v) return true;
    return false;
  };
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (uint32_t j = 1; j <= k / 2; ++j)
    for (uint32_t i = 0; i < n; ++i) {
      const uint32_t v = (i + j) % n;
      edges.emplace_back(i, v);
      adj[i].push_back(v);
      adj[v].push_back(i);
    }

  const size_t lattice_edges = edges.size();
  for (size_t e = 0; e < lattice_edges; ++e) {
    if (uniform01(rng) >= p) continue;
    const uint32_t u = edges[e].first;
    if (adj[u].size() >= n - 1) continue;  // u already saturated
    uint32_t w = static_cast<uint32_t>(uniform_below(rng, n));
    while (w == u || has(u, w)) w = static_cast<uint32_t>(uniform_below(rng, n));
    edges.emplace_back(u, w);
    adj[u].push_back(w);
    adj[w].push_back(u);
  }
  return make_graph(n, std::move(labels), edges);
}

struct NwsParams {
  uint32_t k;
  double p;
};

// Largest even k <= avg_deg, then p chosen so that E[deg] = k(1+p) = avg_deg.
inline NwsParams nws_params_for_avg_degree(double avg_deg) {
  if (avg_deg < 2.0) throw std::invalid_argument("average degree must be >= 2");
  auto k = static_cast<uint32_t>(2.0 * std::floor(avg_deg / 2.0));
  double p = avg_deg / k - 1.0;
  if (p >= 1.0) {  // avg_deg landed on the next even k exactly
    k += 2;
    p = 0.0;
  }
  return {k, p};
}

namespace detail {

inline bool connected_after_removal(const std::vector<std::vector<uint32_t>>& adj, uint32_t n,
                                    uint32_t skip_u, uint32_t skip_v) {
  std::vector<char> seen(n, 0);
  std::vector<uint32_t> stack{0};
  seen[0] = 1;
  uint32_t visited = 1;
  while (!stack.empty()) {
    const uint32_t u = stack.back();
    stack.pop_back();
    for (uint32_t w : adj[u]) {
      if ((u == skip_u && w == skip_v) || (u == skip_v && w == skip_u)) continue;
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == n;
}

}  // namespace detail

// Random-walk query extraction. A walk collects `size` distinct vertices; the
// induced subgraph is thinned to the target edge budget by removing random
// non-bridge edges. A walk whose induced subgraph is below the budget is
// restarted (up to 1000 attempts). Labels are copied from g, so the identity
// embedding of the result into g is always a match.
inline Graph generate_query(const Graph& g, uint32_t size, double avg_deg, uint64_t seed) {
  const uint32_t n = g.vertex_count();
  if (size == 0) throw std::invalid_argument("generate_query: size must be >= 1");
  if (size > n) throw std::invalid_argument("generate_query: size exceeds graph order");

  const auto raw_target = static_cast<uint64_t>(std::llround(avg_deg * size / 2.0));
  const uint64_t min_edges = size - 1;  // connectivity floor
  const uint64_t max_edges = static_cast<uint64_t>(size) * (size - 1) / 2;
  const uint64_t target = std::min(max_edges, std::max(min_edges, raw_target));

  rng_t rng = make_rng(seed);
  constexpr int kRestartBudget = 1000;
  for (int attempt = 0; attempt < kRestartBudget; ++attempt) {
    // collect `size` distinct vertices by random walk; local id = collection order
    std::vector<uint32_t> collected;
    std::unordered_map<uint32_t, uint32_t> local;
    uint32_t cur = static_cast<uint32_t>(uniform_below(rng, n));
    collected.push_back(cur);
    local.emplace(cur, 0);
    const uint64_t step_budget = 200ull * size + 1000;
    uint64_t steps = 0;
    bool stuck = false;
    while (collected.size() < size) {
      if (g.degree(cur) == 0 || ++steps > step_budget) {
        stuck = true;
        break;
      }
      cur = g.adjacency[cur][uniform_below(rng, g.degree(cur))];
      if (local.emplace(cur, static_cast<uint32_t>(collected.size())).second)
        collected.push_back(cur);
    }
    if (stuck) continue;

    // induced edges, in local vertex ids
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (uint32_t i = 0; i < size; ++i)
      for (uint32_t w : g.adjacency[collected[i]]) {
        const auto it = local.find(w);
        if (it != local.end() && collected[i] < w) edges.emplace_back(i, it->second);
      }
    if (edges.size() < target) continue;

    // thin to the target, rejecting removals that disconnect
    std::vector<std::vector<uint32_t>> adj(size);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    auto drop_adj = [&](uint32_t a, uint32_t b) {
      std::erase(adj[a], b);
      std::erase(adj[b], a);
    };
    while (edges.size() > target) {
      std::vector<size_t> order(edges.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      bool removed = false;
      while (!order.empty()) {
        const size_t pick = uniform_below(rng, order.size());
        const auto [a, b] = edges[order[pick]];
        if (detail::connected_after_removal(adj, size, a, b)) {
          drop_adj(a, b);
          edges.erase(edges.begin() + static_cast<ptrdiff_t>(order[pick]));
          removed = true;
          break;
        }
        order.erase(order.begin() + static_cast<ptrdiff_t>(pick));
      }
      if (!removed) break;  // only bridges left; cannot happen above the tree floor
    }
    if (edges.size() != target) continue;

    std::vector<uint32_t> labels(size);
    for (uint32_t i = 0; i < size; ++i) labels[i] = g.labels[collected[i]];
    return make_graph(size, std::move(labels), edges);
  }
  throw std::runtime_error("generate_query: retry budget exhausted (density target " +
                           std::to_string(target) + " edges on " + std::to_string(size) +
                           " vertices unreachable from sampled walks)");
}

}  // namespace live
