#pragma once
// Online matching: per-query-vertex candidate retrieval through the index,
// greedy matching order, and backtracking refinement.
//
// Retrieval for query vertex q_i scans the key interval
//   [key(q_i) - eps_key, next_label_key(L(q_i)))
// and keeps a data vertex v only if it survives, in order:
//   label equality          (the interval's fringe can touch a neighbor cluster)
//   MVE dominance           o(q_i) <= o(v) coordinate-wise
//   hop containment         q_i's hop-t VLE box inside v's, t = t_max .. 2
//   degree membership       deg(q_i) <= deg(v) and q_i's VSE inside v's
//                           degree-deg(q_i) sum box
// Every stage is a necessary condition for a match mapping q_i to v, so a
// surviving oracle match can never be dismissed. Each stage can be toggled
// off for ablation; eliminations are counted per stage.

#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "live/embedding.hpp"
#include "live/graph.hpp"
#include "live/index.hpp"

namespace live {

struct PruningToggles {
  bool key_lower = true;
  bool key_upper = true;
  bool dominance = true;
  bool hop = true;
  bool degree = true;
};

struct StageCounts {
  uint64_t scanned = 0;
  uint64_t label_rejected = 0;
  uint64_t dominance_pruned = 0;
  uint64_t hop_pruned = 0;
  uint64_t degree_pruned = 0;

  StageCounts& operator+=(const StageCounts& o) {
    scanned += o.scanned;
    label_rejected += o.label_rejected;
    dominance_pruned += o.dominance_pruned;
    hop_pruned += o.hop_pruned;
    degree_pruned += o.degree_pruned;
    return *this;
  }
};

struct CandidatePlan {
  std::vector<std::vector<uint32_t>> candidates;  // per query vertex, in key order
  std::vector<StageCounts> counts;                // per query vertex
  StageCounts totals;

  uint64_t candidate_total() const {
    uint64_t s = 0;
    for (const auto& c : candidates) s += c.size();
    return s;
  }
};

// Query-side embeddings and synopses, computed with the index's mixture so
// query keys and MVEs are commensurate with the stored ones.
struct QueryContext {
  EmbeddingSet emb;
  HopSynopses hop;
};

inline QueryContext make_query_context(const Graph& q, const LabelEmbeddingTable& table,
                                       const ILabelIndex& index) {
  if (table.dim != index.dim)
    throw std::invalid_argument("query: model dimension does not match index");
  if (table.alphabet != index.keymap.alphabet)
    throw std::invalid_argument("query: model alphabet does not match index");
  LabelEmbeddingTable mixed = table;
  mixed.alpha = index.alpha;
  mixed.beta = index.beta;
  QueryContext ctx;
  ctx.emb = compute_embeddings(q, mixed);
  ctx.hop = compute_hop_synopses(q, ctx.emb, index.t_max);
  return ctx;
}

inline double key_slack(double key) { return 1e-6 * (1.0 + std::abs(key)); }

inline std::vector<uint32_t> retrieve_candidates(const Graph& g, const ILabelIndex& index,
                                                 const Graph& q, const QueryContext& ctx,
                                                 uint32_t qi, const PruningToggles& toggles,
                                                 StageCounts& counts) {
  std::vector<uint32_t> out;
  const uint32_t label = q.labels[qi];
  if (label >= index.keymap.alphabet) return out;  // label unknown to the index

  const double qkey = index.alpha * l2_norm(ctx.emb.vle_of(qi)) +
                      index.beta * l2_norm(ctx.emb.vse_of(qi));
  const double lo =
      toggles.key_lower ? qkey - key_slack(qkey) : -std::numeric_limits<double>::infinity();
  const double hi = toggles.key_upper ? index.keymap.next_label_key[label]
                                      : std::numeric_limits<double>::infinity();

  const auto q_mve = ctx.emb.mve_of(qi);
  const auto q_vse = ctx.emb.vse_of(qi);
  const uint32_t q_deg = q.degree(qi);
  const uint32_t d = index.dim;

  index.tree.range_scan(lo, hi, [&](double, uint32_t v) {
    ++counts.scanned;
    if (g.labels[v] != label) {
      ++counts.label_rejected;
      return;
    }
    if (toggles.dominance && !dominates(q_mve, index.mve_of(v), kOnlineEps)) {
      ++counts.dominance_pruned;
      return;
    }
    if (toggles.hop) {
      for (uint32_t t = index.t_max; t >= 2; --t) {
        const auto ql = ctx.hop.lower(qi, t), qu = ctx.hop.upper(qi, t);
        const auto vl = index.hop.lower(v, t), vu = index.hop.upper(v, t);
        for (uint32_t k = 0; k < d; ++k)
          if (vl[k] > ql[k] + kOnlineEps || qu[k] > vu[k] + kOnlineEps) {
            ++counts.hop_pruned;
            return;
          }
      }
    }
    if (toggles.degree && q_deg >= 1) {
      if (q_deg > index.deg.degree_of(v)) {
        ++counts.degree_pruned;
        return;
      }
      for (uint32_t k = 0; k < d; ++k) {
        const double sum = q_vse[k];
        if (sum < index.deg.lower_sum(v, k, q_deg) - kOnlineEps ||
            sum > index.deg.upper_sum(v, k, q_deg) + kOnlineEps) {
          ++counts.degree_pruned;
          return;
        }
      }
    }
    out.push_back(v);
  });
  return out;
}

inline CandidatePlan build_candidate_plan(const Graph& g, const ILabelIndex& index, const Graph& q,
                                          const QueryContext& ctx,
                                          const PruningToggles& toggles = {}) {
  CandidatePlan plan;
  const uint32_t nq = q.vertex_count();
  plan.candidates.resize(nq);
  plan.counts.resize(nq);
  for (uint32_t i = 0; i < nq; ++i) {
    plan.candidates[i] = retrieve_candidates(g, index, q, ctx, i, toggles, plan.counts[i]);
    plan.totals += plan.counts[i];
  }
  return plan;
}

// Greedy order: start at the smallest candidate set; repeatedly append the
// unordered vertex adjacent to the prefix with the smallest candidate set
// (ties to the lowest id). A disconnected query restarts the rule per
// component.
inline std::vector<uint32_t> matching_order(const Graph& q, const CandidatePlan& plan) {
  const uint32_t nq = q.vertex_count();
  std::vector<uint32_t> order;
  order.reserve(nq);
  std::vector<char> chosen(nq, 0), adjacent(nq, 0);
  auto better = [&](uint32_t a, uint32_t best) {
    if (best == nq) return true;
    const size_t ca = plan.candidates[a].size(), cb = plan.candidates[best].size();
    return ca != cb ? ca < cb : a < best;
  };
  for (uint32_t step = 0; step < nq; ++step) {
    uint32_t best = nq;
    bool restrict_adjacent = false;
    for (uint32_t v = 0; v < nq; ++v)  // does any unchosen vertex touch the prefix?
      if (!chosen[v] && adjacent[v]) {
        restrict_adjacent = true;
        break;
      }
    for (uint32_t v = 0; v < nq; ++v)
      if (!chosen[v] && (!restrict_adjacent || adjacent[v]) && better(v, best)) best = v;
    chosen[best] = 1;
    order.push_back(best);
    for (uint32_t w : q.adjacency[best]) adjacent[w] = 1;
  }
  return order;
}

struct MatchSet {
  uint32_t query_size = 0;
  std::vector<std::vector<uint32_t>> mappings;  // each indexed by query vertex id
};

// Backtracking over the candidate lists in the given order. A candidate must
// be unused and adjacent (in g) to the images of all already-placed query
// neighbors; emitted mappings therefore preserve labels, edges, and
// injectivity.
inline MatchSet refine(const Graph& g, const Graph& q, const CandidatePlan& plan,
                       const std::vector<uint32_t>& order) {
  const uint32_t nq = q.vertex_count();
  MatchSet out;
  out.query_size = nq;
  if (nq == 0) return out;
  for (const auto& c : plan.candidates)
    if (c.empty()) return out;

  constexpr uint32_t kUnmapped = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> image(nq, kUnmapped);
  std::vector<char> used(g.vertex_count(), 0);
  // query neighbors that are already placed when a vertex is reached
  std::vector<std::vector<uint32_t>> placed_neighbors(nq);
  {
    std::vector<uint32_t> position(nq);
    for (uint32_t r = 0; r < nq; ++r) position[order[r]] = r;
    for (uint32_t r = 0; r < nq; ++r)
      for (uint32_t w : q.adjacency[order[r]])
        if (position[w] < r) placed_neighbors[order[r]].push_back(w);
  }

  // vid-sorted candidate copies so extensions can test membership in O(log n)
  std::vector<std::vector<uint32_t>> sorted_cands(nq);
  for (uint32_t v = 0; v < nq; ++v) {
    sorted_cands[v] = plan.candidates[v];
    std::sort(sorted_cands[v].begin(), sorted_cands[v].end());
  }

  // Vertices with a placed query neighbor are extended by walking the
  // adjacency list of that neighbor's (lowest-degree) image instead of
  // re-scanning the whole candidate set; only component roots scan it.
  std::vector<const std::vector<uint32_t>*> source(nq, nullptr);
  std::vector<size_t> cursor(nq, 0);
  const auto enter = [&](uint32_t depth) {
    cursor[depth] = 0;
    const uint32_t qv = order[depth];
    source[depth] = nullptr;
    uint32_t best_deg = std::numeric_limits<uint32_t>::max();
    for (uint32_t w : placed_neighbors[qv]) {
      const uint32_t deg = g.degree(image[w]);
      if (deg < best_deg) {
        best_deg = deg;
        source[depth] = &g.adjacency[image[w]];
      }
    }
  };

  uint32_t depth = 0;
  enter(0);
  while (true) {
    const uint32_t qv = order[depth];
    bool advanced = false;
    if (source[depth] == nullptr) {
      const auto& cands = plan.candidates[qv];
      while (cursor[depth] < cands.size()) {
        const uint32_t v = cands[cursor[depth]++];
        if (used[v]) continue;
        image[qv] = v;
        used[v] = 1;
        advanced = true;
        break;
      }
    } else {
      const auto& src = *source[depth];
      const auto& members = sorted_cands[qv];
      while (cursor[depth] < src.size()) {
        const uint32_t v = src[cursor[depth]++];
        if (used[v]) continue;
        if (!std::binary_search(members.begin(), members.end(), v)) continue;
        bool ok = true;
        for (uint32_t w : placed_neighbors[qv])
          if (!g.has_edge(v, image[w])) {
            ok = false;
            break;
          }
        if (!ok) continue;
        image[qv] = v;
        used[v] = 1;
        advanced = true;
        break;
      }
    }
    if (advanced) {
      if (depth + 1 == nq) {
        out.mappings.push_back(image);
        used[image[qv]] = 0;
        image[qv] = kUnmapped;
      } else {
        enter(++depth);
      }
    } else {
      if (depth == 0) break;
      --depth;
      const uint32_t prev = order[depth];
      used[image[prev]] = 0;
      image[prev] = kUnmapped;
    }
  }
  return out;
}

inline double pruning_power(const CandidatePlan& plan, uint32_t query_vertices,
                            uint32_t data_vertices) {
  const double denom = static_cast<double>(query_vertices) * data_vertices;
  if (denom == 0.0) return 100.0;
  return 100.0 * (1.0 - static_cast<double>(plan.candidate_total()) / denom);
}

struct MatchResult {
  MatchSet matches;
  CandidatePlan plan;
  std::vector<uint32_t> order;
  uint64_t filter_us = 0;
  uint64_t order_us = 0;
  uint64_t refine_us = 0;
  double pruning_power_pct = 100.0;
};

inline MatchResult match_query(const Graph& g, const LabelEmbeddingTable& table,
                               const ILabelIndex& index, const Graph& q,
                               const PruningToggles& toggles = {}) {
  if (g.vertex_count() != index.vertex_count)
    throw std::invalid_argument("query: graph vertex count does not match index");
  using clock = std::chrono::steady_clock;
  const auto us_since = [](clock::time_point t0) {
    return static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - t0).count());
  };

  MatchResult r;
  auto t0 = clock::now();
  const QueryContext ctx = make_query_context(q, table, index);
  r.plan = build_candidate_plan(g, index, q, ctx, toggles);
  r.filter_us = us_since(t0);

  t0 = clock::now();
  r.order = matching_order(q, r.plan);
  r.order_us = us_since(t0);

  t0 = clock::now();
  r.matches = refine(g, q, r.plan, r.order);
  r.refine_us = us_since(t0);

  r.pruning_power_pct = pruning_power(r.plan, q.vertex_count(), g.vertex_count());
  return r;
}

}  // namespace live
