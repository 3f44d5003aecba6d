#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "live/generate.hpp"
#include "live/index.hpp"
#include "live/matcher.hpp"
#include "live/oracle.hpp"
#include "live/training.hpp"

using namespace live;

namespace {

// independent validity check for one mapping
bool valid_embedding_of(const Graph& g, const Graph& q, const std::vector<uint32_t>& m) {
  if (m.size() != q.vertex_count()) return false;
  std::vector<char> used(g.vertex_count(), 0);
  for (uint32_t u = 0; u < q.vertex_count(); ++u) {
    if (m[u] >= g.vertex_count()) return false;
    if (used[m[u]]) return false;
    used[m[u]] = 1;
    if (g.labels[m[u]] != q.labels[u]) return false;
  }
  for (uint32_t u = 0; u < q.vertex_count(); ++u)
    for (uint32_t w : q.adjacency[u])
      if (u < w && !g.has_edge(m[u], m[w])) return false;
  return true;
}

std::vector<std::vector<uint32_t>> sorted(std::vector<std::vector<uint32_t>> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("matching order starts at the smallest candidate set and stays adjacent") {
  const Graph q = make_graph(3, {0, 0, 0}, {{0, 1}, {1, 2}});  // path 0-1-2
  CandidatePlan plan;
  plan.candidates = {{5, 6}, {7}, {8, 9, 10}};
  plan.counts.resize(3);
  REQUIRE(matching_order(q, plan) == std::vector<uint32_t>{1, 0, 2});

  // ties break toward the lowest vertex id
  plan.candidates = {{1, 2}, {3, 4}, {5, 6}};
  REQUIRE(matching_order(q, plan) == std::vector<uint32_t>{0, 1, 2});

  // a second component restarts the greedy selection
  const Graph two = make_graph(2, {0, 0}, {});
  CandidatePlan plan2;
  plan2.candidates = {{1, 2, 3}, {4}};
  plan2.counts.resize(2);
  REQUIRE(matching_order(two, plan2) == std::vector<uint32_t>{1, 0});
}

TEST_CASE("refinement enumerates exactly the injective label- and edge-preserving maps") {
  const Graph tri = make_graph(3, {0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
  CandidatePlan full;
  full.candidates = {{0}, {1}, {2}};
  full.counts.resize(3);
  const auto order = matching_order(tri, full);
  const MatchSet out = refine(tri, tri, full, order);
  REQUIRE(out.mappings == std::vector<std::vector<uint32_t>>{{0, 1, 2}});

  // star with interchangeable leaves: 3! mappings
  const Graph star = make_graph(4, {0, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}});
  CandidatePlan sp;
  sp.candidates = {{0}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  sp.counts.resize(4);
  const MatchSet sout = refine(star, star, sp, matching_order(star, sp));
  REQUIRE(sout.mappings.size() == 6);
  for (const auto& m : sout.mappings) REQUIRE(valid_embedding_of(star, star, m));

  // an empty candidate set kills everything
  CandidatePlan dead;
  dead.candidates = {{0}, {}, {1, 2, 3}, {1, 2, 3}};
  dead.counts.resize(4);
  REQUIRE(refine(star, star, dead, matching_order(star, dead)).mappings.empty());
}

TEST_CASE("oracle counts are exact on closed-form cases") {
  // path of three equal labels inside a 4-cycle: 4 centers x 2 arm orders
  const Graph c4 = make_graph(4, {0, 0, 0, 0}, {{0, 1}, {0, 3}, {1, 2}, {2, 3}});
  const Graph path3 = make_graph(3, {0, 0, 0}, {{0, 1}, {1, 2}});
  REQUIRE(oracle_match(c4, path3).size() == 8);

  // single-vertex query: one match per label occurrence
  const Graph single = make_graph(1, {0}, {});
  REQUIRE(oracle_match(c4, single).size() == 4);

  // labels restrict the maps
  const Graph tri = make_graph(3, {0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
  REQUIRE(oracle_match(tri, tri) == std::vector<std::vector<uint32_t>>{{0, 1, 2}});

  // no occurrence
  const Graph q_missing = make_graph(1, {3}, {});
  REQUIRE(oracle_match(tri, q_missing).empty());

  // disconnected query: cross product of per-component matches, injectively
  const Graph two_singles = make_graph(2, {0, 0}, {});
  REQUIRE(oracle_match(c4, two_singles).size() == 12);  // 4 * 3 ordered

  for (const auto& m : oracle_match(c4, path3)) REQUIRE(valid_embedding_of(c4, path3, m));
}

namespace {

struct Workbench {
  Graph g;
  LabelEmbeddingTable table;
  ILabelIndex index;
};

Workbench make_workbench(uint64_t seed, bool trained) {
  Workbench w;
  LabelDistribution dist;
  dist.alphabet = 6;
  w.g = generate_synthetic(200, 4, 0.25, dist, seed);
  if (trained) {
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.pairs_per_epoch = 256;
    cfg.seed = seed;
    w.table = train(w.g, cfg);
  } else {
    w.table = make_table(w.g.label_alphabet(), 2, seed + 1);
  }
  w.index = build_index(w.g, w.table, /*t_max=*/2);
  return w;
}

}  // namespace

TEST_CASE("matcher agrees with the brute-force oracle") {
  for (const bool trained : {false, true}) {
    const Workbench w = make_workbench(31, trained);
    for (uint64_t qs = 0; qs < 15; ++qs) {
      const uint32_t size = 3 + static_cast<uint32_t>(qs % 4);
      const Graph q = generate_query(w.g, size, 2.0, 100 + qs);
      const MatchResult r = match_query(w.g, w.table, w.index, q);
      const auto expect = sorted(oracle_match(w.g, q));
      REQUIRE(sorted(r.matches.mappings) == expect);
      REQUIRE(!expect.empty());  // extracted subgraphs always occur
      for (const auto& m : r.matches.mappings) REQUIRE(valid_embedding_of(w.g, q, m));
    }
  }
}

TEST_CASE("candidate sets keep only same-label vertices in key order") {
  const Workbench w = make_workbench(32, false);
  const Graph q = generate_query(w.g, 5, 2.0, 7);
  const QueryContext ctx = make_query_context(q, w.table, w.index);
  const CandidatePlan plan = build_candidate_plan(w.g, w.index, q, ctx, {});
  for (uint32_t qi = 0; qi < q.vertex_count(); ++qi)
    for (uint32_t v : plan.candidates[qi]) REQUIRE(w.g.labels[v] == q.labels[qi]);
  // key order: candidates must appear in the same relative order as the tree
  std::vector<uint32_t> rank(w.g.vertex_count());
  for (uint32_t r = 0; r < w.index.tree.vids().size(); ++r) rank[w.index.tree.vids()[r]] = r;
  for (const auto& cs : plan.candidates)
    for (size_t i = 1; i < cs.size(); ++i) REQUIRE(rank[cs[i - 1]] < rank[cs[i]]);
}

TEST_CASE("every pruning stage can be disabled without changing the answer") {
  const Workbench w = make_workbench(33, true);
  const Graph q = generate_query(w.g, 6, 2.0, 19);
  const MatchResult full = match_query(w.g, w.table, w.index, q);

  PruningToggles offs[] = {{false, true, true, true, true},
                           {true, false, true, true, true},
                           {true, true, false, true, true},
                           {true, true, true, false, true},
                           {true, true, true, true, false},
                           {false, false, false, false, false}};
  for (const auto& t : offs) {
    const MatchResult r = match_query(w.g, w.table, w.index, q, t);
    REQUIRE(sorted(r.matches.mappings) == sorted(full.matches.mappings));
    REQUIRE(r.plan.candidate_total() >= full.plan.candidate_total());
  }
}

TEST_CASE("stage counters partition the scanned entries") {
  const Workbench w = make_workbench(34, true);
  const Graph q = generate_query(w.g, 5, 2.0, 3);
  const MatchResult r = match_query(w.g, w.table, w.index, q);
  const StageCounts& c = r.plan.totals;
  REQUIRE(c.scanned == c.label_rejected + c.dominance_pruned + c.hop_pruned + c.degree_pruned +
                           r.plan.candidate_total());
}

TEST_CASE("matcher results are deterministic") {
  const Workbench w = make_workbench(35, true);
  const Graph q = generate_query(w.g, 6, 2.0, 11);
  const MatchResult a = match_query(w.g, w.table, w.index, q);
  const MatchResult b = match_query(w.g, w.table, w.index, q);
  REQUIRE(a.matches.mappings == b.matches.mappings);
  REQUIRE(a.order == b.order);
  REQUIRE(a.plan.candidates == b.plan.candidates);
}

TEST_CASE("pruning power reflects candidate volume") {
  CandidatePlan plan;
  plan.candidates = {{1, 2}, {3, 4}};
  plan.counts.resize(2);
  REQUIRE(pruning_power(plan, 2, 10) == Catch::Approx(80.0));
  CandidatePlan empty;
  REQUIRE(pruning_power(empty, 0, 0) == 100.0);
}

TEST_CASE("matcher validates its inputs") {
  const Workbench w = make_workbench(36, false);
  const Graph other = make_graph(2, {0, 1}, {{0, 1}});
  REQUIRE_THROWS(match_query(other, w.table, w.index, other));  // wrong data graph

  const Graph q_bad = make_graph(1, {w.table.alphabet}, {});  // label outside the alphabet
  REQUIRE_THROWS(match_query(w.g, w.table, w.index, q_bad));

  auto small = w.table;
  small.alphabet -= 1;
  small.raw.resize(static_cast<size_t>(small.alphabet) * small.dim);
  const Graph q = make_graph(1, {0}, {});
  REQUIRE_THROWS(match_query(w.g, small, w.index, q));  // table/index mismatch
}
