#pragma once
// Benchmark driver: runs a query workload against one graph + index, collects
// per-query metrics, and emits a versioned CSV. Queries are distributed over
// a small worker pool; every row lands in a pre-assigned slot so the report is
// identical no matter how the scheduler interleaves the work.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "live/matcher.hpp"

namespace live {

struct QueryRow {
  uint32_t id = 0;
  uint32_t query_vertices = 0;
  uint64_t query_edges = 0;
  uint64_t matches = 0;
  uint64_t filter_us = 0, order_us = 0, refine_us = 0;
  double pruning_power_pct = 0.0;
  StageCounts counts;
  uint64_t candidates = 0;
};

struct OfflineCosts {
  uint64_t train_us = 0;
  uint64_t index_build_us = 0;
  uint64_t index_bytes = 0;
};

struct BenchReport {
  std::vector<QueryRow> rows;
  OfflineCosts offline;
};

inline BenchReport run_bench(const Graph& g, const LabelEmbeddingTable& table,
                             const ILabelIndex& index, const std::vector<Graph>& queries,
                             uint32_t workers, bool zero_timings = false,
                             const PruningToggles& toggles = {}) {
  BenchReport report;
  report.rows.resize(queries.size());
  if (queries.empty()) return report;
  workers = std::max(1u, std::min<uint32_t>(workers, static_cast<uint32_t>(queries.size())));

  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i = next.fetch_add(1); i < queries.size(); i = next.fetch_add(1)) {
      const MatchResult r = match_query(g, table, index, queries[i], toggles);
      QueryRow& row = report.rows[i];
      row.id = static_cast<uint32_t>(i);
      row.query_vertices = queries[i].vertex_count();
      row.query_edges = queries[i].edge_count;
      row.matches = r.matches.mappings.size();
      if (!zero_timings) {
        row.filter_us = r.filter_us;
        row.order_us = r.order_us;
        row.refine_us = r.refine_us;
      }
      row.pruning_power_pct = r.pruning_power_pct;
      row.counts = r.plan.totals;
      row.candidates = r.plan.candidate_total();
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (uint32_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return report;
}

namespace detail {

inline std::string fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace detail

// Header row first (schema_version pins the layout); one row per query; one
// trailing aggregate row carrying the offline costs. An empty workload
// produces the header only.
inline void write_bench_csv(const BenchReport& report, std::ostream& out) {
  out << "schema_version,kind,id,query_vertices,query_edges,matches,filter_us,order_us,"
         "refine_us,total_us,pruning_power_pct,scanned,label_rejected,dominance_pruned,"
         "hop_pruned,degree_pruned,candidates,train_us,index_build_us,index_bytes\n";
  if (report.rows.empty()) return;

  QueryRow agg;
  double power_sum = 0.0;
  for (const QueryRow& r : report.rows) {
    const uint64_t total = r.filter_us + r.order_us + r.refine_us;
    out << "1,query," << r.id << ',' << r.query_vertices << ',' << r.query_edges << ','
        << r.matches << ',' << r.filter_us << ',' << r.order_us << ',' << r.refine_us << ','
        << total << ',' << detail::fixed2(r.pruning_power_pct) << ',' << r.counts.scanned << ','
        << r.counts.label_rejected << ',' << r.counts.dominance_pruned << ','
        << r.counts.hop_pruned << ',' << r.counts.degree_pruned << ',' << r.candidates
        << ",,,\n";
    agg.matches += r.matches;
    agg.filter_us += r.filter_us;
    agg.order_us += r.order_us;
    agg.refine_us += r.refine_us;
    agg.counts += r.counts;
    agg.candidates += r.candidates;
    power_sum += r.pruning_power_pct;
  }
  const auto n = static_cast<double>(report.rows.size());
  out << "1,aggregate,,,," << agg.matches << ','
      << detail::fixed2(agg.filter_us / n) << ',' << detail::fixed2(agg.order_us / n) << ','
      << detail::fixed2(agg.refine_us / n) << ','
      << detail::fixed2((agg.filter_us + agg.order_us + agg.refine_us) / n) << ','
      << detail::fixed2(power_sum / n) << ',' << agg.counts.scanned << ','
      << agg.counts.label_rejected << ',' << agg.counts.dominance_pruned << ','
      << agg.counts.hop_pruned << ',' << agg.counts.degree_pruned << ',' << agg.candidates << ','
      << report.offline.train_us << ',' << report.offline.index_build_us << ','
      << report.offline.index_bytes << '\n';
}

// Match output shared by the query and oracle subcommands:
//   m <v...>   one line per match, position = query vertex id
//   s <count> <filter_us> <order_us> <refine_us> <pruning_power_pct>
// Mappings are emitted in sorted order so reruns and ablations agree byte-wise.
inline void write_matches(std::vector<std::vector<uint32_t>> mappings, uint64_t filter_us,
                          uint64_t order_us, uint64_t refine_us, double pruning_power_pct,
                          std::ostream& out) {
  std::sort(mappings.begin(), mappings.end());
  for (const auto& m : mappings) {
    out << 'm';
    for (uint32_t v : m) out << ' ' << v;
    out << '\n';
  }
  out << "s " << mappings.size() << ' ' << filter_us << ' ' << order_us << ' ' << refine_us << ' '
      << detail::fixed2(pruning_power_pct) << '\n';
}

}  // namespace live
