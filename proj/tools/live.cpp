// live: synthetic-workload generator, trainer, indexer, matcher, and
// benchmark driver in one binary. Subcommands: gen, train, index, query,
// bench, oracle.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "live/bench.hpp"
#include "live/generate.hpp"
#include "live/graph.hpp"
#include "live/index.hpp"
#include "live/matcher.hpp"
#include "live/oracle.hpp"
#include "live/training.hpp"

namespace {

using namespace live;

uint64_t now_us_since(std::chrono::steady_clock::time_point t0) {
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count());
}

// Dense relabeling. Model/index artifacts live in the dense space; graph and
// query files keep their original labels. Queries are translated with the
// data graph's mapping, and a query label the data graph never uses means
// there is nothing to match.
struct LabelMapping {
  std::vector<uint32_t> raw;  // sorted unique original labels; dense id = position

  static LabelMapping build(const Graph& g) {
    LabelMapping m;
    m.raw = g.labels;
    std::sort(m.raw.begin(), m.raw.end());
    m.raw.erase(std::unique(m.raw.begin(), m.raw.end()), m.raw.end());
    return m;
  }

  bool identity() const { return raw.empty() || raw.back() + 1 == raw.size(); }

  bool lookup(uint32_t label, uint32_t& dense) const {
    const auto it = std::lower_bound(raw.begin(), raw.end(), label);
    if (it == raw.end() || *it != label) return false;
    dense = static_cast<uint32_t>(it - raw.begin());
    return true;
  }

  void apply(Graph& g) const {
    if (identity()) return;
    for (auto& l : g.labels) {
      uint32_t dense = 0;
      if (!lookup(l, dense)) throw std::logic_error("label mapping misses a data-graph label");
      l = dense;
    }
  }

  // false when the query uses a label the data graph does not have
  bool apply_to_query(Graph& q) const {
    if (identity()) {
      for (uint32_t l : q.labels)
        if (l >= raw.size()) return false;
      return true;
    }
    std::vector<uint32_t> mapped(q.labels.size());
    for (size_t i = 0; i < q.labels.size(); ++i)
      if (!lookup(q.labels[i], mapped[i])) return false;
    q.labels = std::move(mapped);
    return true;
  }
};

Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return load_graph(in);
}

void write_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create file: " + path);
  save_graph(g, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

LabelEmbeddingTable read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return load_model(in);
}

void write_model(const LabelEmbeddingTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create file: " + path);
  save_model(t, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

ILabelIndex read_index(const std::string& path, uint64_t& bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index file: " + path);
  in.seekg(0, std::ios::end);
  bytes = static_cast<uint64_t>(in.tellg());
  in.seekg(0);
  return load_index(in);
}

// Serialized size without keeping the bytes around. Tracks a write position
// because save_index seeks back to patch its checksum.
struct CountingBuf : std::streambuf {
  uint64_t pos = 0, size = 0;

  void advance(std::streamsize n) {
    pos += static_cast<uint64_t>(n);
    size = std::max(size, pos);
  }
  int overflow(int c) override {
    advance(1);
    return c;
  }
  std::streamsize xsputn(const char*, std::streamsize n) override {
    advance(n);
    return n;
  }
  pos_type seekoff(off_type off, std::ios_base::seekdir dir, std::ios_base::openmode) override {
    if (dir == std::ios_base::beg)
      pos = static_cast<uint64_t>(off);
    else if (dir == std::ios_base::cur)
      pos = static_cast<uint64_t>(static_cast<int64_t>(pos) + off);
    else
      pos = static_cast<uint64_t>(static_cast<int64_t>(size) + off);
    return pos_type(static_cast<off_type>(pos));
  }
  pos_type seekpos(pos_type p, std::ios_base::openmode) override {
    pos = static_cast<uint64_t>(static_cast<off_type>(p));
    return p;
  }
};

uint64_t serialized_index_bytes(const ILabelIndex& x) {
  CountingBuf buf;
  std::ostream out(&buf);
  save_index(x, out);
  return buf.size;
}

void write_index(const ILabelIndex& x, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create file: " + path);
  save_index(x, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---- shared option blocks ---------------------------------------------------

struct TrainFlags {
  TrainConfig cfg;
  bool no_l1 = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dim", cfg.dim, "embedding dimension")->capture_default_str();
    cmd->add_option("--lr", cfg.learning_rate, "Adam learning rate")->capture_default_str();
    cmd->add_option("--pairs", cfg.pairs_per_epoch, "vertex pairs sampled per epoch")
        ->capture_default_str();
    cmd->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
    cmd->add_option("--tau-start", cfg.tau_start, "initial surrogate temperature")
        ->capture_default_str();
    cmd->add_option("--tau-end", cfg.tau_end, "final surrogate temperature")
        ->capture_default_str();
    cmd->add_option("--alpha", cfg.final_alpha, "operational label weight")
        ->capture_default_str();
    cmd->add_option("--beta", cfg.final_beta, "operational structure weight")
        ->capture_default_str();
    cmd->add_option("--alphabet", cfg.alphabet_override,
                    "reserve embedding rows beyond the graph's labels");
    cmd->add_flag("--no-l1", no_l1, "skip the post-training L1 normalization");
  }

  TrainConfig resolve(uint64_t seed) const {
    TrainConfig c = cfg;
    c.seed = seed;
    c.l1_normalize = !no_l1;
    return c;
  }
};

struct ToggleFlags {
  bool no_key_lower = false, no_key_upper = false, no_dominance = false, no_hop = false,
       no_degree = false;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--no-key-lower", no_key_lower, "disable the key lower-bound filter");
    cmd->add_flag("--no-key-upper", no_key_upper, "disable the key upper-bound filter");
    cmd->add_flag("--no-dominance", no_dominance, "disable embedding dominance pruning");
    cmd->add_flag("--no-hop", no_hop, "disable hop-synopsis pruning");
    cmd->add_flag("--no-degree", no_degree, "disable degree-synopsis pruning");
  }

  PruningToggles resolve() const {
    return {!no_key_lower, !no_key_upper, !no_dominance, !no_hop, !no_degree};
  }
};

struct IndexSource {
  std::string index_path;
  bool rebuild = false;
  uint32_t t_max = 2;
  uint32_t fanout = BPlusTree::kDefaultFanout;

  void attach(CLI::App* cmd) {
    auto* path = cmd->add_option("--index", index_path, "index file to load");
    auto* rb = cmd->add_flag("--rebuild", rebuild, "rebuild the index from graph + model");
    cmd->add_option("--t-max", t_max, "hop synopsis depth (with --rebuild)")
        ->capture_default_str();
    cmd->add_option("--fanout", fanout, "tree fanout (with --rebuild)")->capture_default_str();
    path->excludes(rb);
    rb->excludes(path);
  }

  // may adjust table.alpha when rebuilding
  ILabelIndex resolve(const Graph& g, LabelEmbeddingTable& table, uint64_t& build_us,
                      uint64_t& bytes) const {
    if (rebuild) {
      const auto t0 = std::chrono::steady_clock::now();
      ILabelIndex x = build_index(g, table, t_max, fanout);
      build_us = now_us_since(t0);
      bytes = serialized_index_bytes(x);
      return x;
    }
    if (index_path.empty())
      throw std::runtime_error("either --index or --rebuild is required");
    build_us = 0;
    return read_index(index_path, bytes);
  }
};

uint32_t resolve_workers(uint32_t flag_value) {
  if (const char* env = std::getenv("LIVE_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0 || v > 4096)
      throw std::runtime_error("LIVE_THREADS must be a positive integer");
    return static_cast<uint32_t>(v);
  }
  return flag_value;
}

void write_match_file(const std::string& out_path, std::vector<std::vector<uint32_t>> mappings,
                      uint64_t filter_us, uint64_t order_us, uint64_t refine_us, double power) {
  std::ostringstream text;
  write_matches(std::move(mappings), filter_us, order_us, refine_us, power, text);
  if (out_path.empty()) {
    std::cout << text.str();
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot create file: " + out_path);
  out << text.str();
  if (!out) throw std::runtime_error("write failed: " + out_path);
}

// ---- subcommands ------------------------------------------------------------

int run_gen(const std::string& from, uint32_t n, double avg_deg, const LabelDistribution& dist,
            uint32_t query_size, double query_avg_deg, uint64_t seed, const std::string& out) {
  if (!from.empty()) {
    const Graph base = read_graph(from);
    const Graph q = generate_query(base, query_size, query_avg_deg, seed);
    write_graph(q, out);
    std::cout << "wrote query: " << q.vertex_count() << " vertices, " << q.edge_count
              << " edges -> " << out << '\n';
    return 0;
  }
  const NwsParams nws = nws_params_for_avg_degree(avg_deg);
  const Graph g = generate_synthetic(n, nws.k, nws.p, dist, seed);
  write_graph(g, out);
  std::cout << "wrote graph: " << g.vertex_count() << " vertices, " << g.edge_count
            << " edges -> " << out << '\n';
  return 0;
}

int run_train(const std::string& graph_path, const TrainFlags& flags, uint64_t seed,
              const std::string& out) {
  Graph g = read_graph(graph_path);
  LabelMapping::build(g).apply(g);
  const LabelEmbeddingTable t = train(g, flags.resolve(seed));
  write_model(t, out);
  std::cout << "wrote model: dim=" << t.dim << " alphabet=" << t.alphabet << " -> " << out
            << '\n';
  return 0;
}

int run_index(const std::string& graph_path, const std::string& model_path, uint32_t t_max,
              uint32_t fanout, const std::string& out) {
  Graph g = read_graph(graph_path);
  LabelMapping::build(g).apply(g);
  LabelEmbeddingTable t = read_model(model_path);
  const double alpha_before = t.alpha;
  const ILabelIndex x = build_index(g, t, t_max, fanout);
  write_index(x, out);
  std::cout << "wrote index: " << x.vertex_count << " vertices, " << serialized_index_bytes(x)
            << " bytes -> " << out << '\n';
  if (t.alpha != alpha_before)
    std::cout << "note: alpha raised to " << t.alpha << " to keep label clusters disjoint\n";
  return 0;
}

int run_query(const std::string& graph_path, const std::string& model_path,
              const IndexSource& src, const std::string& query_path, const ToggleFlags& toggles,
              bool no_timing, const std::string& out) {
  Graph g = read_graph(graph_path);
  const LabelMapping mapping = LabelMapping::build(g);
  mapping.apply(g);
  LabelEmbeddingTable table = read_model(model_path);
  uint64_t build_us = 0, bytes = 0;
  const ILabelIndex index = src.resolve(g, table, build_us, bytes);

  Graph q = read_graph(query_path);
  if (!mapping.apply_to_query(q)) {
    // a query label absent from the data graph: nothing can match
    write_match_file(out, {}, 0, 0, 0, 100.0);
    return 0;
  }
  const MatchResult r = match_query(g, table, index, q, toggles.resolve());
  const uint64_t f = no_timing ? 0 : r.filter_us;
  const uint64_t o = no_timing ? 0 : r.order_us;
  const uint64_t rf = no_timing ? 0 : r.refine_us;
  write_match_file(out, r.matches.mappings, f, o, rf, r.pruning_power_pct);
  if (!out.empty())
    std::cout << "wrote matches: " << r.matches.mappings.size() << " -> " << out << '\n';
  return 0;
}

int run_oracle(const std::string& graph_path, const std::string& query_path, bool no_timing,
               const std::string& out) {
  const Graph g = read_graph(graph_path);
  const Graph q = read_graph(query_path);
  const auto t0 = std::chrono::steady_clock::now();
  auto mappings = oracle_match(g, q);
  const uint64_t us = no_timing ? 0 : now_us_since(t0);
  write_match_file(out, std::move(mappings), 0, 0, us, 0.0);
  return 0;
}

int run_bench(const std::string& graph_path, const std::string& model_path, bool do_train,
              const TrainFlags& train_flags, const IndexSource& src, uint32_t query_count,
              uint32_t query_size, double query_avg_deg, uint64_t seed, uint32_t workers,
              const ToggleFlags& toggles, bool no_timing, const std::string& out) {
  Graph g = read_graph(graph_path);
  LabelMapping::build(g).apply(g);

  if (!do_train && model_path.empty())
    throw std::runtime_error("either --model or --train is required");

  OfflineCosts offline;
  LabelEmbeddingTable table;
  if (do_train) {
    const auto t0 = std::chrono::steady_clock::now();
    table = train(g, train_flags.resolve(seed));
    offline.train_us = now_us_since(t0);
  } else {
    table = read_model(model_path);
  }

  uint64_t build_us = 0;
  const ILabelIndex index = src.resolve(g, table, build_us, offline.index_bytes);
  offline.index_build_us = build_us;

  std::vector<Graph> queries;
  queries.reserve(query_count);
  for (uint32_t i = 0; i < query_count; ++i)
    queries.push_back(generate_query(g, query_size, query_avg_deg, splitmix64(seed + 1 + i)));

  BenchReport report = run_bench(g, table, index, queries, resolve_workers(workers), no_timing,
                                 toggles.resolve());
  report.offline = offline;
  if (no_timing) {
    report.offline.train_us = 0;
    report.offline.index_build_us = 0;
  }

  std::ostringstream csv;
  write_bench_csv(report, csv);
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot create file: " + out);
    f << csv.str();
    if (!f) throw std::runtime_error("write failed: " + out);
    uint64_t total_matches = 0;
    for (const auto& row : report.rows) total_matches += row.matches;
    std::cout << "wrote report: " << report.rows.size() << " queries, " << total_matches
              << " total matches -> " << out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monotonic-embedding subgraph matcher"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic graph or extract a query");
  std::string gen_from, gen_out, dist_name = "uniform";
  uint32_t gen_n = 50000, gen_labels = 15, gen_qsize = 8;
  double gen_avg = 5.0, gen_qavg = 3.0, gauss_mean = 0.0, gauss_stddev = 0.0, zipf_exp = 1.0;
  uint64_t gen_seed = 0;
  gen->add_option("--n", gen_n, "vertex count")->capture_default_str();
  gen->add_option("--avg-deg", gen_avg, "target average degree")->capture_default_str();
  gen->add_option("--labels", gen_labels, "label alphabet size")->capture_default_str();
  gen->add_option("--dist", dist_name, "label distribution: uniform|gaussian|zipf")
      ->capture_default_str();
  gen->add_option("--gauss-mean", gauss_mean, "gaussian mean (1-based label space)");
  gen->add_option("--gauss-stddev", gauss_stddev, "gaussian standard deviation");
  gen->add_option("--zipf-exp", zipf_exp, "zipf exponent")->capture_default_str();
  gen->add_option("--from", gen_from, "extract a query from this graph instead");
  gen->add_option("--query-size", gen_qsize, "query vertex count (with --from)")
      ->capture_default_str();
  gen->add_option("--query-avg-deg", gen_qavg, "query average degree (with --from)")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "random seed")->required();
  gen->add_option("-o,--out", gen_out, "output path")->required();

  // train
  auto* tr = app.add_subcommand("train", "train an embedding model");
  std::string tr_graph, tr_out;
  uint64_t tr_seed = 0;
  TrainFlags tr_flags;
  tr->add_option("--graph", tr_graph, "data graph path")->required();
  tr->add_option("--seed", tr_seed, "random seed")->required();
  tr->add_option("-o,--out", tr_out, "model output path")->required();
  tr_flags.attach(tr);

  // index
  auto* ix = app.add_subcommand("index", "build and save the index");
  std::string ix_graph, ix_model, ix_out;
  uint32_t ix_tmax = 2, ix_fanout = BPlusTree::kDefaultFanout;
  ix->add_option("--graph", ix_graph, "data graph path")->required();
  ix->add_option("--model", ix_model, "model path")->required();
  ix->add_option("--t-max", ix_tmax, "hop synopsis depth")->capture_default_str();
  ix->add_option("--fanout", ix_fanout, "tree fanout")->capture_default_str();
  ix->add_option("-o,--out", ix_out, "index output path")->required();

  // query
  auto* qu = app.add_subcommand("query", "answer one query graph");
  std::string qu_graph, qu_model, qu_query, qu_out;
  bool qu_no_timing = false;
  IndexSource qu_src;
  ToggleFlags qu_toggles;
  qu->add_option("--graph", qu_graph, "data graph path")->required();
  qu->add_option("--model", qu_model, "model path")->required();
  qu->add_option("--query", qu_query, "query graph path")->required();
  qu->add_option("-o,--out", qu_out, "match output path (default: stdout)");
  qu->add_flag("--no-timing", qu_no_timing, "report zero timings for byte-stable output");
  qu_src.attach(qu);
  qu_toggles.attach(qu);

  // oracle
  auto* oc = app.add_subcommand("oracle", "brute-force reference matcher");
  std::string oc_graph, oc_query, oc_out;
  bool oc_no_timing = false;
  oc->add_option("--graph", oc_graph, "data graph path")->required();
  oc->add_option("--query", oc_query, "query graph path")->required();
  oc->add_option("-o,--out", oc_out, "match output path (default: stdout)");
  oc->add_flag("--no-timing", oc_no_timing, "report zero timings for byte-stable output");

  // bench
  auto* be = app.add_subcommand("bench", "run a query workload and write a CSV report");
  std::string be_graph, be_model, be_out;
  bool be_train = false, be_no_timing = false;
  uint32_t be_queries = 100, be_qsize = 8, be_workers = 1;
  double be_qavg = 3.0;
  uint64_t be_seed = 0;
  TrainFlags be_train_flags;
  IndexSource be_src;
  ToggleFlags be_toggles;
  be->add_option("--graph", be_graph, "data graph path")->required();
  auto* be_model_opt = be->add_option("--model", be_model, "model path");
  auto* be_train_flag = be->add_flag("--train", be_train, "train in-process instead");
  be_model_opt->excludes(be_train_flag);
  be_train_flag->excludes(be_model_opt);
  be->add_option("--queries", be_queries, "workload size")->capture_default_str();
  be->add_option("--query-size", be_qsize, "query vertex count")->capture_default_str();
  be->add_option("--query-avg-deg", be_qavg, "query average degree")->capture_default_str();
  be->add_option("--seed", be_seed, "random seed")->required();
  be->add_option("--workers", be_workers, "concurrent query workers")->capture_default_str();
  be->add_flag("--no-timing", be_no_timing, "zero all timing fields for byte-stable reports");
  be->add_option("-o,--out", be_out, "report path (default: stdout)");
  be_train_flags.attach(be);
  be_src.attach(be);
  be_toggles.attach(be);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      LabelDistribution dist;
      dist.alphabet = gen_labels;
      dist.gauss_mean = gauss_mean;
      dist.gauss_stddev = gauss_stddev;
      dist.zipf_exponent = zipf_exp;
      if (dist_name == "uniform")
        dist.kind = LabelDist::uniform;
      else if (dist_name == "gaussian")
        dist.kind = LabelDist::gaussian;
      else if (dist_name == "zipf")
        dist.kind = LabelDist::zipf;
      else
        throw std::runtime_error("unknown label distribution: " + dist_name);
      return run_gen(gen_from, gen_n, gen_avg, dist, gen_qsize, gen_qavg, gen_seed, gen_out);
    }
    if (tr->parsed()) return run_train(tr_graph, tr_flags, tr_seed, tr_out);
    if (ix->parsed()) return run_index(ix_graph, ix_model, ix_tmax, ix_fanout, ix_out);
    if (qu->parsed())
      return run_query(qu_graph, qu_model, qu_src, qu_query, qu_toggles, qu_no_timing, qu_out);
    if (oc->parsed()) return run_oracle(oc_graph, oc_query, oc_no_timing, oc_out);
    if (be->parsed())
      return run_bench(be_graph, be_model, be_train, be_train_flags, be_src, be_queries,
                       be_qsize, be_qavg, be_seed, be_workers, be_toggles, be_no_timing, be_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
