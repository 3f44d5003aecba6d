#pragma once
// 1-D key index over MVEs.
//
// key(v) = alpha * ||VLE(v)||_2 + beta * ||VSE(v)||_2. With alpha/beta above
// M / delta_min (M = largest VSE norm, delta_min = smallest gap between
// adjacent label VLE norms), the key ranges of distinct labels are disjoint
// intervals, so one B+-tree over all vertices behaves like per-label
// clustered storage. Each vertex also carries multi-resolution synopses:
//   hop MBR (t):    per-dimension min/max of VLEs within t hops (center in)
//   degree MBR (d): per-dimension sums of the d smallest / d largest
//                   neighbor VLE values
// Both are containment bounds for any substructure match rooted at v.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "live/bptree.hpp"
#include "live/embedding.hpp"
#include "live/graph.hpp"

namespace live {

inline double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double compute_key(uint32_t v, const EmbeddingSet& e, double alpha, double beta) {
  return alpha * l2_norm(e.vle_of(v)) + beta * l2_norm(e.vse_of(v));
}

struct KeyMap {
  uint32_t alphabet = 0;
  std::vector<uint32_t> order;         // labels sorted ascending by VLE norm
  std::vector<double> base_key;        // per label: alpha * ||VLE(label)||
  std::vector<double> next_label_key;  // base key of the successor label; +inf for the last
  double max_vse_norm = 0.0;           // M
  double delta_min = std::numeric_limits<double>::infinity();
};

struct SeparationResult {
  double threshold = 0.0;  // M / delta_min
  bool alpha_adjusted = false;
};

namespace detail {

// Checks alpha/beta > M/delta_min, raising alpha by a 1% margin when it is
// not. Two labels with identical VLE norms make separation impossible.
inline SeparationResult enforce_separation_norms(LabelEmbeddingTable& t,
                                                 const std::vector<double>& label_norms,
                                                 double max_vse_norm, KeyMap* out_map) {
  if (!(t.alpha > 0.0) || !(t.beta > 0.0))
    throw std::invalid_argument("separation: alpha and beta must be positive");
  const uint32_t sigma = static_cast<uint32_t>(label_norms.size());
  std::vector<uint32_t> order(sigma);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return label_norms[a] < label_norms[b]; });

  double delta_min = std::numeric_limits<double>::infinity();
  for (uint32_t r = 1; r < sigma; ++r)
    delta_min = std::min(delta_min, label_norms[order[r]] - label_norms[order[r - 1]]);
  if (delta_min <= 0.0)
    throw std::runtime_error(
        "separation failure: two labels share a VLE norm (delta_min = 0); retrain or jitter the "
        "embeddings");

  SeparationResult res;
  res.threshold = std::isinf(delta_min) ? 0.0 : max_vse_norm / delta_min;
  if (t.alpha / t.beta <= res.threshold) {
    t.alpha = res.threshold * t.beta * 1.01;
    res.alpha_adjusted = true;
  }

  if (out_map) {
    out_map->alphabet = sigma;
    out_map->order = order;
    out_map->max_vse_norm = max_vse_norm;
    out_map->delta_min = delta_min;
    out_map->base_key.resize(sigma);
    out_map->next_label_key.assign(sigma, std::numeric_limits<double>::infinity());
    for (uint32_t l = 0; l < sigma; ++l) out_map->base_key[l] = t.alpha * label_norms[l];
    for (uint32_t r = 0; r + 1 < sigma; ++r)
      out_map->next_label_key[order[r]] = out_map->base_key[order[r + 1]];
  }
  return res;
}

inline std::vector<double> label_vle_norms(const LabelEmbeddingTable& t) {
  std::vector<double> norms(t.alphabet);
  for (uint32_t l = 0; l < t.alphabet; ++l) {
    const auto v = t.vle(l);
    norms[l] = l2_norm({v.data(), v.size()});
  }
  return norms;
}

}  // namespace detail

// May raise t.alpha; returns the threshold and whether it did.
inline SeparationResult enforce_separation(LabelEmbeddingTable& t, const Graph& g) {
  const EmbeddingSet e = compute_embeddings(g, t);
  double m = 0.0;
  for (uint32_t v = 0; v < e.count; ++v) m = std::max(m, l2_norm(e.vse_of(v)));
  return detail::enforce_separation_norms(t, detail::label_vle_norms(t), m, nullptr);
}

// ---- synopses --------------------------------------------------------------

struct HopSynopses {
  uint32_t t_max = 0, dim = 0;
  std::vector<double> data;  // per vertex, per t in [1,t_max]: lower d, upper d

  size_t stride() const { return static_cast<size_t>(t_max) * 2 * dim; }
  std::span<const double> lower(uint32_t v, uint32_t t) const {
    return {&data[v * stride() + static_cast<size_t>(t - 1) * 2 * dim], dim};
  }
  std::span<const double> upper(uint32_t v, uint32_t t) const {
    return {&data[v * stride() + static_cast<size_t>(t - 1) * 2 * dim + dim], dim};
  }
};

// One bounded BFS per vertex; the MBR at hop t extends the MBR at t-1 with the
// new frontier's VLEs.
inline HopSynopses compute_hop_synopses(const Graph& g, const EmbeddingSet& e, uint32_t t_max) {
  if (t_max < 1) throw std::invalid_argument("compute_hop_synopses: t_max must be >= 1");
  const uint32_t n = g.vertex_count(), d = e.dim;
  HopSynopses syn;
  syn.t_max = t_max;
  syn.dim = d;
  syn.data.resize(static_cast<size_t>(n) * syn.stride());

  std::vector<uint32_t> visit_epoch(n, 0), frontier, next;
  uint32_t epoch = 0;
  std::vector<double> lo(d), hi(d);
  for (uint32_t v = 0; v < n; ++v) {
    ++epoch;
    const auto own = e.vle_of(v);
    for (uint32_t k = 0; k < d; ++k) lo[k] = hi[k] = own[k];
    visit_epoch[v] = epoch;
    frontier.assign(1, v);
    double* slot = &syn.data[v * syn.stride()];
    for (uint32_t t = 1; t <= t_max; ++t) {
      next.clear();
      for (uint32_t u : frontier)
        for (uint32_t w : g.adjacency[u])
          if (visit_epoch[w] != epoch) {
            visit_epoch[w] = epoch;
            next.push_back(w);
            const auto wv = e.vle_of(w);
            for (uint32_t k = 0; k < d; ++k) {
              lo[k] = std::min(lo[k], wv[k]);
              hi[k] = std::max(hi[k], wv[k]);
            }
          }
      frontier.swap(next);
      std::copy(lo.begin(), lo.end(), slot);
      std::copy(hi.begin(), hi.end(), slot + d);
      slot += 2 * static_cast<size_t>(d);
    }
  }
  return syn;
}

struct DegreeSynopses {
  uint32_t dim = 0;
  std::vector<uint64_t> offset;  // n + 1, in doubles; per vertex: dim * 2 * (deg + 1)
  std::vector<double> sums;

  uint32_t degree_of(uint32_t v) const {
    return static_cast<uint32_t>((offset[v + 1] - offset[v]) / (2 * dim) - 1);
  }
  // sum of the delta smallest neighbor VLE values in dimension k
  double lower_sum(uint32_t v, uint32_t k, uint32_t delta) const {
    return sums[offset[v] + static_cast<size_t>(k) * 2 * (degree_of(v) + 1) + delta];
  }
  // sum of the delta largest neighbor VLE values in dimension k
  double upper_sum(uint32_t v, uint32_t k, uint32_t delta) const {
    const uint32_t deg = degree_of(v);
    return sums[offset[v] + static_cast<size_t>(k) * 2 * (deg + 1) + (deg + 1) + delta];
  }
};

// Every sum is a left-fold in ascending value order, so the bounds are
// bit-identical to enumerating the extreme delta-subset and adding its values
// smallest-first. Quadratic in the degree on the upper side; fine for
// bounded-degree graphs.
inline DegreeSynopses compute_degree_synopses(const Graph& g, const EmbeddingSet& e) {
  const uint32_t n = g.vertex_count(), d = e.dim;
  DegreeSynopses syn;
  syn.dim = d;
  syn.offset.resize(n + 1);
  syn.offset[0] = 0;
  for (uint32_t v = 0; v < n; ++v)
    syn.offset[v + 1] = syn.offset[v] + static_cast<uint64_t>(d) * 2 * (g.degree(v) + 1);
  syn.sums.resize(syn.offset[n]);

  std::vector<double> values;
  for (uint32_t v = 0; v < n; ++v) {
    const uint32_t deg = g.degree(v);
    double* slot = &syn.sums[syn.offset[v]];
    for (uint32_t k = 0; k < d; ++k) {
      values.clear();
      for (uint32_t u : g.adjacency[v]) values.push_back(e.vle_of(u)[k]);
      std::sort(values.begin(), values.end());
      double* lower = slot + static_cast<size_t>(k) * 2 * (deg + 1);
      double* upper = lower + (deg + 1);
      lower[0] = upper[0] = 0.0;
      double acc = 0.0;
      for (uint32_t r = 0; r < deg; ++r) {
        acc += values[r];
        lower[r + 1] = acc;
      }
      for (uint32_t delta = 1; delta <= deg; ++delta) {
        acc = 0.0;
        for (uint32_t r = deg - delta; r < deg; ++r) acc += values[r];
        upper[delta] = acc;
      }
    }
  }
  return syn;
}

// ---- the index -------------------------------------------------------------

struct ILabelIndex {
  uint32_t vertex_count = 0;
  uint32_t dim = 0;
  uint32_t t_max = 1;
  uint32_t fanout = BPlusTree::kDefaultFanout;
  double alpha = 0.0, beta = 0.0;
  BPlusTree tree;            // owns the sorted key / vertex-id arrays
  std::vector<double> mve;   // vertex_count x dim, in vertex-id order
  HopSynopses hop;
  DegreeSynopses deg;
  KeyMap keymap;

  std::span<const double> mve_of(uint32_t v) const {
    return {&mve[static_cast<size_t>(v) * dim], dim};
  }
};

// Enforces cluster separation (which may raise table.alpha in place), then
// materializes keys, tree, and synopses.
inline ILabelIndex build_index(const Graph& g, LabelEmbeddingTable& table, uint32_t t_max,
                               uint32_t fanout = BPlusTree::kDefaultFanout) {
  if (t_max < 1) throw std::invalid_argument("build_index: t_max must be >= 1");
  EmbeddingSet e = compute_embeddings(g, table);
  const uint32_t n = g.vertex_count(), d = table.dim;

  std::vector<double> vse_norms(n);
  double m = 0.0;
  for (uint32_t v = 0; v < n; ++v) {
    vse_norms[v] = l2_norm(e.vse_of(v));
    m = std::max(m, vse_norms[v]);
  }
  ILabelIndex index;
  detail::enforce_separation_norms(table, detail::label_vle_norms(table), m, &index.keymap);

  // MVEs may predate an alpha adjustment; redo them with the final mixture
  for (uint32_t v = 0; v < n; ++v) {
    const auto vle = e.vle_of(v);
    const auto vse = e.vse_of(v);
    double* mv = &e.mve[static_cast<size_t>(v) * d];
    for (uint32_t k = 0; k < d; ++k) mv[k] = table.alpha * vle[k] + table.beta * vse[k];
  }

  std::vector<uint32_t> by_key(n);
  std::iota(by_key.begin(), by_key.end(), 0u);
  std::vector<double> key(n);
  for (uint32_t v = 0; v < n; ++v)
    key[v] = table.alpha * l2_norm(e.vle_of(v)) + table.beta * vse_norms[v];
  std::sort(by_key.begin(), by_key.end(), [&](uint32_t a, uint32_t b) {
    return key[a] != key[b] ? key[a] < key[b] : a < b;
  });
  std::vector<double> sorted_keys(n);
  std::vector<uint32_t> sorted_vids(n);
  for (uint32_t r = 0; r < n; ++r) {
    sorted_keys[r] = key[by_key[r]];
    sorted_vids[r] = by_key[r];
  }

  index.vertex_count = n;
  index.dim = d;
  index.t_max = t_max;
  index.fanout = fanout;
  index.alpha = table.alpha;
  index.beta = table.beta;
  index.tree = BPlusTree::bulk_load(std::move(sorted_keys), std::move(sorted_vids), fanout);
  index.hop = compute_hop_synopses(g, e, t_max);
  index.deg = compute_degree_synopses(g, e);
  index.mve = std::move(e.mve);
  return index;
}

// ---- binary serialization ---------------------------------------------------
// Layout: magic "LIVEIDX1", u64 FNV-1a checksum of everything that follows,
// then header fields and the flat arrays, all little-endian.

namespace detail {

constexpr char kIndexMagic[8] = {'L', 'I', 'V', 'E', 'I', 'D', 'X', '1'};
constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr uint64_t kFnvPrime = 0x100000001b3ull;

static_assert(std::endian::native == std::endian::little,
              "index serialization assumes a little-endian host");

inline void fnv_mix(uint64_t& h, const void* p, size_t len) {
  const auto* b = static_cast<const unsigned char*>(p);
  for (size_t i = 0; i < len; ++i) {
    h ^= b[i];
    h *= kFnvPrime;
  }
}

struct HashedWriter {
  std::ostream& out;
  uint64_t hash = kFnvOffset;
  template <typename T>
  void pod(const T& v) {
    fnv_mix(hash, &v, sizeof v);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  template <typename T>
  void array(const std::vector<T>& v) {
    pod(static_cast<uint64_t>(v.size()));
    if (!v.empty()) {
      fnv_mix(hash, v.data(), v.size() * sizeof(T));
      out.write(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
    }
  }
};

struct HashedReader {
  std::istream& in;
  uint64_t hash = kFnvOffset;
  template <typename T>
  void pod(T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("index load error: truncated file");
    fnv_mix(hash, &v, sizeof v);
  }
  template <typename T>
  void array(std::vector<T>& v, uint64_t max_elems) {
    uint64_t count = 0;
    pod(count);
    if (count > max_elems) throw std::runtime_error("index load error: implausible array size");
    v.resize(count);
    if (count) {
      in.read(reinterpret_cast<char*>(v.data()), count * sizeof(T));
      if (!in) throw std::runtime_error("index load error: truncated file");
      fnv_mix(hash, v.data(), count * sizeof(T));
    }
  }
};

}  // namespace detail

inline void save_index(const ILabelIndex& x, std::ostream& out) {
  using namespace detail;
  out.write(kIndexMagic, sizeof kIndexMagic);
  const auto checksum_pos = out.tellp();
  uint64_t placeholder = 0;
  out.write(reinterpret_cast<const char*>(&placeholder), sizeof placeholder);

  HashedWriter w{out};
  w.pod(x.vertex_count);
  w.pod(x.dim);
  w.pod(x.t_max);
  w.pod(x.fanout);
  w.pod(x.alpha);
  w.pod(x.beta);
  {
    std::vector<double> keys(x.tree.keys().begin(), x.tree.keys().end());
    std::vector<uint32_t> vids(x.tree.vids().begin(), x.tree.vids().end());
    w.array(keys);
    w.array(vids);
  }
  w.array(x.mve);
  w.pod(x.hop.t_max);
  w.pod(x.hop.dim);
  w.array(x.hop.data);
  w.pod(x.deg.dim);
  w.array(x.deg.offset);
  w.array(x.deg.sums);
  w.pod(x.keymap.alphabet);
  w.array(x.keymap.order);
  w.array(x.keymap.base_key);
  w.array(x.keymap.next_label_key);
  w.pod(x.keymap.max_vse_norm);
  w.pod(x.keymap.delta_min);

  out.seekp(checksum_pos);
  out.write(reinterpret_cast<const char*>(&w.hash), sizeof w.hash);
  out.seekp(0, std::ios::end);
  if (!out) throw std::runtime_error("index save error: write failed");
}

inline ILabelIndex load_index(std::istream& in) {
  using namespace detail;
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kIndexMagic, sizeof magic) != 0)
    throw std::runtime_error("index load error: bad magic (not a LIVEIDX1 file)");
  uint64_t expected = 0;
  in.read(reinterpret_cast<char*>(&expected), sizeof expected);
  if (!in) throw std::runtime_error("index load error: truncated file");

  constexpr uint64_t kMaxElems = 1ull << 40;
  HashedReader r{in};
  ILabelIndex x;
  r.pod(x.vertex_count);
  r.pod(x.dim);
  r.pod(x.t_max);
  r.pod(x.fanout);
  r.pod(x.alpha);
  r.pod(x.beta);
  std::vector<double> keys;
  std::vector<uint32_t> vids;
  r.array(keys, kMaxElems);
  r.array(vids, kMaxElems);
  r.array(x.mve, kMaxElems);
  r.pod(x.hop.t_max);
  r.pod(x.hop.dim);
  r.array(x.hop.data, kMaxElems);
  r.pod(x.deg.dim);
  r.array(x.deg.offset, kMaxElems);
  r.array(x.deg.sums, kMaxElems);
  r.pod(x.keymap.alphabet);
  r.array(x.keymap.order, kMaxElems);
  r.array(x.keymap.base_key, kMaxElems);
  r.array(x.keymap.next_label_key, kMaxElems);
  r.pod(x.keymap.max_vse_norm);
  r.pod(x.keymap.delta_min);

  if (in.peek() != std::istream::traits_type::eof())
    throw std::runtime_error("index load error: trailing bytes");
  if (r.hash != expected) throw std::runtime_error("index load error: checksum mismatch");
  if (keys.size() != x.vertex_count || vids.size() != x.vertex_count ||
      x.mve.size() != static_cast<size_t>(x.vertex_count) * x.dim ||
      x.deg.offset.size() != static_cast<size_t>(x.vertex_count) + 1 ||
      x.keymap.order.size() != x.keymap.alphabet ||
      x.keymap.base_key.size() != x.keymap.alphabet ||
      x.keymap.next_label_key.size() != x.keymap.alphabet)
    throw std::runtime_error("index load error: inconsistent section sizes");
  x.tree = BPlusTree::bulk_load(std::move(keys), std::move(vids), x.fanout);
  return x;
}

}  // namespace live
