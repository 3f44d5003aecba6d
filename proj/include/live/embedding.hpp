#pragma once
// Monotonic vertex embeddings.
//
// Each label carries a learnable raw parameter vector; its vertex label
// embedding (VLE) is softplus(raw), strictly positive. A vertex's structural
// embedding (VSE) is the sum of its neighbors' VLEs, and the mixed embedding
// (MVE) is alpha * VLE + beta * VSE. Positivity + summation make the MVE
// monotone under substructure containment: dropping neighbors can only lower
// coordinates, which is what the index and the pruning cascade rely on.

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "live/graph.hpp"
#include "live/rng.hpp"

namespace live {

inline double softplus(double x) {
  // stable on both tails; softplus(0) = ln 2
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double softplus_inverse(double y) {
  if (y <= 0.0) throw std::invalid_argument("softplus_inverse: argument must be positive");
  return std::log(std::expm1(y));
}

struct LabelEmbeddingTable {
  uint32_t dim = 2;
  uint32_t alphabet = 0;
  double alpha = 100000.0;
  double beta = 1.0;
  bool l1_normalized = false;
  std::vector<double> raw;  // alphabet x dim, row-major

  double* raw_row(uint32_t label) { return raw.data() + static_cast<size_t>(label) * dim; }
  const double* raw_row(uint32_t label) const {
    return raw.data() + static_cast<size_t>(label) * dim;
  }

  // VLE = softplus(raw), L1-normalized when the post-training flag is set
  std::vector<double> vle(uint32_t label) const {
    if (label >= alphabet) throw std::out_of_range("vle: label outside alphabet");
    std::vector<double> out(dim);
    const double* r = raw_row(label);
    double l1 = 0.0;
    for (uint32_t k = 0; k < dim; ++k) {
      out[k] = softplus(r[k]);
      l1 += out[k];
    }
    if (l1_normalized)
      for (auto& x : out) x /= l1;
    return out;
  }
};

inline LabelEmbeddingTable make_table(uint32_t alphabet, uint32_t dim, uint64_t seed,
                                      double alpha = 100000.0, double beta = 1.0) {
  LabelEmbeddingTable t;
  t.dim = dim;
  t.alphabet = alphabet;
  t.alpha = alpha;
  t.beta = beta;
  t.raw.resize(static_cast<size_t>(alphabet) * dim);
  rng_t rng = make_rng(seed, /*stream=*/0xe0b);
  for (auto& x : t.raw) x = uniform_range(rng, -1.0, 1.0);
  return t;
}

// Fixture helper: a table whose (un-normalized) VLEs equal the given values.
inline LabelEmbeddingTable make_table_with_vles(const std::vector<std::vector<double>>& vles,
                                                double alpha, double beta) {
  if (vles.empty()) throw std::invalid_argument("make_table_with_vles: empty");
  LabelEmbeddingTable t;
  t.alphabet = static_cast<uint32_t>(vles.size());
  t.dim = static_cast<uint32_t>(vles.front().size());
  t.alpha = alpha;
  t.beta = beta;
  t.raw.reserve(static_cast<size_t>(t.alphabet) * t.dim);
  for (const auto& v : vles) {
    if (v.size() != t.dim) throw std::invalid_argument("make_table_with_vles: ragged rows");
    for (double y : v) t.raw.push_back(softplus_inverse(y));
  }
  return t;
}

// ---- model file ----------------------------------------------------------
// Text format, one header line then one raw-parameter row per label:
//   live-model v1 <dim> <alphabet> <alpha> <beta> <l1_normalized:0|1>
// Doubles are printed with enough digits to round-trip bit-for-bit.

inline void save_model(const LabelEmbeddingTable& t, std::ostream& out) {
  out << "live-model v1 " << t.dim << ' ' << t.alphabet << ' ';
  const auto dump = [&out](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
  };
  dump(t.alpha);
  out << ' ';
  dump(t.beta);
  out << ' ' << (t.l1_normalized ? 1 : 0) << '\n';
  for (uint32_t l = 0; l < t.alphabet; ++l) {
    const double* r = t.raw_row(l);
    for (uint32_t k = 0; k < t.dim; ++k) {
      if (k) out << ' ';
      dump(r[k]);
    }
    out << '\n';
  }
}

inline LabelEmbeddingTable load_model(std::istream& in) {
  std::string word, version;
  if (!(in >> word >> version) || word != "live-model" || version != "v1")
    throw std::runtime_error("model parse error: expected 'live-model v1' header");
  LabelEmbeddingTable t;
  int norm_flag = -1;
  if (!(in >> t.dim >> t.alphabet >> t.alpha >> t.beta >> norm_flag))
    throw std::runtime_error("model parse error: malformed header fields");
  if (t.dim == 0) throw std::runtime_error("model parse error: dimension must be positive");
  if (norm_flag != 0 && norm_flag != 1)
    throw std::runtime_error("model parse error: normalization flag must be 0 or 1");
  t.l1_normalized = norm_flag == 1;
  t.raw.resize(static_cast<size_t>(t.alphabet) * t.dim);
  for (auto& x : t.raw)
    if (!(in >> x)) throw std::runtime_error("model parse error: parameter section truncated");
  std::string extra;
  if (in >> extra) throw std::runtime_error("model parse error: trailing content");
  return t;
}

// ---- per-graph embeddings -------------------------------------------------

struct EmbeddingSet {
  uint32_t dim = 0;
  uint32_t count = 0;
  std::vector<double> vle;  // count x dim
  std::vector<double> vse;
  std::vector<double> mve;

  std::span<const double> vle_of(uint32_t v) const { return {&vle[size_t(v) * dim], dim}; }
  std::span<const double> vse_of(uint32_t v) const { return {&vse[size_t(v) * dim], dim}; }
  std::span<const double> mve_of(uint32_t v) const { return {&mve[size_t(v) * dim], dim}; }
};

// Materializes VLE/VSE/MVE for every vertex. Every label used by g must be
// inside the table's alphabet.
inline EmbeddingSet compute_embeddings(const Graph& g, const LabelEmbeddingTable& t) {
  if (g.label_alphabet() > t.alphabet)
    throw std::invalid_argument("compute_embeddings: graph labels exceed table alphabet");
  const uint32_t d = t.dim, n = g.vertex_count();
  std::vector<double> label_vle(static_cast<size_t>(t.alphabet) * d);
  for (uint32_t l = 0; l < t.alphabet; ++l) {
    const auto v = t.vle(l);
    std::copy(v.begin(), v.end(), label_vle.begin() + static_cast<size_t>(l) * d);
  }
  EmbeddingSet e;
  e.dim = d;
  e.count = n;
  e.vle.resize(static_cast<size_t>(n) * d);
  e.vse.assign(static_cast<size_t>(n) * d, 0.0);
  e.mve.resize(static_cast<size_t>(n) * d);
  for (uint32_t v = 0; v < n; ++v) {
    const double* lv = &label_vle[static_cast<size_t>(g.labels[v]) * d];
    double* ev = &e.vle[static_cast<size_t>(v) * d];
    double* sv = &e.vse[static_cast<size_t>(v) * d];
    double* mv = &e.mve[static_cast<size_t>(v) * d];
    std::copy(lv, lv + d, ev);
    for (uint32_t u : g.adjacency[v]) {
      const double* lu = &label_vle[static_cast<size_t>(g.labels[u]) * d];
      for (uint32_t k = 0; k < d; ++k) sv[k] += lu[k];
    }
    for (uint32_t k = 0; k < d; ++k) mv[k] = t.alpha * ev[k] + t.beta * sv[k];
  }
  return e;
}

// coordinate-wise dominance with slack: a[k] <= b[k] + eps for every k
inline bool dominates(std::span<const double> a, std::span<const double> b, double eps) {
  if (a.size() != b.size()) throw std::invalid_argument("dominates: dimension mismatch");
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k] + eps) return false;
  return true;
}

// epsilon used by every online dominance/containment comparison
inline constexpr double kOnlineEps = 1e-6;

// Fraction of ordered pairs (self-pairs included) in dominance relation,
// evaluated exactly (eps = 0). O(n^2 d).
inline double discrete_cost(const std::vector<std::vector<double>>& embeddings) {
  const size_t n = embeddings.size();
  if (n == 0) return 0.0;
  uint64_t dominated = 0;
  for (const auto& a : embeddings)
    for (const auto& b : embeddings)
      if (dominates(a, b, 0.0)) ++dominated;
  return static_cast<double>(dominated) / (static_cast<double>(n) * static_cast<double>(n));
}

inline std::vector<std::vector<double>> rows_of(const std::vector<double>& flat, uint32_t n,
                                                uint32_t d) {
  std::vector<std::vector<double>> out(n);
  for (uint32_t i = 0; i < n; ++i)
    out[i].assign(flat.begin() + static_cast<size_t>(i) * d,
                  flat.begin() + static_cast<size_t>(i + 1) * d);
  return out;
}

// Mean number of vertices whose embedding dominates a given one, i.e. the
// expected candidate-scan volume of a 1-D range filter: |V| * discrete_cost.
inline double average_query_cost(const std::vector<std::vector<double>>& embeddings) {
  return static_cast<double>(embeddings.size()) * discrete_cost(embeddings);
}

}  // namespace live
