#pragma once
// Anti-dominance training.
//
// The discrete objective counts dominating ordered pairs; the trainable
// surrogate replaces each indicator with sigma(min_k(o_i[k] - o_j[k]) / tau)
// and anneals tau geometrically, so late epochs approximate the count while
// early epochs keep gradients alive. One Adam step per epoch on a fresh
// uniform sample of vertex pairs (self-pairs excluded: their surrogate is the
// constant 0.5). After the loop the table is switched to its operational
// form: L1-normalized VLEs and the configured alpha/beta mixture.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "live/embedding.hpp"
#include "live/graph.hpp"
#include "live/rng.hpp"

namespace live {

struct TrainConfig {
  uint32_t dim = 2;
  double learning_rate = 0.01;
  uint32_t pairs_per_epoch = 4096;
  uint32_t epochs = 1000;
  double tau_start = 1.0;
  double tau_end = 0.05;
  uint64_t seed = 0;
  // operational mixture + normalization applied once training finishes
  double final_alpha = 100000.0;
  double final_beta = 1.0;
  bool l1_normalize = true;
  uint32_t alphabet_override = 0;  // 0 = derive from the graph
};

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// geometric anneal from tau_start to tau_end across the epoch range
inline double tau_at(const TrainConfig& cfg, uint32_t epoch) {
  if (cfg.epochs <= 1) return cfg.tau_start;
  const double frac = static_cast<double>(epoch) / (cfg.epochs - 1);
  return cfg.tau_start * std::pow(cfg.tau_end / cfg.tau_start, frac);
}

using PairList = std::vector<std::pair<uint32_t, uint32_t>>;

// K ordered pairs uniform with replacement over V x V, i != j
inline PairList sample_training_pairs(uint32_t n, uint32_t count, rng_t& rng) {
  if (n < 2) throw std::invalid_argument("sample_training_pairs: need at least two vertices");
  PairList pairs;
  pairs.reserve(count);
  for (uint32_t s = 0; s < count; ++s) {
    const auto i = static_cast<uint32_t>(uniform_below(rng, n));
    auto j = static_cast<uint32_t>(uniform_below(rng, n));
    while (j == i) j = static_cast<uint32_t>(uniform_below(rng, n));
    pairs.emplace_back(i, j);
  }
  return pairs;
}

// Mean surrogate over explicit embedding vectors (value only).
inline double antidominance_loss(const PairList& pairs,
                                 const std::vector<std::vector<double>>& embeddings, double tau) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (auto [i, j] : pairs) {
    const auto& a = embeddings.at(i);
    const auto& b = embeddings.at(j);
    if (a.size() != b.size()) throw std::invalid_argument("antidominance_loss: dimension mismatch");
    double m = a[0] - b[0];
    for (size_t k = 1; k < a.size(); ++k) m = std::min(m, a[k] - b[k]);
    total += sigmoid(m / tau);
  }
  return total / static_cast<double>(pairs.size());
}

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d table.raw, same layout as raw
};

// Mean surrogate over sampled vertex pairs of g, with the analytic gradient
// through MVE -> VSE/VLE -> softplus. Ties in the coordinate minimum take the
// lowest index (matching the subgradient the finite-difference check sees).
// Training operates on the raw parameters, so the table must not be in its
// normalized form here.
inline LossGrad antidominance_loss_grad(const Graph& g, const LabelEmbeddingTable& t,
                                        const PairList& pairs, double tau) {
  if (t.l1_normalized)
    throw std::invalid_argument("antidominance_loss_grad: table already normalized");
  if (g.label_alphabet() > t.alphabet)
    throw std::invalid_argument("antidominance_loss_grad: graph labels exceed table alphabet");
  const uint32_t d = t.dim;
  std::vector<double> label_vle(static_cast<size_t>(t.alphabet) * d);
  for (uint32_t l = 0; l < t.alphabet; ++l) {
    const auto v = t.vle(l);
    std::copy(v.begin(), v.end(), label_vle.begin() + static_cast<size_t>(l) * d);
  }

  LossGrad out;
  out.grad.assign(t.raw.size(), 0.0);
  if (pairs.empty()) return out;

  std::vector<double> oi(d), oj(d);
  auto mve_of = [&](uint32_t v, std::vector<double>& o) {
    const double* lv = &label_vle[static_cast<size_t>(g.labels[v]) * d];
    for (uint32_t k = 0; k < d; ++k) o[k] = t.alpha * lv[k];
    for (uint32_t u : g.adjacency[v]) {
      const double* lu = &label_vle[static_cast<size_t>(g.labels[u]) * d];
      for (uint32_t k = 0; k < d; ++k) o[k] += t.beta * lu[k];
    }
  };

  const double inv_pairs = 1.0 / static_cast<double>(pairs.size());
  double total = 0.0;
  for (auto [i, j] : pairs) {
    mve_of(i, oi);
    mve_of(j, oj);
    uint32_t kmin = 0;
    double m = oi[0] - oj[0];
    for (uint32_t k = 1; k < d; ++k)
      if (oi[k] - oj[k] < m) {
        m = oi[k] - oj[k];
        kmin = k;
      }
    const double s = sigmoid(m / tau);
    total += s;
    const double w = s * (1.0 - s) / tau * inv_pairs;  // d(mean loss)/dm
    // dm/d vle(l)[kmin] = +/- (alpha * [label match] + beta * neighbor count)
    out.grad[static_cast<size_t>(g.labels[i]) * d + kmin] += w * t.alpha;
    for (uint32_t u : g.adjacency[i])
      out.grad[static_cast<size_t>(g.labels[u]) * d + kmin] += w * t.beta;
    out.grad[static_cast<size_t>(g.labels[j]) * d + kmin] -= w * t.alpha;
    for (uint32_t u : g.adjacency[j])
      out.grad[static_cast<size_t>(g.labels[u]) * d + kmin] -= w * t.beta;
  }
  // chain through softplus: d vle / d raw = sigmoid(raw)
  for (size_t idx = 0; idx < out.grad.size(); ++idx) out.grad[idx] *= sigmoid(t.raw[idx]);
  out.loss = total * inv_pairs;
  return out;
}

// Adam with one step per epoch. alpha = beta = 1 inside the loss so both the
// label and the structural term shape the optimization; the operational
// mixture is applied to the result afterwards.
inline LabelEmbeddingTable train(const Graph& g, const TrainConfig& cfg) {
  const uint32_t alphabet =
      cfg.alphabet_override ? cfg.alphabet_override : std::max(1u, g.label_alphabet());
  if (g.label_alphabet() > alphabet)
    throw std::invalid_argument("train: alphabet override smaller than graph alphabet");
  LabelEmbeddingTable t = make_table(alphabet, cfg.dim, cfg.seed, /*alpha=*/1.0, /*beta=*/1.0);

  if (g.vertex_count() >= 2 && cfg.epochs > 0 && cfg.pairs_per_epoch > 0) {
    constexpr double b1 = 0.9, b2 = 0.999, adam_eps = 1e-8;
    std::vector<double> m(t.raw.size(), 0.0), v(t.raw.size(), 0.0);
    rng_t rng = make_rng(cfg.seed, /*stream=*/0x7a1);
    for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
      const PairList pairs = sample_training_pairs(g.vertex_count(), cfg.pairs_per_epoch, rng);
      const LossGrad lg = antidominance_loss_grad(g, t, pairs, tau_at(cfg, epoch));
      const double step = epoch + 1;
      for (size_t idx = 0; idx < t.raw.size(); ++idx) {
        m[idx] = b1 * m[idx] + (1.0 - b1) * lg.grad[idx];
        v[idx] = b2 * v[idx] + (1.0 - b2) * lg.grad[idx] * lg.grad[idx];
        const double mhat = m[idx] / (1.0 - std::pow(b1, step));
        const double vhat = v[idx] / (1.0 - std::pow(b2, step));
        t.raw[idx] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + adam_eps);
      }
    }
  }

  t.alpha = cfg.final_alpha;
  t.beta = cfg.final_beta;
  t.l1_normalized = cfg.l1_normalize;
  return t;
}

}  // namespace live
