#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "live/generate.hpp"
#include "live/training.hpp"

using namespace live;
using Catch::Approx;

// loss as a pure function of the raw parameters, for finite differencing
static double loss_from_table(const Graph& g, LabelEmbeddingTable t, const PairList& pairs,
                              double tau) {
  t.alpha = 1.0;
  t.beta = 1.0;
  const EmbeddingSet e = compute_embeddings(g, t);
  return antidominance_loss(pairs, rows_of(e.mve, e.count, e.dim), tau);
}

TEST_CASE("sigmoid matches its closed form") {
  REQUIRE(sigmoid(0.0) == Approx(0.5));
  REQUIRE(sigmoid(-1.0) == Approx(0.2689414213699951).epsilon(1e-14));
  REQUIRE(sigmoid(1.0) == Approx(1.0 - 0.2689414213699951).epsilon(1e-14));
  REQUIRE(sigmoid(-800.0) == 0.0);  // stable, no NaN
  REQUIRE(sigmoid(800.0) == 1.0);
}

TEST_CASE("surrogate loss evaluates the soft dominance indicator") {
  const std::vector<std::vector<double>> emb{{0.0, 0.0}, {1.0, 1.0}};
  REQUIRE(antidominance_loss({{0, 1}}, emb, 1.0) == Approx(sigmoid(-1.0)).epsilon(1e-14));
  REQUIRE(antidominance_loss({{1, 0}}, emb, 1.0) == Approx(sigmoid(1.0)).epsilon(1e-14));
  REQUIRE(antidominance_loss({{0, 1}, {1, 0}}, emb, 1.0) == Approx(0.5).epsilon(1e-14));

  // equal embeddings sit exactly on the decision boundary
  const std::vector<std::vector<double>> twin{{2.0, 3.0}, {2.0, 3.0}};
  REQUIRE(antidominance_loss({{0, 1}}, twin, 0.05) == Approx(0.5));

  // the minimum coordinate difference drives the pair: diffs (9, 3) -> 3
  const std::vector<std::vector<double>> mixed{{10.0, 3.0}, {1.0, 0.0}};
  REQUIRE(antidominance_loss({{0, 1}}, mixed, 1.0) == Approx(sigmoid(3.0)).epsilon(1e-14));

  // sharper temperature pushes toward the hard indicator
  const double warm = antidominance_loss({{0, 1}}, emb, 1.0);
  const double cold = antidominance_loss({{0, 1}}, emb, 0.05);
  REQUIRE(cold < warm);
  REQUIRE(cold == Approx(0.0).margin(1e-8));

  REQUIRE(antidominance_loss({}, emb, 1.0) == 0.0);
}

TEST_CASE("temperature anneals geometrically across epochs") {
  TrainConfig cfg;
  cfg.epochs = 1000;
  cfg.tau_start = 1.0;
  cfg.tau_end = 0.05;
  REQUIRE(tau_at(cfg, 0) == Approx(1.0));
  REQUIRE(tau_at(cfg, 999) == Approx(0.05).epsilon(1e-12));
  REQUIRE(tau_at(cfg, 500) < tau_at(cfg, 499));

  TrainConfig three = cfg;
  three.epochs = 3;
  REQUIRE(tau_at(three, 1) == Approx(std::sqrt(1.0 * 0.05)).epsilon(1e-12));

  TrainConfig one = cfg;
  one.epochs = 1;
  REQUIRE(tau_at(one, 0) == Approx(1.0));
}

TEST_CASE("pair sampling avoids self-pairs and is reproducible") {
  rng_t rng = make_rng(3, 0x7a1);
  const PairList pairs = sample_training_pairs(10, 500, rng);
  REQUIRE(pairs.size() == 500);
  for (auto [i, j] : pairs) {
    REQUIRE(i < 10);
    REQUIRE(j < 10);
    REQUIRE(i != j);
  }
  rng_t rng2 = make_rng(3, 0x7a1);
  REQUIRE(sample_training_pairs(10, 500, rng2) == pairs);
  REQUIRE_THROWS(sample_training_pairs(1, 4, rng));
}

TEST_CASE("analytic gradient matches central differences") {
  LabelDistribution dist;
  dist.alphabet = 4;
  const Graph g = generate_synthetic(12, 2, 0.3, dist, 40);
  LabelEmbeddingTable t = make_table(4, 2, 11, /*alpha=*/1.0, /*beta=*/1.0);

  rng_t rng = make_rng(5);
  const PairList pairs = sample_training_pairs(g.vertex_count(), 20, rng);
  const double tau = 0.5;

  const LossGrad lg = antidominance_loss_grad(g, t, pairs, tau);
  REQUIRE(lg.loss == Approx(loss_from_table(g, t, pairs, tau)).epsilon(1e-12));

  const double h = 1e-5;
  for (size_t idx = 0; idx < t.raw.size(); ++idx) {
    LabelEmbeddingTable up = t, dn = t;
    up.raw[idx] += h;
    dn.raw[idx] -= h;
    const double fd = (loss_from_table(g, up, pairs, tau) - loss_from_table(g, dn, pairs, tau)) /
                      (2.0 * h);
    if (std::abs(fd) > 1e-8)
      REQUIRE(lg.grad[idx] == Approx(fd).epsilon(1e-4));
    else
      REQUIRE(std::abs(lg.grad[idx]) < 1e-6);
  }
}

TEST_CASE("gradient refuses a normalized table") {
  const Graph g = make_graph(2, {0, 1}, {{0, 1}});
  auto t = make_table(2, 2, 1, 1.0, 1.0);
  t.l1_normalized = true;
  REQUIRE_THROWS(antidominance_loss_grad(g, t, {{0, 1}}, 1.0));
}

TEST_CASE("training with zero epochs only applies the operational form") {
  const Graph g = make_graph(3, {0, 1, 0}, {{0, 1}, {1, 2}});
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.seed = 77;
  const auto trained = train(g, cfg);
  const auto init = make_table(2, 2, 77, 1.0, 1.0);
  REQUIRE(trained.raw == init.raw);
  REQUIRE(trained.alpha == 100000.0);
  REQUIRE(trained.beta == 1.0);
  REQUIRE(trained.l1_normalized);
}

TEST_CASE("training is deterministic per seed") {
  LabelDistribution dist;
  dist.alphabet = 5;
  const Graph g = generate_synthetic(40, 4, 0.2, dist, 2);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.pairs_per_epoch = 128;
  cfg.seed = 4;
  const auto a = train(g, cfg);
  const auto b = train(g, cfg);
  REQUIRE(a.raw == b.raw);
  cfg.seed = 5;
  REQUIRE(train(g, cfg).raw != a.raw);
}

TEST_CASE("training reduces the discrete anti-dominance cost") {
  LabelDistribution dist;
  dist.alphabet = 6;
  const Graph g = generate_synthetic(80, 4, 0.25, dist, 13);

  TrainConfig cfg;
  cfg.epochs = 60;
  cfg.pairs_per_epoch = 512;
  cfg.seed = 13;
  cfg.l1_normalize = false;  // measure the raw training objective
  cfg.final_alpha = 1.0;
  cfg.final_beta = 1.0;

  const auto before = make_table(6, cfg.dim, cfg.seed, 1.0, 1.0);
  const auto after = train(g, cfg);

  const auto cost_of = [&](const LabelEmbeddingTable& t) {
    const EmbeddingSet e = compute_embeddings(g, t);
    return discrete_cost(rows_of(e.mve, e.count, e.dim));
  };
  REQUIRE(cost_of(after) < cost_of(before));
}

TEST_CASE("alphabet override reserves rows past the graph labels") {
  const Graph g = make_graph(2, {0, 1}, {{0, 1}});
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.pairs_per_epoch = 8;
  cfg.alphabet_override = 7;
  REQUIRE(train(g, cfg).alphabet == 7);
  cfg.alphabet_override = 1;  // smaller than the graph needs
  REQUIRE_THROWS(train(g, cfg));
}
