#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "live/generate.hpp"
#include "live/graph.hpp"

using namespace live;

static Graph triangle() {
  return make_graph(3, {0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("graph text format loads the documented layout") {
  std::istringstream in(
      "t 3 3\n"
      "v 0 0 2\n"
      "v 1 1 2\n"
      "v 2 2 2\n"
      "e 0 1\n"
      "e 0 2\n"
      "e 1 2\n");
  const Graph g = load_graph(in);
  REQUIRE(g.vertex_count() == 3);
  REQUIRE(g.edge_count == 3);
  REQUIRE(g.labels == std::vector<uint32_t>{0, 1, 2});
  for (uint32_t v = 0; v < 3; ++v) REQUIRE(g.degree(v) == 2);
  REQUIRE(g == triangle());
}

TEST_CASE("graph text format rejects malformed input") {
  auto fails = [](const char* text, const char* needle) {
    std::istringstream in(text);
    REQUIRE_THROWS_WITH(load_graph(in), Catch::Matchers::ContainsSubstring(needle));
  };
  fails("t 2 1\nv 0 0 1\nv 1 0 1\ne 0 0\n", "self-loop");
  fails("t 2 1\nv 0 0 3\nv 1 0 1\ne 0 1\n", "degree");
  fails("t 2 1\nv 0 0 1\nv 1 0 1\n", "truncated");
  fails("t 2 2\nv 0 0 1\nv 1 0 1\ne 0 1\ne 0 1\n", "duplicate");
  fails("t 2 1\nv 0 0 1\nv 1 0 1\ne 1 0\n", "u < v");
  fails("t 2 1\nv 0 -1 1\nv 1 0 1\ne 0 1\n", "label");
  fails("t 2 1\nv 1 0 1\nv 0 0 1\ne 0 1\n", "in order");
  fails("t 2 1\nv 0 0 1\nv 1 0 1\ne 0 2\n", "out of range");
  fails("x 2 1\n", "header");
  fails("t 1 0\nv 0 0 0\nv 1 0 0\n", "after edge section");
}

TEST_CASE("graph round-trips through the text format") {
  LabelDistribution dist;
  dist.alphabet = 7;
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    const Graph g = generate_synthetic(60, 4, 0.3, dist, seed);
    std::stringstream buf;
    save_graph(g, buf);
    const Graph back = load_graph(buf);
    REQUIRE(back == g);

    std::stringstream buf2;
    save_graph(back, buf2);
    REQUIRE(buf2.str() == buf.str());
  }
}

TEST_CASE("ring lattice with no shortcuts is 4-regular") {
  LabelDistribution dist;
  dist.alphabet = 3;
  const Graph g = generate_synthetic(10, 4, 0.0, dist, 42);
  REQUIRE(g.vertex_count() == 10);
  REQUIRE(g.edge_count == 20);
  for (uint32_t v = 0; v < 10; ++v) REQUIRE(g.degree(v) == 4);
  REQUIRE(is_connected(g));
}

TEST_CASE("shortcut edges only add density and keep the graph connected") {
  LabelDistribution dist;
  dist.alphabet = 5;
  const Graph g = generate_synthetic(500, 4, 0.25, dist, 7);
  REQUIRE(g.edge_count >= 1000);          // lattice floor
  REQUIRE(g.edge_count <= 1000 + 1000);   // at most one shortcut per lattice edge
  REQUIRE(is_connected(g));
  const double avg_deg = 2.0 * static_cast<double>(g.edge_count) / g.vertex_count();
  REQUIRE(avg_deg > 4.0);
  REQUIRE(avg_deg < 6.0);
}

TEST_CASE("generator is deterministic per seed") {
  LabelDistribution dist;
  dist.alphabet = 5;
  REQUIRE(generate_synthetic(200, 4, 0.25, dist, 11) == generate_synthetic(200, 4, 0.25, dist, 11));
  REQUIRE(generate_synthetic(200, 4, 0.25, dist, 11) != generate_synthetic(200, 4, 0.25, dist, 12));
}

TEST_CASE("generator validates parameters") {
  LabelDistribution dist;
  REQUIRE_THROWS(generate_synthetic(4, 4, 0.0, dist, 1));   // n too small
  REQUIRE_THROWS(generate_synthetic(10, 1, 0.0, dist, 1));  // k too small
  REQUIRE_THROWS(generate_synthetic(10, 4, 1.5, dist, 1));  // p out of range
}

TEST_CASE("label distributions cover the alphabet as expected") {
  rng_t rng = make_rng(5);
  LabelDistribution dist;
  dist.alphabet = 10;

  SECTION("uniform stays in range and touches every label") {
    const LabelSampler sample(dist);
    std::vector<int> hist(10, 0);
    for (int i = 0; i < 20000; ++i) ++hist[sample(rng)];
    for (int c : hist) REQUIRE(c > 1600);  // E = 2000
  }
  SECTION("gaussian concentrates in the middle") {
    dist.kind = LabelDist::gaussian;
    const LabelSampler sample(dist);
    std::vector<int> hist(10, 0);
    for (int i = 0; i < 20000; ++i) ++hist[sample(rng)];
    REQUIRE(hist[4] + hist[5] > hist[0] + hist[9]);
  }
  SECTION("zipf is heaviest at the first label") {
    dist.kind = LabelDist::zipf;
    const LabelSampler sample(dist);
    std::vector<int> hist(10, 0);
    for (int i = 0; i < 20000; ++i) ++hist[sample(rng)];
    REQUIRE(hist[0] > hist[1]);
    REQUIRE(hist[1] > hist[5]);
  }
}

TEST_CASE("average-degree knob maps onto lattice size and shortcut rate") {
  const auto p5 = nws_params_for_avg_degree(5.0);
  REQUIRE(p5.k == 4);
  REQUIRE(p5.p == Catch::Approx(0.25));
  const auto p4 = nws_params_for_avg_degree(4.0);
  REQUIRE(p4.k == 4);
  REQUIRE(p4.p == Catch::Approx(0.0));
  const auto p3 = nws_params_for_avg_degree(3.0);
  REQUIRE(p3.k == 2);
  REQUIRE(p3.p == Catch::Approx(0.5));
  const auto p8 = nws_params_for_avg_degree(8.0);
  REQUIRE(p8.k == 8);
  REQUIRE(p8.p == Catch::Approx(0.0));
  REQUIRE_THROWS(nws_params_for_avg_degree(1.0));
}

TEST_CASE("query generation extracts connected thinned subgraphs") {
  LabelDistribution dist;
  dist.alphabet = 10;
  const Graph g = generate_synthetic(200, 4, 0.25, dist, 3);

  SECTION("single-vertex query carries a label present in the graph") {
    const Graph q = generate_query(g, 1, 3.0, 99);
    REQUIRE(q.vertex_count() == 1);
    REQUIRE(q.edge_count == 0);
    bool found = false;
    for (uint32_t v = 0; v < g.vertex_count() && !found; ++v)
      found = g.labels[v] == q.labels[0];
    REQUIRE(found);
  }

  SECTION("density target is met and structure comes from the data graph") {
    for (uint64_t seed = 0; seed < 30; ++seed) {
      const Graph q = generate_query(g, 8, 3.0, seed);
      REQUIRE(q.vertex_count() == 8);
      REQUIRE(q.edge_count == 12);  // avg degree 3 on 8 vertices
      REQUIRE(is_connected(q));
      for (uint32_t v = 0; v < 8; ++v) REQUIRE(q.labels[v] <= 9);
    }
  }

  SECTION("deterministic per seed") {
    REQUIRE(generate_query(g, 6, 2.0, 4) == generate_query(g, 6, 2.0, 4));
  }

  SECTION("rejects impossible sizes") {
    REQUIRE_THROWS(generate_query(g, 0, 2.0, 1));
    REQUIRE_THROWS(generate_query(g, 201, 2.0, 1));
  }
}

TEST_CASE("k-hop neighborhoods grow breadth-first and include the center") {
  const Graph path = make_graph(3, {0, 0, 0}, {{0, 1}, {1, 2}});
  REQUIRE(khop_neighborhood(path, 0, 0) == std::vector<uint32_t>{0});
  REQUIRE(khop_neighborhood(path, 0, 1) == std::vector<uint32_t>{0, 1});
  REQUIRE(khop_neighborhood(path, 0, 2) == std::vector<uint32_t>{0, 1, 2});
  REQUIRE(khop_neighborhood(path, 1, 1) == std::vector<uint32_t>{0, 1, 2});

  const Graph lonely = make_graph(2, {0, 1}, {});
  REQUIRE(khop_neighborhood(lonely, 0, 5) == std::vector<uint32_t>{0});

  LabelDistribution dist;
  const Graph g = generate_synthetic(100, 4, 0.2, dist, 8);
  for (uint32_t v = 0; v < 20; ++v) {
    const auto h1 = khop_neighborhood(g, v, 1);
    const auto h2 = khop_neighborhood(g, v, 2);
    REQUIRE(h1.size() == size_t(g.degree(v)) + 1);
    REQUIRE(std::includes(h2.begin(), h2.end(), h1.begin(), h1.end()));
  }
}
