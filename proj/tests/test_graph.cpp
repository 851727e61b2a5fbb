#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "mcover/graph.hpp"
#include "mcover/graph_io.hpp"
#include "support.hpp"

using namespace mcover;
using namespace mcover::test;

TEST_CASE("build_graph on the five-vertex example", "[graph]") {
  const MutexGraph g = five_vertex();
  CHECK(g.vertex_count() == 5);
  CHECK(g.edge_count() == 8);
  CHECK(g.degree(c) == 4);
  CHECK(g.degree(d) == 2);
  CHECK(g.has_edge(e, a));
  CHECK_FALSE(g.has_edge(a, d));
}

TEST_CASE("build_graph edge cases", "[graph]") {
  SECTION("edgeless") {
    const MutexGraph g = build_graph(3, {});
    CHECK(g.edge_count() == 0);
    for (VertexId v = 0; v < 3; ++v) CHECK(g.degree(v) == 0);
  }
  SECTION("duplicates and reversed edges collapse") {
    const std::vector<Edge> edges{{0, 1}, {1, 0}, {0, 1}};
    const MutexGraph g = build_graph(4, edges);
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(1, 0));
  }
  SECTION("self-loop is rejected") {
    const std::vector<Edge> edges{{2, 2}};
    CHECK_THROWS_WITH(build_graph(4, edges), Catch::Matchers::ContainsSubstring("(2,2)"));
  }
  SECTION("out of range endpoint is rejected") {
    const std::vector<Edge> edges{{0, 4}};
    CHECK_THROWS_AS(build_graph(4, edges), InputError);
  }
}

TEST_CASE("adjacency is symmetric, irreflexive and ascending", "[graph][property]") {
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    const MutexGraph g = random_graph(rng, 1 + round % 12, 0.4);
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      auto nb = g.neighbors(u);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      for (VertexId v : nb) {
        CHECK(v != u);
        CHECK(g.has_edge(v, u));
      }
    }
  }
}

TEST_CASE("complement", "[graph]") {
  SECTION("five-vertex example") {
    const MutexGraph gc = complement(five_vertex());
    CHECK(gc.edges() == std::vector<Edge>{{a, d}, {b, d}});
    CHECK(gc.label(d) == "d");
  }
  SECTION("edgeless graph becomes K3") {
    CHECK(complement(build_graph(3, {})).edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  }
  SECTION("involution on random graphs") {
    std::mt19937 rng(3);
    for (int round = 0; round < 40; ++round) {
      const MutexGraph g = random_graph(rng, round % 10, 0.5);
      CHECK(complement(complement(g)) == g);
    }
  }
}

TEST_CASE("induced_subgraph", "[graph]") {
  const MutexGraph g = five_vertex();
  SECTION("pair") {
    const std::vector<VertexId> vs{e, c};
    const auto sub = induced_subgraph(g, vs);
    CHECK(sub.graph.vertex_count() == 2);
    CHECK(sub.graph.edges() == std::vector<Edge>{{0, 1}});
    CHECK(sub.original == std::vector<VertexId>{c, e});
  }
  SECTION("empty") {
    const auto sub = induced_subgraph(g, {});
    CHECK(sub.graph.vertex_count() == 0);
  }
  SECTION("whole vertex set is the identity") {
    const std::vector<VertexId> vs{0, 1, 2, 3, 4};
    CHECK(induced_subgraph(g, vs).graph == g);
  }
  SECTION("unknown vertex") {
    const std::vector<VertexId> vs{1, 9};
    CHECK_THROWS_AS(induced_subgraph(g, vs), InputError);
  }
}

TEST_CASE("connected_components", "[graph]") {
  SECTION("complement of the example") {
    const auto comps = connected_components(complement(five_vertex()));
    CHECK(comps == std::vector<std::vector<VertexId>>{{a, b, d}, {c}, {e}});
  }
  SECTION("edgeless") {
    CHECK(connected_components(build_graph(3, {})).size() == 3);
  }
  SECTION("K4") {
    const auto comps = connected_components(complement(build_graph(4, {})));
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].size() == 4);
  }
  SECTION("partition agrees with brute-force reachability") {
    std::mt19937 rng(5);
    for (int round = 0; round < 60; ++round) {
      const MutexGraph g = random_graph(rng, 1 + round % 12, 0.15 + 0.01 * round);
      const auto comps = connected_components(g);
      const auto reach = reachability(g);
      std::vector<int> owner(g.vertex_count(), -1);
      std::size_t total = 0;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        REQUIRE_FALSE(comps[i].empty());
        if (i > 0) CHECK(comps[i - 1].front() < comps[i].front());
        for (VertexId v : comps[i]) {
          CHECK(owner[v] == -1);
          owner[v] = static_cast<int>(i);
        }
        total += comps[i].size();
      }
      CHECK(total == g.vertex_count());
      for (VertexId u = 0; u < g.vertex_count(); ++u)
        for (VertexId v = 0; v < g.vertex_count(); ++v)
          CHECK((owner[u] == owner[v]) == static_cast<bool>(reach[u][v]));
    }
  }
}

TEST_CASE("graph text format", "[graph][io]") {
  const MutexGraph g = five_vertex();
  const std::string text = to_text(g);
  CHECK(text.rfind("p 5 8\ne 0 1\ne 0 2\n", 0) == 0);
  CHECK(text.find("l 2 c\n") != std::string::npos);

  const MutexGraph back = parse_graph("# comment\n" + text);
  CHECK(back == g);
  CHECK(back.labels() == g.labels());
  CHECK(to_text(back) == text);

  SECTION("errors carry line numbers") {
    CHECK_THROWS_WITH(parse_graph("p 3 1\ne 0 3\n", "x.graph"),
                      Catch::Matchers::StartsWith("x.graph:2"));
    CHECK_THROWS_WITH(parse_graph("p 3 2\ne 0 1\n"),
                      Catch::Matchers::ContainsSubstring("declares 2 edges"));
    CHECK_THROWS_AS(parse_graph("e 0 1\n"), InputError);
    CHECK_THROWS_AS(parse_graph("p 3 1\nq 0 1\n"), InputError);
    CHECK_THROWS_AS(parse_graph("p 2 1\ne 1 1\n"), InputError);
  }
}
