#include <random>

#include "cubekit/fixtures.hpp"
#include "cubekit/median_graph.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cubekit;
namespace fx = cubekit::fixtures;

namespace {

VertexId id(const MedianGraph& g, const char* label) { return *g.find_vertex(label); }

}  // namespace

TEST_SUITE("median") {

TEST_CASE("graph file parsing") {
  auto g = load_graph("# cube\nv 000\ne 000 001\ne 000 010\ne 001 011\ne 010 011\n");
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.label(0) == "000");
  CHECK(g.find_vertex("011") == VertexId{3});
  CHECK_FALSE(g.validated());

  CHECK_THROWS_WITH_AS(load_graph("v a\nv b\n"), "graph is disconnected", Error);
  CHECK_THROWS_AS(load_graph("e 0 0\n"), ParseError);
  try {
    load_graph("e a b\ne b a\n");
    FAIL("duplicate edge accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_graph("e a b\nx a\n"), ParseError);
  CHECK_THROWS_AS(load_graph("e a\n"), ParseError);
}

TEST_CASE("text roundtrip keeps ids and digest") {
  auto q3 = fx::hypercube(3);
  auto back = load_graph(q3.to_text());
  CHECK(back.digest() == q3.digest());
  CHECK(back.to_text() == q3.to_text());
}

TEST_CASE("median check on the standard examples") {
  auto q3 = check_median(fx::hypercube(3));
  REQUIRE(std::holds_alternative<MedianGraph>(q3));
  CHECK(std::get<MedianGraph>(q3).validated());

  auto k3 = check_median(fx::complete(3));
  REQUIRE(std::holds_alternative<MedianViolation>(k3));
  CHECK(std::get<MedianViolation>(k3) == MedianViolation{0, 1, 2, 0});

  auto punctured = fx::remove_vertex(fx::hypercube(3), 7);
  auto bad = check_median(punctured);
  REQUIRE(std::holds_alternative<MedianViolation>(bad));
  auto oracle_bad = oracle::first_bad_triple(punctured);
  REQUIRE(oracle_bad);
  auto v = std::get<MedianViolation>(bad);
  CHECK(v.u == oracle_bad->u);
  CHECK(v.v == oracle_bad->v);
  CHECK(v.w == oracle_bad->w);
  CHECK(v.median_count == oracle_bad->count);
  // 011, 101, 110 lose their common median 111.
  CHECK(v == MedianViolation{3, 5, 6, 0});

  CHECK_THROWS_AS(require_median(fx::cycle(6)), PreconditionError);
  CHECK(require_median(fx::cycle(4)).validated());
}

TEST_CASE("median check agrees with the all-triples oracle") {
  fx::Rng rng(20240611);
  int median_count = 0;
  for (int i = 0; i < 120; ++i) {
    // Deleting a vertex may disconnect the graph; those draws are skipped.
    std::optional<MedianGraph> connected;
    try {
      switch (i % 4) {
        case 0: connected = fx::random_median(rng, 40); break;
        case 1: connected = fx::random_graph(3 + rng() % 30, rng() % 12, rng); break;
        case 2: connected = fx::random_tree(2 + rng() % 30, rng); break;
        default: connected = fx::remove_vertex(fx::random_median(rng, 40), 0); break;
      }
    } catch (const Error&) {
      continue;
    }
    auto ours = find_median_violation(*connected);
    auto ref = oracle::first_bad_triple(*connected);
    REQUIRE(ours.has_value() == ref.has_value());
    if (ours) {
      CHECK(ours->u == ref->u);
      CHECK(ours->v == ref->v);
      CHECK(ours->w == ref->w);
      CHECK(ours->median_count == ref->count);
    } else {
      ++median_count;
    }
  }
  CHECK(median_count > 30);
}

TEST_CASE("median, intervals and the median axiom") {
  auto q3 = require_median(fx::hypercube(3));
  CHECK(median(q3, id(q3, "000"), id(q3, "011"), id(q3, "101")) == id(q3, "001"));
  for (VertexId x = 0; x < 8; ++x) CHECK(median(q3, x, x, x) == x);
  auto p = require_median(fx::path(3));
  CHECK(median(p, 0, 2, 1) == 1);
  CHECK_THROWS_AS(median(fx::path(3), 0, 1, 2), PreconditionError);

  fx::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    auto g = require_median(fx::random_median(rng, 30));
    auto d = oracle::all_distances(g);
    const auto n = static_cast<VertexId>(g.vertex_count());
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = 0; v < n; ++v) {
        auto in = interval(g, u, v);
        std::vector<VertexId> ref;
        for (VertexId m = 0; m < n; ++m)
          if (oracle::between(d, u, m, v)) ref.push_back(m);
        CHECK(in == ref);
        for (VertexId w = 0; w < n; w += 3) CHECK(oracle::medians(d, u, v, w) == std::vector{median(g, u, v, w)});
      }
  }
}

TEST_CASE("convexity and gates") {
  auto q3 = require_median(fx::hypercube(3));
  std::vector<VertexId> facet{id(q3, "000"), id(q3, "001"), id(q3, "010"), id(q3, "011")};
  CHECK(is_convex(q3, facet));
  CHECK(gate(q3, facet, id(q3, "110")) == id(q3, "010"));
  std::vector<VertexId> all{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(is_convex(q3, all));
  for (VertexId v = 0; v < 8; ++v) CHECK(gate(q3, all, v) == v);
  std::vector<VertexId> antipodes{id(q3, "000"), id(q3, "111")};
  CHECK_FALSE(is_convex(q3, antipodes));
  CHECK_THROWS_AS(gate(q3, antipodes, 1), PreconditionError);
  CHECK_THROWS_AS(make_convex_subset(q3, {}), PreconditionError);

  fx::Rng rng(99);
  for (int i = 0; i < 25; ++i) {
    auto g = require_median(fx::random_median(rng, 36));
    auto d = oracle::all_distances(g);
    const auto n = static_cast<VertexId>(g.vertex_count());
    std::vector<VertexId> s;
    for (VertexId v = 0; v < n; ++v)
      if (rng() % 3 == 0) s.push_back(v);
    if (s.empty()) s.push_back(0);
    REQUIRE(is_convex(g, s) == oracle::convex(g, s));
    // Intervals are always convex.
    auto in = interval(g, 0, n - 1);
    REQUIRE(is_convex(g, in));
    auto gates = gate_map(g, in);
    for (VertexId v = 0; v < n; ++v) {
      auto near = oracle::nearest(d, in, v);
      REQUIRE(near.size() == 1);
      CHECK(gates[v] == near[0]);
      CHECK(gates[gates[v]] == gates[v]);
      for (VertexId u = 0; u < n; ++u) CHECK(d[gates[u]][gates[v]] <= d[u][v]);
    }
  }
}

TEST_CASE("cube enumeration") {
  auto q3 = require_median(fx::hypercube(3));
  CHECK(enumerate_cubes(q3, 2).size() == 6);
  CHECK(enumerate_cubes(q3, 3).size() == 1);
  CHECK(enumerate_cubes(q3, 1).size() == 12);
  CHECK(enumerate_cubes(require_median(fx::star(4)), 2).empty());
  auto squares = enumerate_cubes(require_median(fx::grid(3, 3)), 2);
  CHECK(squares.size() == 4);
  CHECK(squares.front() == std::vector<VertexId>{0, 1, 3, 4});
  CHECK(std::is_sorted(squares.begin(), squares.end()));
  CHECK(enumerate_cubes(require_median(fx::hypercube(4)), 3).size() == 8);
}

}  // TEST_SUITE
