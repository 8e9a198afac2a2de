#include <set>

#include "cubekit/fixtures.hpp"
#include "cubekit/hyperplanes.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cubekit;
namespace fx = cubekit::fixtures;

namespace {

std::vector<MedianGraph> corpus() {
  std::vector<MedianGraph> out;
  for (unsigned d = 1; d <= 4; ++d) out.push_back(fx::hypercube(d));
  out.push_back(fx::path(6));
  out.push_back(fx::star(3));
  out.push_back(fx::grid(3, 3));
  out.push_back(fx::grid(2, 4));
  out.push_back(fx::cycle(4));
  fx::Rng rng(31337);
  for (int i = 0; i < 12; ++i) out.push_back(fx::random_median(rng, 40));
  for (int i = 0; i < 4; ++i) out.push_back(fx::random_tree(2 + rng() % 20, rng));
  out.push_back(fx::product(fx::random_tree(5, rng), fx::random_tree(4, rng)));
  return out;
}

// Vertex sets of all four quadrants are nonempty.
bool crosses_by_quadrants(const HyperplaneSystem& hs, HyperplaneId a, HyperplaneId b) {
  for (std::uint8_t s = 0; s < 2; ++s)
    for (std::uint8_t t = 0; t < 2; ++t)
      if (oracle::disjoint(hs.vertices({a, s}), hs.vertices({b, t}))) return false;
  return true;
}

}  // namespace

TEST_SUITE("hyperplanes") {

TEST_CASE("hyperplane counts") {
  for (unsigned n = 1; n <= 6; ++n) {
    HyperplaneSystem hs(require_median(fx::hypercube(n)));
    REQUIRE(hs.count() == n);
    for (HyperplaneId h = 0; h < n; ++h) CHECK(hs.edges_of(h).size() == (std::size_t{1} << (n - 1)));
  }
  fx::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    auto t = fx::random_tree(2 + rng() % 40, rng);
    auto m = t.edge_count();
    HyperplaneSystem hs(require_median(std::move(t)));
    CHECK(hs.count() == m);
  }
  CHECK(HyperplaneSystem(require_median(fx::grid(3, 3))).count() == 4);
  CHECK_THROWS_AS(HyperplaneSystem(fx::path(3)), PreconditionError);
}

TEST_CASE("classes, sides and separation match brute force") {
  for (const auto& raw : corpus()) {
    HyperplaneSystem hs(require_median(raw));
    const MedianGraph& g = hs.graph();
    auto theta = oracle::theta_classes(g);
    for (EdgeId e = 0; e < g.edge_count(); ++e) REQUIRE(hs.hyperplane_of(e) == theta[e]);
    auto d = oracle::all_distances(g);

    for (HyperplaneId h = 0; h < hs.count(); ++h) {
      auto a = hs.vertices({h, 0});
      auto b = hs.vertices({h, 1});
      CHECK(a.size() + b.size() == g.vertex_count());
      CHECK(a.size() == hs.size({h, 0}));
      CHECK(b.size() == hs.size({h, 1}));
      CHECK(hs.contains({h, 0}, 0));
      CHECK(oracle::convex(g, a));
      CHECK(oracle::convex(g, b));
      std::set<std::pair<VertexId, VertexId>> cut;
      for (EdgeId e : hs.edges_of(h)) cut.insert({g.edge(e).u, g.edge(e).v});
      CHECK(oracle::components_without(g, cut) == 2);

      // The carrier is a product of an edge with the base: class edges match
      // its two halves isomorphically.
      auto carrier = hs.carrier(h);
      std::map<VertexId, VertexId> partner;
      for (EdgeId e : hs.edges_of(h)) {
        partner[g.edge(e).u] = g.edge(e).v;
        partner[g.edge(e).v] = g.edge(e).u;
      }
      CHECK(partner.size() == carrier.size());
      for (VertexId x : carrier)
        for (VertexId y : carrier)
          if (x < y && hs.side_of(h, x) == hs.side_of(h, y))
            CHECK(g.adjacent(x, y) == g.adjacent(partner[x], partner[y]));
    }

    for (VertexId u = 0; u < g.vertex_count(); ++u)
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto sep = hs.separating(u, v);
        REQUIRE(sep.size() == d[u][v]);
        CHECK(hs.distance(u, v) == d[u][v]);
        for (HyperplaneId h : sep) CHECK(hs.side_of(h, u) != hs.side_of(h, v));
      }
  }
}

TEST_CASE("crossing, halfspace relations and strong separation") {
  for (const auto& raw : corpus()) {
    HyperplaneSystem hs(require_median(raw));
    const auto count = static_cast<HyperplaneId>(hs.count());
    std::vector<std::vector<VertexId>> side(2 * count);
    for (std::uint32_t i = 0; i < 2 * count; ++i) side[i] = hs.vertices(Halfspace::from_index(i));

    for (HyperplaneId a = 0; a < count; ++a)
      for (HyperplaneId b = 0; b < count; ++b) {
        bool cross = a != b && crosses_by_quadrants(hs, a, b);
        REQUIRE(hs.crosses(a, b) == cross);
        bool common = false;
        for (HyperplaneId c = 0; c < count; ++c)
          if (c != a && c != b && crosses_by_quadrants(hs, a, c) && crosses_by_quadrants(hs, b, c)) common = true;
        CHECK(hs.strongly_separated(a, b) == (a != b && !cross && !common));
        CHECK(hs.strongly_separated(a, b) == hs.strongly_separated(b, a));
        if (hs.strongly_separated(a, b)) {
          CHECK(oracle::disjoint(hs.carrier(a), hs.carrier(b)) == (hs.hyperplane_distance(a, b) > 1));
        }
      }
    for (std::uint32_t i = 0; i < 2 * count; ++i)
      for (std::uint32_t j = 0; j < 2 * count; ++j) {
        auto x = Halfspace::from_index(i), y = Halfspace::from_index(j);
        CHECK(hs.disjoint(x, y) == oracle::disjoint(side[i], side[j]));
        CHECK(hs.subset(x, y) == oracle::subset(side[i], side[j]));
      }
  }
}

TEST_CASE("trees and products of trees") {
  fx::Rng rng(11);
  for (int i = 0; i < 10; ++i) {
    HyperplaneSystem tree(require_median(fx::random_tree(3 + rng() % 25, rng)));
    for (HyperplaneId a = 0; a < tree.count(); ++a)
      for (HyperplaneId b = 0; b < tree.count(); ++b) CHECK(tree.strongly_separated(a, b) == (a != b));
  }
  HyperplaneSystem tt(require_median(fx::product(fx::random_tree(6, rng), fx::random_tree(5, rng))));
  for (HyperplaneId a = 0; a < tt.count(); ++a)
    for (HyperplaneId b = 0; b < tt.count(); ++b) CHECK_FALSE(tt.strongly_separated(a, b));
  HyperplaneSystem q3(require_median(fx::hypercube(3)));
  for (HyperplaneId a = 0; a < 3; ++a)
    for (HyperplaneId b = 0; b < 3; ++b) CHECK(q3.crosses(a, b) == (a != b));
}

TEST_CASE("projection pairs match the gate oracle") {
  fx::Rng rng(2024);
  std::vector<MedianGraph> graphs;
  for (int i = 0; i < 6; ++i) graphs.push_back(fx::random_tree(4 + rng() % 20, rng));
  for (int i = 0; i < 30; ++i) graphs.push_back(fx::random_median(rng, 40));
  std::size_t checked = 0;
  for (auto& raw : graphs) {
    HyperplaneSystem hs(require_median(std::move(raw)));
    const MedianGraph& g = hs.graph();
    auto d = oracle::all_distances(g);
    for (HyperplaneId a = 0; a < hs.count(); ++a)
      for (HyperplaneId b = 0; b < hs.count(); ++b) {
        if (!hs.strongly_separated(a, b)) {
          CHECK_THROWS_AS(projection_pair(hs, a, b), PreconditionError);
          continue;
        }
        auto p = projection_pair(hs, a, b);
        std::set<VertexId> image;
        for (VertexId y : hs.carrier(b)) {
          auto near = oracle::nearest(d, hs.carrier(a), y);
          REQUIRE(near.size() == 1);
          image.insert(near[0]);
        }
        REQUIRE(image.size() == 1);
        CHECK(p.first_gate == *image.begin());
        auto e = g.edge(p.first);
        CHECK(hs.hyperplane_of(p.first) == a);
        CHECK((e.u == p.first_gate || e.v == p.first_gate));
        CHECK(hs.hyperplane_of(p.second) == b);
        ++checked;
      }
  }
  CHECK(checked > 100);

  // Tree: edges 0-1 and 2-3 of the path 0-1-2-3 are each other's projections.
  HyperplaneSystem path(require_median(fx::path(4)));
  auto p = projection_pair(path, 0, 2);
  CHECK(p.first == 0);
  CHECK(p.second == 2);
  CHECK(p.first_gate == 1);
  CHECK(p.second_gate == 2);
}

TEST_CASE("facing tuples") {
  HyperplaneSystem star(require_median(fx::star(3)));
  auto triples = facing_tuples(star, 3);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0] == std::vector<Halfspace>{{0, 1}, {1, 1}, {2, 1}});
  CHECK(facing_triple_at(star, 0) == triples[0]);
  CHECK(facing_triple_at(star, 1).empty());

  HyperplaneSystem q3(require_median(fx::hypercube(3)));
  CHECK(facing_tuples(q3, 2).empty());

  HyperplaneSystem path(require_median(fx::path(4)));
  auto pairs = facing_tuples(path, 2);
  CHECK(std::find(pairs.begin(), pairs.end(), std::vector<Halfspace>{{0, 0}, {2, 1}}) != pairs.end());
  CHECK(facing_tuples(path, 3).empty());
  CHECK(facing_tuples(path, 2, 1).size() == 1);

  fx::Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    HyperplaneSystem hs(require_median(fx::random_median(rng, 40)));
    const auto total = static_cast<std::uint32_t>(2 * hs.count());
    std::vector<std::vector<VertexId>> side(total);
    for (std::uint32_t x = 0; x < total; ++x) side[x] = hs.vertices(Halfspace::from_index(x));
    std::vector<std::vector<Halfspace>> ref2, ref3;
    for (std::uint32_t x = 0; x < total; ++x)
      for (std::uint32_t y = x + 1; y < total; ++y) {
        if (x / 2 == y / 2 || !oracle::disjoint(side[x], side[y])) continue;
        ref2.push_back({Halfspace::from_index(x), Halfspace::from_index(y)});
        for (std::uint32_t z = y + 1; z < total; ++z)
          if (z / 2 != x / 2 && z / 2 != y / 2 && oracle::disjoint(side[x], side[z]) &&
              oracle::disjoint(side[y], side[z]))
            ref3.push_back({Halfspace::from_index(x), Halfspace::from_index(y), Halfspace::from_index(z)});
      }
    CHECK(facing_tuples(hs, 2) == ref2);
    CHECK(facing_tuples(hs, 3) == ref3);
  }
  CHECK_THROWS_AS(facing_tuples(path, 1), PreconditionError);
}

TEST_CASE("irreducible decomposition") {
  HyperplaneSystem q3(require_median(fx::hypercube(3)));
  auto d = irreducible_decomposition(q3);
  REQUIRE(d.rank() == 3);
  for (const auto& f : d.factor_graphs) {
    CHECK(f.vertex_count() == 2);
    CHECK(f.edge_count() == 1);
  }
  CHECK(verify_product(q3.graph(), d));

  HyperplaneSystem grid(require_median(fx::grid(3, 3)));
  d = irreducible_decomposition(grid);
  REQUIRE(d.rank() == 2);
  for (const auto& f : d.factor_graphs) {
    CHECK(f.vertex_count() == 3);
    CHECK(f.edge_count() == 2);
  }
  CHECK(verify_product(grid.graph(), d));

  HyperplaneSystem tree(require_median(fx::star(5)));
  d = irreducible_decomposition(tree);
  CHECK(d.rank() == 1);
  CHECK(verify_product(tree.graph(), d));

  // A wrong coordinate breaks the isomorphism.
  d = irreducible_decomposition(grid);
  std::swap(d.coordinates[0], d.coordinates[2]);
  CHECK_FALSE(verify_product(grid.graph(), d));

  fx::Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    auto f1 = require_median(fx::random_median(rng, 10));
    auto f2 = require_median(fx::random_median(rng, 10));
    auto r1 = irreducible_decomposition(HyperplaneSystem(f1)).rank();
    auto r2 = irreducible_decomposition(HyperplaneSystem(f2)).rank();
    HyperplaneSystem hs(require_median(fx::product(f1, f2)));
    auto dec = irreducible_decomposition(hs);
    CHECK(dec.rank() == r1 + r2);
    CHECK(verify_product(hs.graph(), dec));
  }
}

TEST_CASE("hyperplane report format") {
  HyperplaneSystem path(require_median(fx::path(3)));
  CHECK(path.report() == "H0: edges=0-1 sideA={0} sideB={1,2}\nH1: edges=1-2 sideA={0,1} sideB={2}\n");
  CHECK(path.report(true) == "H0: edges=0-1 sideA=1 sideB=2\nH1: edges=1-2 sideA=2 sideB=1\n");
  CHECK(to_string(Halfspace{5, 1}) == "H5:B");
}

}  // TEST_SUITE
