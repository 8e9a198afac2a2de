#include <bit>

#include "cubekit/fixtures.hpp"
#include "cubekit/sageev.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cubekit;
namespace fx = cubekit::fixtures;

namespace {

// All orientations by exhaustion, in increasing bit order.
std::vector<std::uint64_t> brute_orientations(const Wallspace& w) {
  const std::size_t k = w.wall_count();
  std::vector<std::uint64_t> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i)
      for (std::size_t j = i + 1; j < k && ok; ++j) {
        auto pi = (bits >> i & 1) ? ~w.parts[i] : w.parts[i];
        auto pj = (bits >> j & 1) ? ~w.parts[j] : w.parts[j];
        ok = (pi & pj).any();
      }
    if (ok) out.push_back(bits);
  }
  return out;
}

Wallspace random_wallspace(fx::Rng& rng) {
  Wallspace w;
  const std::size_t n = 3 + rng() % 6;
  for (std::size_t i = 0; i < n; ++i) w.points.push_back("q" + std::to_string(i));
  std::set<std::string> seen;
  const std::size_t k = 1 + rng() % std::min<std::size_t>(7, (std::size_t{1} << (n - 1)) - 1);
  while (w.parts.size() < k) {
    boost::dynamic_bitset<> part(n);
    for (std::size_t i = 0; i < n; ++i)
      if (rng() & 1) part.set(i);
    if (part.none() || part.all()) continue;
    std::string a, b;
    boost::to_string(part, a);
    boost::to_string(~part, b);
    if (seen.count(a) || seen.count(b)) continue;
    seen.insert(a);
    w.wall_ids.push_back(std::to_string(w.parts.size()));
    w.parts.push_back(part);
  }
  return w;
}

}  // namespace

TEST_SUITE("sageev") {

TEST_CASE("crossing walls give the 3-cube") {
  auto dual = build_dual(fx::crossing_walls());
  CHECK(dual.graph.vertex_count() == 8);
  CHECK(dual.graph.edge_count() == 12);
  auto q3 = require_median(dual.graph);
  HyperplaneSystem hs(q3);
  CHECK(hs.count() == 3);
  CHECK(enumerate_cubes(q3, 3).size() == 1);
}

TEST_CASE("facing walls give a tripod") {
  auto dual = build_dual(fx::facing_walls());
  REQUIRE(dual.graph.vertex_count() == 4);
  CHECK(dual.graph.edge_count() == 3);
  CHECK(dual.orientations == std::vector<std::uint64_t>{0b011, 0b101, 0b110, 0b111});
  // The all-second-parts vertex is the centre.
  CHECK(dual.graph.label(3) == "BBB");
  CHECK(dual.graph.neighbors(3).size() == 3);
}

TEST_CASE("dual agrees with exhaustive orientation search") {
  fx::Rng rng(4242);
  for (int i = 0; i < 60; ++i) {
    auto w = random_wallspace(rng);
    auto dual = build_dual(w);
    auto ref = brute_orientations(w);
    REQUIRE(dual.orientations == ref);
    std::size_t edges = 0;
    for (std::size_t a = 0; a < ref.size(); ++a)
      for (std::size_t b = a + 1; b < ref.size(); ++b)
        if (std::popcount(ref[a] ^ ref[b]) == 1) {
          ++edges;
          CHECK(dual.graph.adjacent(static_cast<VertexId>(a), static_cast<VertexId>(b)));
        }
    CHECK(dual.graph.edge_count() == edges);
    auto g = require_median(dual.graph);
    CHECK(HyperplaneSystem(g).count() == w.wall_count());
  }
}

TEST_CASE("roundtrip through the wallspace of a median graph") {
  fx::Rng rng(17);
  std::vector<MedianGraph> graphs{fx::hypercube(4), fx::grid(3, 4), fx::star(5), fx::path(7)};
  for (int i = 0; i < 15; ++i) graphs.push_back(fx::random_median(rng, 60));
  for (auto& g : graphs) {
    HyperplaneSystem hs(require_median(std::move(g)));
    auto r = roundtrip_check(hs);
    CHECK_MESSAGE(r.ok, r.message);
    REQUIRE(r.iso.size() == hs.graph().vertex_count());
    auto dual = build_dual(wallspace_of(hs));
    for (const auto& e : hs.graph().edges()) CHECK(dual.graph.adjacent(r.iso[e.u], r.iso[e.v]));
    CHECK(dual.graph.edge_count() == hs.graph().edge_count());
  }
}

TEST_CASE("wallspace files") {
  auto w = load_wallspace("# tripod\np c\nw x: x | c y z\nw y: y | c x z\nw z: z | c x y\n");
  CHECK(w.points == std::vector<std::string>{"c", "x", "y", "z"});
  CHECK(w.wall_count() == 3);
  CHECK(build_dual(w).graph.vertex_count() == 4);
  auto back = load_wallspace(w.to_text());
  CHECK(back.points == w.points);
  CHECK(back.parts == w.parts);

  CHECK_THROWS_AS(load_wallspace("w a: x y\n"), ParseError);
  CHECK_THROWS_AS(load_wallspace("w a: x | x y\n"), ParseError);
  CHECK_THROWS_AS(load_wallspace("p x\np y\np z\nw a: x | y\n"), ParseError);
  CHECK_THROWS_AS(load_wallspace("w a: | x y\n"), Error);
  CHECK_THROWS_AS(load_wallspace("w a: x | y\nw b: y | x\n"), Error);
  CHECK_THROWS_AS(load_wallspace("q x\n"), ParseError);
}

TEST_CASE("wall budget") {
  Wallspace w;
  for (int i = 0; i < 30; ++i) w.points.push_back(std::to_string(i));
  for (std::size_t i = 0; i < 25; ++i) {
    boost::dynamic_bitset<> part(30);
    part.set(i);
    w.wall_ids.push_back(std::to_string(i));
    w.parts.push_back(part);
  }
  CHECK_THROWS_AS(build_dual(w), CapacityError);
  // A star of 25 leaves stays small once the budget allows it.
  CHECK(build_dual(w, 25).graph.vertex_count() == 26);
}

}  // TEST_SUITE
