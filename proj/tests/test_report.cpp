#include "cubekit/fixtures.hpp"
#include "cubekit/report.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cubekit;
namespace fx = cubekit::fixtures;

namespace {

bool has_evidence(const FactorClassification& c, const std::string& needle) {
  for (const auto& e : c.evidence)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("factor classification") {
  auto p5 = fx::hyperplanes_of(fx::path(5));
  auto line = classify_factor(*p5);
  CHECK(line.kind == FactorKind::line);
  CHECK(has_evidence(line, "4 pairwise disjoint hyperplanes totally ordered along a path of 5 vertices"));

  CHECK(classify_factor(*fx::hyperplanes_of(fx::path(2))).kind == FactorKind::bounded);
  CHECK(classify_factor(*fx::hyperplanes_of(fx::path(1))).kind == FactorKind::bounded);

  auto f = fx::free_group_ball(4);
  auto tree = classify_factor(f.hyperplanes(), &f);
  CHECK(tree.kind == FactorKind::candidate_rank1);
  CHECK(has_evidence(tree, "facing triple H0:B H1:B H2:B, pairwise strongly separated"));
  CHECK(has_evidence(tree, "action: flip abA of H0:B"));

  auto star = classify_factor(*fx::hyperplanes_of(fx::star(3)));
  CHECK(star.kind == FactorKind::candidate_rank1);

  CHECK_THROWS_AS(classify_factor(*fx::hyperplanes_of(fx::hypercube(2))), PreconditionError);
}

TEST_CASE("shape of products") {
  auto q3 = theorem_b_shape(fx::hyperplanes_of(fx::hypercube(3)));
  CHECK(q3.r == 3);
  CHECK(q3.bounded == 3);
  CHECK(q3.k + q3.m == 0);
  CHECK(q3.product_verified);

  auto grid = theorem_b_shape(fx::hyperplanes_of(fx::grid(3, 3)));
  CHECK(grid.r == 2);
  CHECK(grid.k == 2);
  CHECK(grid.text().find("note:") == std::string::npos);

  auto fz = fx::free_group_times_integer(3, 3);
  auto shape = theorem_b_shape(fz.hyperplanes_ptr(), &fz);
  CHECK(shape.r == 2);
  CHECK(shape.k == 1);
  CHECK(shape.m == 1);
  CHECK(shape.bounded == 0);
  for (const auto& fr : shape.factors) {
    REQUIRE(fr.action_commutes);
    CHECK(*fr.action_commutes);
    if (fr.classification.kind == FactorKind::line) {
      CHECK(fr.vertices == 7);
      CHECK(has_evidence(fr.classification, "action: a fixes the line"));
      CHECK(has_evidence(fr.classification, "action: t translates the line by"));
      CHECK(has_evidence(fr.classification, "action: invariant line"));
    } else {
      CHECK(has_evidence(fr.classification, "action: flip"));
    }
  }
  auto text = shape.text();
  CHECK(text.rfind("theorem-b shape: r=2 k=1 m=1 bounded=0 product=verified\n", 0) == 0);
  CHECK(text.find("note: candidate-rank-1 factors are candidates only") != std::string::npos);

  auto j = nlohmann::json::parse(shape.json());
  CHECK(j["r"] == 2);
  CHECK(j["k"] == 1);
  CHECK(j["m"] == 1);
  CHECK(j["factors"].size() == 2);
  CHECK(j["factors"][0]["evidence"].size() == shape.factors[0].classification.evidence.size());
}

TEST_CASE("restricted actions commute with the product map") {
  auto fz = fx::free_group_times_integer(2, 2);
  auto d = irreducible_decomposition(fz.hyperplanes());
  REQUIRE(d.rank() == 2);
  std::vector<PartialAction> parts;
  for (std::size_t i = 0; i < 2; ++i) parts.push_back(*restrict_to_factor(fz, d, i));
  const auto& g = fz.graph();
  for (GenId s = 0; s < fz.generators().size(); ++s)
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      VertexId w = fz.image(s, v);
      if (w == kNone) continue;
      for (std::size_t i = 0; i < 2; ++i) CHECK(parts[i].image(s, d.coordinates[v * 2 + i]) == d.coordinates[w * 2 + i]);
    }

  // Swapping the coordinates of a square mixes the factors.
  auto sq = fx::hyperplanes_of(fx::grid(2, 2));
  const auto& sg = sq->graph();
  std::string text = "gen s s\n";
  for (VertexId v = 0; v < 4; ++v) {
    VertexId w = static_cast<VertexId>((v % 2) * 2 + v / 2);
    text += "map s " + sg.label(v) + " " + sg.label(w) + "\n";
  }
  auto swap = load_action(text + "base " + sg.label(0) + "\n", sq);
  auto ds = irreducible_decomposition(*sq);
  CHECK_FALSE(restrict_to_factor(swap, ds, 0));
  auto shape = theorem_b_shape(sq, &swap);
  CHECK_FALSE(*shape.factors[0].action_commutes);
}

TEST_CASE("accounting on random products") {
  fx::Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    auto a = fx::random_median(rng, 12, 3);
    auto b = fx::random_median(rng, 12, 3);
    auto hs = fx::hyperplanes_of(fx::product(a, b));
    auto rep = theorem_b_shape(hs);
    CHECK(rep.k + rep.m + rep.bounded == rep.r);
    CHECK(rep.r >= 2);
    CHECK(rep.product_verified);
    std::size_t total = 0;
    for (const auto& f : rep.factors) total += f.hyperplanes.size();
    CHECK(total == hs->count());
  }
}

}  // TEST_SUITE
