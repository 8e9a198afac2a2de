#include "cubekit/fixtures.hpp"
#include "cubekit/schottky.hpp"
#include "doctest.h"

using namespace cubekit;
namespace fx = cubekit::fixtures;

namespace {

Halfspace branch(const PartialAction& a, const char* from, const char* to) {
  const auto& g = a.graph();
  VertexId u = *g.find_vertex(from), v = *g.find_vertex(to);
  HyperplaneId h = a.hyperplanes().hyperplane_of(g.edge_id(u, v));
  return {h, a.hyperplanes().side_of(h, v)};
}

const PartialAction& f2() {
  static const PartialAction ball = fx::free_group_ball(10);
  return ball;
}

std::array<Halfspace, 4> standard_quadruple(const PartialAction& f) {
  return {branch(f, "a", "aa"), branch(f, "A", "AA"), branch(f, "b", "bb"), branch(f, "B", "BB")};
}

// c - x, c - y, c - z - w with s swapping x and y.
PartialAction swap_action() {
  auto hs = fx::hyperplanes_of(load_graph("e c x\ne c y\ne c z\ne z w\n"));
  return load_action("gen s s\nmap s c c\nmap s x y\nmap s y x\nmap s z z\nmap s w w\nbase c\n", hs);
}

}  // namespace

TEST_SUITE("schottky") {

TEST_CASE("sigma analysis on free and finite actions") {
  const auto& f = f2();
  auto s = sigma_analysis(f, branch(f, "1", "a").hyperplane, branch(f, "1", "b"), 4);
  CHECK(s.sigma.size() == 1);
  CHECK(s.sigma[0].empty());
  CHECK(s.a_orbit.size() == 1);
  CHECK(s.fixes_p);
  CHECK(s.orbit_closed);
  CHECK(s.separea);
  CHECK_FALSE(s.inconclusive());

  auto sw = swap_action();
  const auto& g = sw.graph();
  const auto& hs = sw.hyperplanes();
  HyperplaneId zw = hs.hyperplane_of(g.edge_id(*g.find_vertex("z"), *g.find_vertex("w")));
  HyperplaneId cx = hs.hyperplane_of(g.edge_id(*g.find_vertex("c"), *g.find_vertex("x")));
  Halfspace big{cx, hs.side_of(cx, *g.find_vertex("c"))};
  auto r = sigma_analysis(sw, zw, big, 3);
  REQUIRE(r.sigma.size() == 2);
  CHECK(to_string(r.sigma[1], sw.generators()) == "s");
  CHECK(r.a_orbit.size() == 2);
  CHECK(r.fixes_p);
  CHECK(r.separea);
  // The leaf side is moved off itself, so only the identity qualifies.
  auto leaf = sigma_analysis(sw, zw, big.complement(), 3);
  CHECK(leaf.sigma.size() == 1);
  CHECK(leaf.a_orbit.size() == 1);
  CHECK(leaf.separea);

  auto grid = fx::integer_grid(5, 5);
  CHECK_THROWS_AS(sigma_analysis(grid, 0, {1, 0}, 3), PreconditionError);
}

TEST_CASE("elliptic fixed points") {
  const auto& f = f2();
  auto id = elliptic_fixed_point(f, {Word{}}, 4);
  CHECK(id.kind == LocusKind::vertex);
  CHECK(id.vertices == std::vector<VertexId>{f.base()});

  auto edge = elliptic_fixed_point(f, {Word{}}, 4, branch(f, "1", "a").hyperplane);
  REQUIRE(edge.kind == LocusKind::edge);
  CHECK(edge.vertices == std::vector<VertexId>{*f.graph().find_vertex("1"), *f.graph().find_vertex("a")});
  CHECK(edge.method == "projection");

  auto grid = fx::integer_grid(7, 7);
  const auto& gens = grid.generators();
  auto none = elliptic_fixed_point(grid, {parse_word("x", gens), parse_word("y", gens)}, 3);
  CHECK_FALSE(none.found());

  auto sw = swap_action();
  auto fixed = elliptic_fixed_point(sw, {parse_word("s", sw.generators())}, 2);
  REQUIRE(fixed.kind == LocusKind::vertex);
  CHECK(sw.graph().label(fixed.vertices[0]) == "c");

  // A reflection of an edge fixes it only setwise.
  auto hs = fx::hyperplanes_of(load_graph("e p q\n"));
  auto flip = load_action("gen r r\nmap r p q\nmap r q p\nbase p\n", hs);
  auto mid = elliptic_fixed_point(flip, {parse_word("r", flip.generators())}, 2);
  CHECK(mid.kind == LocusKind::edge);
}

TEST_CASE("facing quadruple and refinement") {
  const auto& f = f2();
  const auto& gens = f.generators();
  auto triple = facing_triple_with(f.hyperplanes(), branch(f, "1", "a"));
  REQUIRE(triple);
  CHECK((*triple)[1] == branch(f, "1", "A"));
  CHECK((*triple)[2] == branch(f, "1", "b"));
  auto q = build_quadruple(f, *triple, 8);
  CHECK(to_string(q.flip, gens) == "abA");
  CHECK(to_string(q.g, gens) == "AB");
  CHECK(to_string(q.h, gens) == "abAABaBA");
  CHECK_FALSE(q.refinement);
  CHECK(strongly_separated_quadruple(f.hyperplanes(), q.quadruple));
  CHECK(f.hyperplanes().strict_subset(*f.apply(q.g, q.quadruple[1].complement()), q.quadruple[0]));
  CHECK(f.hyperplanes().strict_subset(*f.apply(q.h, q.quadruple[3].complement()), q.quadruple[2]));

  CHECK_THROWS_AS(build_quadruple(f, *triple, 2), BudgetExhausted);
  std::array<Halfspace, 3> nested{branch(f, "1", "a"), branch(f, "a", "aa"), branch(f, "1", "b")};
  CHECK_THROWS_AS(build_quadruple(f, nested, 8), PreconditionError);

  // Forced refinement on the standard quadruple with its own Schottky pair.
  auto quad = standard_quadruple(f);
  auto t = refine_quadruple(f, quad, parse_word("aa", gens), parse_word("bb", gens), 6);
  for (int j = 0; j < 4; ++j) CHECK(f.hyperplanes().subset(t.images[j], quad[j]));
  CHECK(strongly_separated_quadruple(f.hyperplanes(), t.images));
  CHECK(f.hyperplanes().subset(t.b1, t.b2));
  CHECK(f.hyperplanes().subset(t.b2, quad[t.claim].complement()));

  // No facing triple on a line or in the cube.
  auto z = fx::integer_path(6);
  CHECK_FALSE(facing_triple_with(z.hyperplanes(), {3, 0}, 6));
  HyperplaneSystem q3(require_median(fx::hypercube(3)));
  CHECK_FALSE(facing_triple_with(q3, {0, 0}, 3));
}

TEST_CASE("ping-pong certificates") {
  const auto& f = f2();
  const auto& gens = f.generators();
  auto quad = standard_quadruple(f);
  const Word g = parse_word("aa", gens), h = parse_word("bb", gens);
  auto cert = pingpong_certify(f, quad, g, h, 3);
  REQUIRE(cert.ok);
  CHECK(cert.delta == 2);
  CHECK_FALSE(cert.truncated);
  CHECK(cert.checks.size() == 24);
  for (const auto& c : cert.checks) CHECK(c.distance >= 2 * static_cast<std::uint32_t>(std::labs(c.power)));

  // Free-reduction oracle: no nontrivial word of length <= 6 in g, h fixes
  // the base point.
  const Generators fg(GeneratorPairs{{"g", "G"}, {"h", "H"}});
  const std::array<Word, 4> letters{g, g.inverse(gens), h, h.inverse(gens)};
  for (const Word& w : reduced_words(fg, 4)) {
    if (w.empty()) continue;
    Word x;
    for (GenId l : w.letters()) x = x.times(letters[l], gens);
    REQUIRE_FALSE(x.empty());
    auto r = f.apply(x, f.base());
    REQUIRE(r.ok());
    CHECK(r.vertex != f.base());
  }

  auto idle = pingpong_certify(f, quad, Word{}, h, 3);
  CHECK_FALSE(idle.ok);
  CHECK(idle.failure.find("g^1") == 0);

  std::array<Halfspace, 4> swapped{quad[2], quad[3], quad[0], quad[1]};
  auto bad = pingpong_certify(f, swapped, g, h, 3);
  CHECK_FALSE(bad.ok);
  CHECK(bad.failure.find("is not inside U") != std::string::npos);

  std::array<Halfspace, 4> crossing{quad[0], quad[0].complement(), quad[2], quad[3]};
  CHECK_FALSE(pingpong_certify(f, crossing, g, h, 3).ok);

  auto far = pingpong_certify(f, quad, g, h, 5);
  CHECK(far.truncated);
  CHECK(far.ok);
  CHECK_THROWS_AS(pingpong_certify(f, quad, g, h, 0), PreconditionError);
}

TEST_CASE("stable hyperplane certificates") {
  const auto& f = f2();
  const auto& gens = f.generators();
  auto quad = standard_quadruple(f);
  auto cert = pingpong_certify(f, quad, parse_word("aa", gens), parse_word("bb", gens), 3);
  HyperplaneId base = branch(f, "1", "a").hyperplane;
  auto st = stable_certify(f, base, cert, 8);
  CHECK(st.ok);
  CHECK(st.checks.size() == 8);
  CHECK(st.out_of_domain == 0);
  for (const auto& c : st.checks) {
    REQUIRE(c.image);
    CHECK(*c.image != base);
    CHECK(c.distance >= 1);
  }

  auto empty = stable_certify(f, base, cert, 0);
  CHECK(empty.vacuous());
  CHECK(empty.ok);

  CHECK_THROWS_AS(stable_certify(f, quad[0].hyperplane, cert, 8), PreconditionError);
  auto failed = pingpong_certify(f, quad, Word{}, parse_word("bb", gens), 3);
  CHECK_THROWS_AS(stable_certify(f, base, failed, 8), PreconditionError);
}

TEST_CASE("certificate verification") {
  const auto& f = f2();
  const auto& gens = f.generators();
  auto quad = standard_quadruple(f);
  auto cert = pingpong_certify(f, quad, parse_word("aa", gens), parse_word("bb", gens), 3);
  auto text = cert.text(gens);
  CHECK(text.rfind(std::string(kCertificateTag), 0) == 0);
  auto ok = verify_certificate(text, f);
  CHECK(ok.ok);
  CHECK(ok.kind == "pingpong");

  auto with_sources = "source graph f2.graph\n" + text + "source action f2.action\n";
  CHECK(verify_certificate(with_sources, f).ok);
  auto sources = certificate_sources(with_sources);
  REQUIRE(sources.size() == 2);
  CHECK(sources[0] == std::pair<std::string, std::string>{"graph", "f2.graph"});

  auto tampered = text;
  tampered.replace(tampered.find("distance 3"), 10, "distance 4");
  auto bad = verify_certificate(tampered, f);
  CHECK_FALSE(bad.ok);
  CHECK(bad.message.find("line 9") == 0);

  auto st = stable_certify(f, branch(f, "1", "a").hyperplane, cert, 8);
  CHECK(verify_certificate(st.text(gens), f).ok);

  auto other = fx::free_group_ball(9);
  auto mismatch = verify_certificate(text, other);
  CHECK_FALSE(mismatch.ok);
  CHECK(mismatch.message.find("digest") != std::string::npos);

  CHECK_THROWS_AS(verify_certificate("hello\n", f), ParseError);
  CHECK_THROWS_AS(verify_certificate(std::string(kCertificateTag) + "\nkind pingpong\n", f), ParseError);
}

TEST_CASE("separated translates") {
  const auto& f = f2();
  const auto& gens = f.generators();
  auto h = branch(f, "1", "a");
  auto sign = find_separated_translate(f, h, fx::sign_quotient(gens), 8);
  REQUIRE(sign);
  CHECK(sign->n0 == 2);
  CHECK(to_string(sign->skewer, gens) == "baabA");
  CHECK(f.hyperplanes().strongly_separated(h.hyperplane, sign->image));
  CHECK(fx::sign_quotient(gens).fixes_marked_point(sign->translate));
  CHECK(f.hyperplanes().strict_subset(*f.apply(sign->skewer, h.complement()), sign->companion));

  FiniteQuotient trivial(gens, std::vector<std::vector<std::uint32_t>>(4, std::vector<std::uint32_t>{0}));
  auto one = find_separated_translate(f, h, trivial, 8);
  REQUIRE(one);
  CHECK(one->n0 == 1);

  auto still = fx::trivial_action(fx::star(3), GeneratorPairs{{"a", "A"}, {"b", "B"}});
  CHECK_FALSE(find_separated_translate(still, {0, 1}, trivial, 4));
}

}  // TEST_SUITE
