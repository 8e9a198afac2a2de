#include <algorithm>
#include <set>
#include <sstream>

#include "cubekit/schottky.hpp"

namespace cubekit {

namespace {

std::string quad_string(const std::array<Halfspace, 4>& q) {
  std::string out;
  for (const Halfspace& h : q) out += (out.empty() ? "" : " ") + to_string(h);
  return out;
}

Halfspace image_or_throw(const PartialAction& a, const Word& w, Halfspace h, const std::string& step) {
  auto img = a.apply(w, h);
  if (!img)
    throw BudgetExhausted(step + ": " + to_string(w, a.generators()) + " applied to " + to_string(h) +
                          " leaves the domain");
  return *img;
}

Word skewer_or_throw(const PartialAction& a, Halfspace k, Halfspace h, std::size_t max_length,
                     const std::string& step) {
  auto found = find_double_skewer(a, k, h, max_length);
  if (!found.word)
    throw BudgetExhausted(step + ": no word of length <= " + std::to_string(max_length) + " maps " + to_string(h) +
                          " strictly into " + to_string(k));
  return *found.word;
}

constexpr std::size_t kPairBudget = 4096;

}  // namespace

bool strongly_separated_quadruple(const HyperplaneSystem& hs, const std::array<Halfspace, 4>& quad) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!hs.facing(quad[i], quad[j]) || !hs.strongly_separated(quad[i].hyperplane, quad[j].hyperplane))
        return false;
  return true;
}

std::optional<std::array<Halfspace, 3>> facing_triple_with(const HyperplaneSystem& hs, Halfspace h,
                                                           std::uint32_t reach) {
  const MedianGraph& g = hs.graph();
  auto carrier = hs.carrier(h.hyperplane);
  auto dist = g.distances_from(carrier);
  std::set<HyperplaneId> near;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (dist[v] > reach) continue;
    for (VertexId w : g.neighbors(v)) near.insert(hs.hyperplane_of(g.edge_id(v, w)));
  }
  std::vector<Halfspace> cand;
  for (HyperplaneId x : near)
    for (std::uint8_t s = 0; s < 2; ++s)
      if (hs.facing(h, {x, s})) cand.push_back({x, s});
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      if (hs.facing(cand[i], cand[j])) return std::array<Halfspace, 3>{h, cand[i], cand[j]};
  return std::nullopt;
}

namespace {

// The nested pair b1 < b2 and the transport words of the interm argument,
// without applying them.
Transport plan_transport(const PartialAction& a, const std::array<Halfspace, 4>& quad, const Word& g, const Word& h,
                         std::size_t max_length) {
  const auto& hs = a.hyperplanes();
  const auto& gens = a.generators();
  const auto count = static_cast<HyperplaneId>(hs.count());

  Transport t;
  bool have = false;
  std::size_t tried = 0;
  for (HyperplaneId p = 0; p < count && !have; ++p)
    for (HyperplaneId r = p + 1; r < count && !have; ++r) {
      if (++tried > kPairBudget) throw BudgetExhausted("nested pair: no strongly separated pair fits the quadruple");
      if (!hs.strongly_separated(p, r)) continue;
      const Halfspace a1{p, static_cast<std::uint8_t>(1 - hs.side_containing(p, r))};
      const Halfspace a2{r, hs.side_containing(r, p)};
      // One of a2, a1*, a1, a2* lies in some member's complement.
      for (int form = 0; form < 4 && !have; ++form)
        for (int j = 0; j < 4 && !have; ++j) {
          const Halfspace outside = quad[j].complement();
          if (form == 0 && hs.subset(a2, outside)) {
            t.a1 = a1, t.a2 = a2, t.b1 = a1, t.b2 = a2;
          } else if (form == 1 && hs.subset(a1.complement(), outside)) {
            t.a1 = a2.complement(), t.a2 = a1.complement(), t.b1 = t.a1, t.b2 = t.a2;
          } else if (form == 2 && hs.subset(a1, outside)) {
            t.a1 = a1, t.a2 = a2;
            t.skewer = skewer_or_throw(a, a1, a2, max_length, "nested pair skewer");
          } else if (form == 3 && hs.subset(a2.complement(), outside)) {
            t.a1 = a2.complement(), t.a2 = a1.complement();
            t.skewer = skewer_or_throw(a, t.a1, t.a2, max_length, "nested pair skewer");
          } else {
            continue;
          }
          if (form >= 2) {
            t.b1 = image_or_throw(a, t.skewer, t.a1, "nested pair skewer");
            t.b2 = image_or_throw(a, t.skewer, t.a2, "nested pair skewer");
          }
          t.claim = j;
          have = true;
        }
    }
  if (!have) throw BudgetExhausted("nested pair: no strongly separated pair fits the quadruple");

  const Word G = g.inverse(gens), H = h.inverse(gens), one;
  // y carries the complement of member `claim` into member `landing`.
  static constexpr int kLanding[4] = {1, 0, 3, 2};
  const Word y = std::array<Word, 4>{G, g, H, h}[t.claim];
  t.landing = kLanding[t.claim];
  const std::array<std::array<Word, 4>, 4> table{{
      {one, G.times(h, gens), h, H},
      {g.times(h, gens), one, h, H},
      {g, G, one, H.times(g, gens)},
      {g, G, h.times(g, gens), one},
  }};
  for (int j = 0; j < 4; ++j) t.words[j] = table[t.landing][j].times(y, gens);
  return t;
}

}  // namespace

Transport refine_quadruple(const PartialAction& a, const std::array<Halfspace, 4>& quad, const Word& g,
                           const Word& h, std::size_t max_length) {
  const auto& hs = a.hyperplanes();
  const auto& gens = a.generators();
  Transport t = plan_transport(a, quad, g, h, max_length);
  for (int j = 0; j < 4; ++j) {
    t.images[j] = image_or_throw(a, t.words[j], t.b1, "transport");
    if (!hs.subset(t.images[j], quad[j]))
      throw PreconditionError("transport of " + to_string(t.b1) + " by " + to_string(t.words[j], gens) +
                              " is not inside " + to_string(quad[j]));
  }
  if (!strongly_separated_quadruple(hs, t.images))
    throw PreconditionError("transported quadruple " + quad_string(t.images) + " is not strongly separated");
  return t;
}

std::string QuadrupleResult::text(const Generators& gens) const {
  std::ostringstream out;
  out << "quadruple\n";
  out << "  triple: " << to_string(triple[0]) << " " << to_string(triple[1]) << " " << to_string(triple[2]) << "\n";
  out << "  flip: " << to_string(flip, gens) << "\n";
  out << "  initial: " << quad_string(initial) << "\n";
  out << "  skewers: g=" << to_string(g0, gens) << " h=" << to_string(h0, gens) << "\n";
  if (refinement) {
    const Transport& t = *refinement;
    out << "  refinement: a1=" << to_string(t.a1) << " a2=" << to_string(t.a2)
        << " x=" << to_string(t.skewer, gens) << " b1=" << to_string(t.b1) << " b2=" << to_string(t.b2)
        << " claim=" << t.claim + 1 << " landing=" << t.landing + 1 << "\n";
    out << "  transport:";
    for (const Word& w : t.words) out << " " << to_string(w, gens);
    out << "\n";
  } else {
    out << "  refinement: none\n";
  }
  out << "  final: " << quad_string(quadruple) << "\n";
  out << "  schottky: g=" << to_string(g, gens) << " h=" << to_string(h, gens) << "\n";
  for (const auto& s : steps) out << "  step: " << s << "\n";
  return out.str();
}

QuadrupleResult build_quadruple(const PartialAction& a, const std::array<Halfspace, 3>& triple,
                                std::size_t max_length) {
  const auto& hs = a.hyperplanes();
  const auto& gens = a.generators();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (!hs.facing(triple[i], triple[j]))
        throw PreconditionError(to_string(triple[i]) + " and " + to_string(triple[j]) + " do not face each other");

  QuadrupleResult r;
  r.triple = triple;
  auto flip = find_flipping(a, triple[0], max_length);
  if (!flip.word)
    throw BudgetExhausted("flip: no word of length <= " + std::to_string(max_length) + " flips " +
                          to_string(triple[0]));
  r.flip = *flip.word;
  r.steps.push_back("flip " + to_string(triple[0]) + " by " + to_string(r.flip, gens));
  r.initial = {triple[1], triple[2], image_or_throw(a, r.flip, triple[1], "flip"),
               image_or_throw(a, r.flip, triple[2], "flip")};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!hs.facing(r.initial[i], r.initial[j]))
        throw PreconditionError("initial quadruple " + quad_string(r.initial) + " is not facing");

  r.g0 = skewer_or_throw(a, r.initial[0], r.initial[1].complement(), max_length, "schottky g");
  r.h0 = skewer_or_throw(a, r.initial[2], r.initial[3].complement(), max_length, "schottky h");
  if (strongly_separated_quadruple(hs, r.initial)) {
    r.quadruple = r.initial;
    r.g = r.g0;
    r.h = r.h0;
    r.steps.push_back("initial quadruple already strongly separated");
    return r;
  }
  r.refinement = refine_quadruple(a, r.initial, r.g0, r.h0, max_length);
  r.quadruple = r.refinement->images;
  r.steps.push_back("refined by transporting " + to_string(r.refinement->b1));
  r.g = skewer_or_throw(a, r.quadruple[0], r.quadruple[1].complement(), max_length, "schottky g");
  r.h = skewer_or_throw(a, r.quadruple[2], r.quadruple[3].complement(), max_length, "schottky h");
  return r;
}

std::string SeparatedTranslate::text(const Generators& gens) const {
  std::ostringstream out;
  const Halfspace h = construction.triple[0];
  out << "separated-translate " << to_string(h) << "\n";
  out << "  triple: " << to_string(construction.triple[0]) << " " << to_string(construction.triple[1]) << " "
      << to_string(construction.triple[2]) << "\n";
  out << "  companion: " << to_string(companion) << "\n";
  out << "  skewer: " << to_string(skewer, gens) << "\n";
  out << "  n0: " << n0 << "\n";
  out << "  translate: " << to_string(translate, gens) << "\n";
  out << "  image: H" << image << "\n";
  out << "  strongly-separated: yes\n";
  return out.str();
}

std::optional<SeparatedTranslate> find_separated_translate(const PartialAction& a, Halfspace h,
                                                           const FiniteQuotient& q, std::size_t max_length) {
  const auto& hs = a.hyperplanes();
  const auto& gens = a.generators();
  if (h.hyperplane >= hs.count()) throw PreconditionError("hyperplane out of range");
  auto triple = facing_triple_with(hs, h);
  if (!triple) return std::nullopt;

  SeparatedTranslate r;
  try {
    r.construction = build_quadruple(a, *triple, max_length);
    const auto& c = r.construction;
    // The companion l is the transport of b1 into the second member.
    Transport t = plan_transport(a, c.quadruple, c.g, c.h, max_length);
    auto l = a.apply(t.words[1], t.b1);
    if (!l) return std::nullopt;
    r.companion = *l;
  } catch (const BudgetExhausted&) {
    return std::nullopt;
  }
  if (!hs.facing(h, r.companion) || !hs.strongly_separated(h.hyperplane, r.companion.hyperplane))
    throw Error("companion " + to_string(r.companion) + " is not strongly separated from " + to_string(h));

  auto x = find_double_skewer(a, r.companion, h.complement(), max_length);
  if (!x.word) return std::nullopt;
  r.skewer = *x.word;

  // Least n0 >= 1 with x^n0 fixing the marked point of q.
  std::uint32_t point = q.image(r.skewer);
  r.n0 = 1;
  while (point != 0) {
    if (r.n0 > static_cast<long>(q.degree())) return std::nullopt;
    point = q.image(r.skewer, point);
    ++r.n0;
  }
  r.translate = r.skewer.power(r.n0, gens);
  auto img = a.apply_hyperplane(r.translate, h.hyperplane);
  if (!img) return std::nullopt;
  r.image = *img;
  if (!hs.strongly_separated(h.hyperplane, r.image))
    throw Error("translate " + to_string(r.translate, gens) + " does not separate " + to_string(h));
  return r;
}

}  // namespace cubekit
