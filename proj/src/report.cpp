#include "cubekit/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace cubekit {

namespace {

constexpr std::size_t kListed = 16;
constexpr std::size_t kTripleScan = 4096;
constexpr std::size_t kFlipLength = 4;

const char* kCandidateNote =
    "candidate-rank-1 factors are candidates only: identifying their groups (surface groups or otherwise) is not "
    "decidable from this data";

struct Namer {
  const std::vector<HyperplaneId>* names;
  std::string operator()(HyperplaneId h) const { return "H" + std::to_string(names ? (*names)[h] : h); }
  std::string operator()(Halfspace s) const { return (*this)(s.hyperplane) + (s.side ? ":B" : ":A"); }
};

bool pairwise_separated(const HyperplaneSystem& hs, const std::vector<Halfspace>& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (!hs.strongly_separated(t[i].hyperplane, t[j].hyperplane)) return false;
  return true;
}

// Hyperplanes of a path in order from its smallest endpoint, with the side
// pointing back to that endpoint.
std::vector<Halfspace> path_order(const HyperplaneSystem& hs) {
  const auto& g = hs.graph();
  VertexId v = 0;
  while (g.degree(v) > 1) ++v;
  std::vector<Halfspace> order;
  VertexId prev = kNone;
  for (;;) {
    VertexId next = kNone;
    for (VertexId w : g.neighbors(v))
      if (w != prev) next = w;
    if (next == kNone) break;
    HyperplaneId h = hs.hyperplane_of(g.edge_id(v, next));
    order.push_back({h, hs.side_of(h, v)});
    prev = v;
    v = next;
  }
  return order;
}

std::string line_motion(const HyperplaneSystem& hs, const PartialAction& a, GenId s,
                        const std::vector<Halfspace>& order) {
  std::vector<long> position(hs.count());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i].hyperplane] = static_cast<long>(i);
  std::optional<long> shift;
  bool reverses = false, preserves = false, consistent = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto img = a.apply_generator(s, order[i]);
    if (!img) continue;
    long q = position[img->hyperplane];
    bool flipped = order[static_cast<std::size_t>(q)] != *img;
    (flipped ? reverses : preserves) = true;
    long d = flipped ? q + static_cast<long>(i) : q - static_cast<long>(i);
    if (shift && *shift != d) consistent = false;
    shift = d;
  }
  const std::string& name = a.generators().name(s);
  if (!shift) return name + " is undefined on the factor";
  if (reverses && preserves) return name + " does not act along the line";
  if (!consistent) return name + " does not act along the line";
  if (reverses) return name + " reflects the line";
  if (*shift == 0) return name + " fixes the line";
  return name + " translates the line by " + (*shift > 0 ? "+" : "") + std::to_string(*shift);
}

}  // namespace

std::string to_string(FactorKind k) {
  switch (k) {
    case FactorKind::line:
      return "line";
    case FactorKind::candidate_rank1:
      return "candidate-rank-1";
    case FactorKind::bounded:
      return "bounded";
  }
  return "bounded";
}

FactorClassification classify_factor(const HyperplaneSystem& hs, const PartialAction* a,
                                     const std::vector<HyperplaneId>* names) {
  const auto& g = hs.graph();
  if (auto d = irreducible_decomposition(hs); d.rank() > 1)
    throw PreconditionError("factor is reducible: " + std::to_string(d.rank()) + " irreducible factors");
  const Namer name{names};
  FactorClassification out;
  const std::size_t n = hs.count();

  if (n <= 1) {
    out.kind = FactorKind::bounded;
    out.evidence.push_back(std::to_string(n) + (n == 1 ? " hyperplane" : " hyperplanes"));
    return out;
  }

  std::size_t max_degree = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) max_degree = std::max(max_degree, g.degree(v));
  if (g.is_tree() && max_degree <= 2) {
    out.kind = FactorKind::line;
    out.evidence.push_back(std::to_string(n) + " pairwise disjoint hyperplanes totally ordered along a path of " +
                           std::to_string(g.vertex_count()) + " vertices");
    if (a) {
      auto order = path_order(hs);
      bool along = true;
      for (GenId s = 0; s < a->generators().size(); ++s) {
        auto motion = line_motion(hs, *a, s, order);
        if (motion.find("does not act") != std::string::npos) along = false;
        out.evidence.push_back("action: " + motion);
      }
      out.evidence.push_back(along ? "action: invariant line, every generator moves along the ordered hyperplanes"
                                   : "action: no invariant line detected");
    }
    return out;
  }

  std::optional<std::vector<Halfspace>> triple, any_triple;
  for (VertexId v = 0; v < g.vertex_count() && !triple; ++v) {
    auto t = facing_triple_at(hs, v);
    if (t.size() != 3) continue;
    if (!any_triple) any_triple = t;
    if (pairwise_separated(hs, t)) triple = t;
  }
  if (!triple)
    for (auto& t : facing_tuples(hs, 3, kTripleScan)) {
      if (!any_triple) any_triple = t;
      if (pairwise_separated(hs, t)) {
        triple = t;
        break;
      }
    }

  if (triple) {
    out.kind = FactorKind::candidate_rank1;
    out.evidence.push_back("facing triple " + name((*triple)[0]) + " " + name((*triple)[1]) + " " +
                           name((*triple)[2]) + ", pairwise strongly separated");
    if (a) {
      auto flip = find_flipping(*a, (*triple)[0], kFlipLength);
      if (flip.word)
        out.evidence.push_back("action: flip " + to_string(*flip.word, a->generators()) + " of " +
                               name((*triple)[0]));
      else
        out.evidence.push_back("action: no flip of " + name((*triple)[0]) + " up to length " +
                               std::to_string(kFlipLength) + (flip.truncated ? " (truncated)" : ""));
    }
    return out;
  }
  out.kind = FactorKind::bounded;
  if (any_triple || !facing_tuples(hs, 2, 1).empty())
    out.evidence.push_back("facing halfspaces present but no pairwise strongly separated facing triple");
  else
    out.evidence.push_back("no facing pair");
  return out;
}

std::optional<PartialAction> restrict_to_factor(const PartialAction& a, const Decomposition& d, std::size_t i) {
  const std::size_t r = d.rank();
  if (i >= r) throw PreconditionError("factor index out of range");
  if (r == 1) return a;
  const MedianGraph& fg = d.factor_graphs[i];
  const MedianGraph& g = a.graph();
  const auto& gens = a.generators();
  std::vector<std::vector<VertexId>> maps(gens.size(), std::vector<VertexId>(fg.vertex_count(), kNone));
  for (GenId s = 0; s < gens.size(); ++s)
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      VertexId w = a.image(s, v);
      if (w == kNone) continue;
      VertexId x = d.coordinates[v * r + i], y = d.coordinates[w * r + i];
      if (maps[s][x] == kNone) maps[s][x] = y;
      else if (maps[s][x] != y) return std::nullopt;
    }
  auto hs = std::make_shared<const HyperplaneSystem>(fg);
  return PartialAction(std::move(hs), gens, std::move(maps), d.coordinates[a.base() * r + i]);
}

DecompositionReport theorem_b_shape(std::shared_ptr<const HyperplaneSystem> hs, const PartialAction* a) {
  const MedianGraph& g = hs->graph();
  auto d = irreducible_decomposition(*hs);
  const std::size_t r = d.rank();
  DecompositionReport out;
  out.r = r;
  out.product_verified = r == 1 || verify_product(g, d);
  out.factors.resize(r);

  parallel_chunks(r, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      FactorReport& f = out.factors[i];
      f.hyperplanes = d.factors[i];
      f.vertices = d.factor_graphs[i].vertex_count();
      auto fhs = r == 1 ? hs : std::make_shared<const HyperplaneSystem>(d.factor_graphs[i]);

      // Factor-local hyperplane ids back to ids of the input.
      std::vector<HyperplaneId> names(fhs->count(), kNone);
      for (HyperplaneId h : d.factors[i]) {
        const Edge& e = g.edge(hs->edges_of(h).front());
        VertexId u = d.coordinates[e.u * r + i], v = d.coordinates[e.v * r + i];
        names[fhs->hyperplane_of(fhs->graph().edge_id(u, v))] = h;
      }

      std::optional<PartialAction> restricted;
      if (a) {
        restricted = restrict_to_factor(*a, d, i);
        f.action_commutes = restricted.has_value();
      }
      f.classification = classify_factor(*fhs, restricted ? &*restricted : nullptr, &names);
    }
  });
  for (const auto& f : out.factors) {
    switch (f.classification.kind) {
      case FactorKind::line:
        ++out.k;
        break;
      case FactorKind::candidate_rank1:
        ++out.m;
        break;
      case FactorKind::bounded:
        ++out.bounded;
        break;
    }
  }
  return out;
}

std::string DecompositionReport::text() const {
  std::ostringstream out;
  out << "theorem-b shape: r=" << r << " k=" << k << " m=" << m << " bounded=" << bounded
      << " product=" << (product_verified ? "verified" : "failed") << "\n";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    out << "factor " << i + 1 << ": " << to_string(f.classification.kind) << ", " << f.hyperplanes.size()
        << " hyperplanes, " << f.vertices << " vertices\n";
    out << "  hyperplanes:";
    for (std::size_t j = 0; j < f.hyperplanes.size() && j < kListed; ++j) out << " H" << f.hyperplanes[j];
    if (f.hyperplanes.size() > kListed) out << " ... (+" << f.hyperplanes.size() - kListed << " more)";
    out << "\n";
    for (const auto& e : f.classification.evidence) out << "  evidence: " << e << "\n";
    if (f.action_commutes)
      out << "  restricted action: "
          << (*f.action_commutes ? "commutes with the product" : "mixes this factor with others") << "\n";
  }
  if (m > 0) out << "note: " << kCandidateNote << "\n";
  return out.str();
}

std::string DecompositionReport::json() const {
  nlohmann::ordered_json j;
  j["r"] = r;
  j["k"] = k;
  j["m"] = m;
  j["bounded"] = bounded;
  j["product_verified"] = product_verified;
  j["factors"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    nlohmann::ordered_json fj;
    fj["index"] = i + 1;
    fj["kind"] = to_string(f.classification.kind);
    fj["hyperplane_count"] = f.hyperplanes.size();
    std::vector<HyperplaneId> listed(f.hyperplanes.begin(),
                                     f.hyperplanes.begin() + static_cast<std::ptrdiff_t>(
                                                                 std::min(kListed, f.hyperplanes.size())));
    fj["hyperplanes"] = listed;
    fj["vertices"] = f.vertices;
    fj["evidence"] = f.classification.evidence;
    fj["action_commutes"] = f.action_commutes ? nlohmann::ordered_json(*f.action_commutes) : nullptr;
    j["factors"].push_back(std::move(fj));
  }
  j["note"] = m > 0 ? nlohmann::ordered_json(kCandidateNote) : nullptr;
  return j.dump(2) + "\n";
}

}  // namespace cubekit
