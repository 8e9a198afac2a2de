#include "cubekit/schottky.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cubekit {

namespace {

std::string h_name(HyperplaneId h) { return "H" + std::to_string(h); }

std::string word_list(const std::vector<Word>& ws, const Generators& gens) {
  if (ws.empty()) return "-";
  std::string out;
  for (const Word& w : ws) out += (out.empty() ? "" : " ") + to_string(w, gens);
  return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

bool preserves(const PartialAction& a, const std::vector<Word>& words, HyperplaneId h) {
  for (const Word& w : words) {
    auto img = a.apply_hyperplane(w, h);
    if (!img || *img != h) return false;
  }
  return true;
}

// Every word maps the vertex set onto itself.
bool fixes_set(const PartialAction& a, const std::vector<Word>& words, std::vector<VertexId> verts) {
  std::sort(verts.begin(), verts.end());
  std::vector<VertexId> img(verts.size());
  for (const Word& w : words) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      auto r = a.apply(w, verts[i]);
      if (!r.ok()) return false;
      img[i] = r.vertex;
    }
    std::sort(img.begin(), img.end());
    if (img != verts) return false;
  }
  return true;
}

}  // namespace

std::string SigmaData::text(const Generators& gens) const {
  std::ostringstream out;
  out << "sigma base=" << h_name(base) << " test=" << to_string(test) << "\n";
  out << "  p: " << fixed_edge.u << "-" << fixed_edge.v << "\n";
  out << "  sigma: " << word_list(sigma, gens) << "\n";
  out << "  a-orbit:";
  for (const Halfspace& h : a_orbit) out << " " << to_string(h);
  out << " (" << a_orbit.size() << ")\n";
  out << "  fixes-p: " << yes_no(fixes_p) << "\n";
  out << "  orbit-closed: " << yes_no(orbit_closed) << "\n";
  out << "  separea: " << yes_no(separea) << "\n";
  if (!unresolved.empty()) out << "  unresolved: " << word_list(unresolved, gens) << "\n";
  out << "  stabilizer-words: " << stabilizer_words << (truncated ? " (truncated)" : "") << "\n";
  return out.str();
}

SigmaData sigma_analysis(const PartialAction& a, HyperplaneId base, Halfspace test, std::size_t max_length) {
  const auto& hs = a.hyperplanes();
  const auto& gens = a.generators();
  if (base >= hs.count() || test.hyperplane >= hs.count()) throw PreconditionError("hyperplane out of range");
  if (!hs.strongly_separated(base, test.hyperplane))
    throw PreconditionError(h_name(base) + " and " + h_name(test.hyperplane) + " are not strongly separated");

  SigmaData out;
  out.base = base;
  out.test = test;
  out.fixed_edge = hs.graph().edge(projection_pair(hs, base, test.hyperplane).first);

  auto stab = stabilizer_words(a, Halfspace{base, 0}, max_length);
  out.truncated = stab.truncated;
  out.stabilizer_words = stab.words.size();
  for (const Word& w : stab.words) {
    auto img = a.apply(w, test);
    if (!img) {
      out.truncated = true;
      continue;
    }
    if (!hs.disjoint(*img, test)) out.sigma.push_back(w);
  }
  for (const Word& s : out.sigma) {
    if (a.apply(s, out.fixed_edge.u).vertex != out.fixed_edge.u ||
        a.apply(s, out.fixed_edge.v).vertex != out.fixed_edge.v)
      out.fixes_p = false;
  }

  // <sigma> as reduced words of length <= max_length.
  std::vector<Word> letters;
  for (const Word& s : out.sigma)
    if (!s.empty()) {
      letters.push_back(s);
      letters.push_back(s.inverse(gens));
    }
  std::set<Word> group{Word{}};
  std::vector<Word> frontier{Word{}};
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const Word& f : frontier)
      for (const Word& s : letters) {
        Word w = f.times(s, gens);
        if (w.length() <= max_length && group.insert(w).second) next.push_back(w);
      }
    frontier = std::move(next);
  }

  std::set<std::uint32_t> seen;
  for (const Word& w : group) {
    auto img = a.apply(w, test);
    if (!img) {
      out.truncated = true;
      continue;
    }
    if (seen.insert(img->index()).second) out.a_orbit.push_back(*img);
  }
  for (const Halfspace& o : out.a_orbit)
    for (const Word& s : letters) {
      auto img = a.apply(s, o);
      if (!img || !seen.count(img->index())) out.orbit_closed = false;
    }

  // Stabilizer words outside <sigma> must move U = union of the orbit off itself.
  for (const Word& w : stab.words) {
    if (group.count(w)) continue;
    bool meets = false;
    for (const Halfspace& o1 : out.a_orbit) {
      auto img = a.apply(w, o1);
      if (!img) {
        out.truncated = true;
        continue;
      }
      for (const Halfspace& o2 : out.a_orbit)
        if (!hs.disjoint(*img, o2)) meets = true;
    }
    if (meets) out.unresolved.push_back(w);
  }
  out.separea = out.unresolved.empty();
  return out;
}

std::string FixedLocus::text(const MedianGraph& g) const {
  static const char* names[] = {"none", "vertex", "edge", "square"};
  std::ostringstream out;
  out << "fixed: " << names[static_cast<int>(kind)];
  if (found()) {
    out << " {";
    for (std::size_t i = 0; i < vertices.size(); ++i) out << (i ? "," : "") << g.label(vertices[i]);
    out << "}";
  }
  out << " method=" << method << "\n";
  return out.str();
}

FixedLocus elliptic_fixed_point(const PartialAction& a, const std::vector<Word>& words, std::size_t orbit_length,
                                std::optional<HyperplaneId> hint) {
  const auto& g = a.graph();
  const auto& hs = a.hyperplanes();
  std::vector<Word> moving;
  for (const Word& w : words)
    if (!w.empty()) moving.push_back(w);

  FixedLocus out;
  if (hint) {
    if (*hint >= hs.count()) throw PreconditionError("hyperplane out of range");
    if (preserves(a, moving, *hint)) {
      auto found = first_word(a.generators(), orbit_length, [&](const Word& gamma) {
        auto img = a.apply_hyperplane(gamma, *hint);
        if (!img) return Verdict::out_of_domain;
        if (!hs.strongly_separated(*hint, *img) || !preserves(a, moving, *img)) return Verdict::no;
        const Edge& e = g.edge(projection_pair(hs, *hint, *img).first);
        return fixes_set(a, moving, {e.u, e.v}) ? Verdict::yes : Verdict::no;
      });
      if (found.word) {
        auto img = *a.apply_hyperplane(*found.word, *hint);
        const Edge& e = g.edge(projection_pair(hs, *hint, img).first);
        out.kind = LocusKind::edge;
        out.vertices = {e.u, e.v};
        out.method = "projection";
        out.gamma = found.word;
        return out;
      }
    }
  }
  out.method = "direct";
  if (moving.empty()) {
    out.kind = LocusKind::vertex;
    out.vertices = {a.base()};
    out.method = "identity";
    return out;
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (fixes_set(a, moving, {v})) {
      out.kind = LocusKind::vertex;
      out.vertices = {v};
      return out;
    }
  for (const Edge& e : g.edges())
    if (fixes_set(a, moving, {e.u, e.v})) {
      out.kind = LocusKind::edge;
      out.vertices = {e.u, e.v};
      return out;
    }
  for (const auto& sq : enumerate_cubes(g, 2))
    if (fixes_set(a, moving, sq)) {
      out.kind = LocusKind::square;
      out.vertices = sq;
      return out;
    }
  return out;
}

}  // namespace cubekit
