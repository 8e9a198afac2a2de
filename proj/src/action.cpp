#include "cubekit/action.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace cubekit {

Generators::Generators(const GeneratorPairs& pairs) : pairs_(pairs) {
  auto add = [&](const std::string& name) {
    if (name.empty()) throw Error("empty generator name");
    if (name.find_first_of(".() \t") != std::string::npos)
      throw Error("generator name '" + name + "' contains a reserved character");
    if (find(name)) throw Error("generator '" + name + "' declared twice");
    names_.push_back(name);
    if (name.size() != 1) single_char_ = false;
    return static_cast<GenId>(names_.size() - 1);
  };
  for (const auto& [name, inv] : pairs) {
    if (names_.size() + 2 > 255) throw CapacityError("too many generators");
    GenId a = add(name);
    inverse_.push_back(a);
    if (inv != name) {
      GenId b = add(inv);
      inverse_.push_back(a);
      inverse_[a] = b;
    }
  }
}

std::optional<GenId> Generators::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<GenId>(i);
  return std::nullopt;
}

Word::Word(std::vector<GenId> letters, const Generators& gens) {
  for (GenId g : letters) {
    if (g >= gens.size()) throw Error("letter out of range");
    if (!letters_.empty() && letters_.back() == gens.inverse(g)) {
      letters_.pop_back();
    } else {
      letters_.push_back(g);
    }
  }
}

Word Word::inverse(const Generators& gens) const {
  std::vector<GenId> out(letters_.rbegin(), letters_.rend());
  for (auto& g : out) g = gens.inverse(g);
  Word w;
  w.letters_ = std::move(out);
  return w;
}

Word Word::times(const Word& other, const Generators& gens) const {
  std::vector<GenId> all = letters_;
  all.insert(all.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(all), gens);
}

Word Word::power(long n, const Generators& gens) const {
  Word base = n < 0 ? inverse(gens) : *this;
  Word out;
  for (long i = 0; i < (n < 0 ? -n : n); ++i) out = out.times(base, gens);
  return out;
}

std::string to_string(const Word& w, const Generators& gens) {
  if (w.empty()) return "()";
  std::string out;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (i > 0 && !gens.single_char()) out += '.';
    out += gens.name(w.letters()[i]);
  }
  return out;
}

Word parse_word(std::string_view text, const Generators& gens) {
  text = trim(text);
  if (text.empty() || text == "()") return {};
  std::vector<std::string> names;
  if (text.find('.') != std::string_view::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t dot = text.find('.', pos);
      if (dot == std::string_view::npos) dot = text.size();
      names.emplace_back(text.substr(pos, dot - pos));
      pos = dot + 1;
    }
  } else if (gens.single_char()) {
    for (char c : text) names.emplace_back(1, c);
  } else {
    names.emplace_back(text);
  }
  std::vector<GenId> letters;
  for (const auto& n : names) {
    auto g = gens.find(n);
    if (!g) throw Error("unknown generator '" + n + "' in word '" + std::string(text) + "'");
    letters.push_back(*g);
  }
  return Word(std::move(letters), gens);
}

namespace {

// Words of length k+1 in lex order from those of length k in lex order.
std::vector<Word> next_level(const std::vector<Word>& level, const Generators& gens) {
  std::vector<Word> out;
  for (GenId g = 0; g < gens.size(); ++g)
    for (const Word& w : level) {
      if (!w.empty() && w.letters().front() == gens.inverse(g)) continue;
      std::vector<GenId> letters{g};
      letters.insert(letters.end(), w.letters().begin(), w.letters().end());
      out.emplace_back(std::move(letters), gens);
    }
  return out;
}

}  // namespace

Found first_word(const Generators& gens, std::size_t max_length, const std::function<Verdict(const Word&)>& pred) {
  Found result;
  std::vector<Word> level{Word{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    level = next_level(level, gens);
    constexpr std::size_t kChunk = 64;
    const std::size_t chunks = (level.size() + kChunk - 1) / kChunk;
    std::vector<std::size_t> hit(chunks, kNone);
    std::vector<std::uint8_t> out(chunks, 0);
    parallel_chunks(level.size(), kChunk, [&](std::size_t c, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        Verdict v = pred(level[i]);
        if (v == Verdict::out_of_domain) out[c] = 1;
        if (v == Verdict::yes) {
          hit[c] = i;
          return;
        }
      }
    });
    for (std::size_t c = 0; c < chunks; ++c) {
      if (out[c]) result.truncated = true;
      if (hit[c] != kNone) {
        result.word = level[hit[c]];
        return result;
      }
    }
  }
  return result;
}

std::vector<Word> reduced_words(const Generators& gens, std::size_t max_length) {
  std::vector<Word> all{Word{}};
  std::vector<Word> level{Word{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    level = next_level(level, gens);
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

PartialAction::PartialAction(std::shared_ptr<const HyperplaneSystem> hs, Generators gens,
                             std::vector<std::vector<VertexId>> maps, VertexId base)
    : hs_(std::move(hs)), gens_(std::move(gens)), maps_(std::move(maps)), base_(base) {
  const std::size_t n = graph().vertex_count();
  if (maps_.size() != gens_.size()) throw Error("one map per generator required");
  for (const auto& m : maps_) {
    if (m.size() != n) throw Error("generator map size does not match the graph");
    for (VertexId v : m)
      if (v != kNone && v >= n) throw Error("generator map points outside the graph");
  }
  if (base_ >= n) throw Error("base point outside the graph");

  std::vector<VertexId> outside;
  for (VertexId v = 0; v < n; ++v)
    for (const auto& m : maps_)
      if (m[v] == kNone) {
        outside.push_back(v);
        break;
      }
  if (outside.empty()) {
    margin_.assign(n, kUnbounded);
  } else {
    margin_ = graph().distances_from(std::span<const VertexId>(outside));
  }
}

ApplyResult PartialAction::apply(const Word& w, VertexId v) const {
  ApplyResult r{v, 0};
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    VertexId next = maps_[*it][r.vertex];
    if (next == kNone) {
      r.vertex = kNone;
      return r;
    }
    r.vertex = next;
    ++r.applied;
  }
  return r;
}

std::optional<Halfspace> PartialAction::apply(const Word& w, Halfspace h) const {
  const MedianGraph& g = graph();
  for (EdgeId e : hs_->edges_of(h.hyperplane)) {
    VertexId p = g.edge(e).u, q = g.edge(e).v;
    auto ip = apply(w, p);
    if (!ip.ok()) continue;
    auto iq = apply(w, q);
    if (!iq.ok()) continue;
    EdgeId image = g.edge_id(ip.vertex, iq.vertex);
    if (image == kNone) throw Error("action maps an edge to a non-edge");
    HyperplaneId target = hs_->hyperplane_of(image);
    VertexId inside = hs_->side_of(h.hyperplane, p) == h.side ? ip.vertex : iq.vertex;
    return Halfspace{target, hs_->side_of(target, inside)};
  }
  return std::nullopt;
}

std::optional<HyperplaneId> PartialAction::apply_hyperplane(const Word& w, HyperplaneId h) const {
  auto r = apply(w, Halfspace{h, 0});
  if (!r) return std::nullopt;
  return r->hyperplane;
}

std::optional<Halfspace> PartialAction::apply_generator(GenId s, Halfspace h) const {
  const MedianGraph& g = graph();
  for (EdgeId e : hs_->edges_of(h.hyperplane)) {
    VertexId p = g.edge(e).u, q = g.edge(e).v;
    VertexId ip = maps_[s][p], iq = maps_[s][q];
    if (ip == kNone || iq == kNone) continue;
    EdgeId image = g.edge_id(ip, iq);
    if (image == kNone) throw Error("action maps an edge to a non-edge");
    HyperplaneId target = hs_->hyperplane_of(image);
    VertexId inside = hs_->side_of(h.hyperplane, p) == h.side ? ip : iq;
    return Halfspace{target, hs_->side_of(target, inside)};
  }
  return std::nullopt;
}

std::uint32_t PartialAction::margin(VertexId v) const { return margin_[v]; }

std::uint32_t PartialAction::effective_radius() const {
  std::uint32_t m = margin_[base_];
  return m == kUnbounded ? kUnbounded : (m == 0 ? 0 : m - 1);
}

std::string PartialAction::to_text() const {
  const MedianGraph& g = graph();
  std::ostringstream out;
  for (const auto& [name, inv] : gens_.declarations()) out << "gen " << name << ' ' << inv << '\n';
  out << "base " << g.label(base_) << '\n';
  for (GenId s = 0; s < gens_.size(); ++s)
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (maps_[s][v] != kNone) out << "map " << gens_.name(s) << ' ' << g.label(v) << ' ' << g.label(maps_[s][v]) << '\n';
  return out.str();
}

std::string PartialAction::digest() const {
  std::uint64_t h = fnv1a(std::to_string(base_) + "\n");
  for (const auto& [name, inv] : gens_.declarations()) h = fnv1a(name + " " + inv + "\n", h);
  for (const auto& m : maps_)
    h = fnv1a(std::string_view(reinterpret_cast<const char*>(m.data()), m.size() * sizeof(VertexId)), h);
  return hex64(h);
}

namespace {

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(std::string("cannot open ") + what + " file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Fills an empty map from its partner by inversion.
void derive_inverse(const std::vector<VertexId>& from, std::vector<VertexId>& to, const std::string& name) {
  for (VertexId v = 0; v < from.size(); ++v) {
    if (from[v] == kNone) continue;
    if (to[from[v]] != kNone) throw Error("generator '" + name + "' is not injective");
    to[from[v]] = v;
  }
}

}  // namespace

PartialAction load_action(std::string_view text, std::shared_ptr<const HyperplaneSystem> hs) {
  const MedianGraph& g = hs->graph();
  const std::size_t n = g.vertex_count();
  GeneratorPairs decls;
  struct MapLine {
    std::size_t line;
    std::string gen;
    VertexId from, to;
  };
  std::vector<MapLine> lines;
  VertexId base = 0;
  bool have_base = false;

  auto vertex = [&](std::size_t line_no, const std::string& label) {
    auto v = g.find_vertex(label);
    if (!v) throw ParseError(line_no, "unknown vertex '" + label + "'");
    return *v;
  };
  std::istringstream in{std::string(text)};
  std::string line_text;
  std::size_t line_no = 0;
  while (std::getline(in, line_text)) {
    ++line_no;
    auto line = trim(line_text);
    if (line.empty() || line.front() == '#') continue;
    auto tok = split_ws(line);
    if (tok[0] == "gen") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'gen <name> <inverse-name>'");
      decls.emplace_back(tok[1], tok[2]);
    } else if (tok[0] == "map") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'map <name> <v> <w>'");
      lines.push_back({line_no, tok[1], vertex(line_no, tok[2]), vertex(line_no, tok[3])});
    } else if (tok[0] == "base") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'base <v>'");
      if (have_base) throw ParseError(line_no, "base declared twice");
      base = vertex(line_no, tok[1]);
      have_base = true;
    } else {
      throw ParseError(line_no, "unknown directive '" + tok[0] + "'");
    }
  }
  if (decls.empty()) throw Error("action declares no generators");
  Generators gens(decls);
  std::vector<std::vector<VertexId>> maps(gens.size(), std::vector<VertexId>(n, kNone));
  std::vector<std::uint8_t> given(gens.size(), 0);
  for (const auto& m : lines) {
    auto id = gens.find(m.gen);
    if (!id) throw ParseError(m.line, "unknown generator '" + m.gen + "'");
    if (maps[*id][m.from] != kNone) throw ParseError(m.line, "vertex mapped twice by '" + m.gen + "'");
    maps[*id][m.from] = m.to;
    given[*id] = 1;
  }
  for (GenId s = 0; s < gens.size(); ++s) {
    GenId t = gens.inverse(s);
    if (s != t && !given[t] && given[s]) derive_inverse(maps[s], maps[t], gens.name(s));
  }
  return PartialAction(std::move(hs), std::move(gens), std::move(maps), base);
}

PartialAction load_action_file(const std::string& path, std::shared_ptr<const HyperplaneSystem> hs) {
  return load_action(read_file(path, "action"), std::move(hs));
}

std::string ActionReport::text() const {
  std::ostringstream out;
  out << "action: " << (ok ? "OK" : "INVALID") << '\n';
  out << "effective radius: "
      << (effective_radius == kUnbounded ? std::string("unbounded") : std::to_string(effective_radius)) << '\n';
  for (const auto& p : problems) out << "problem: " << p << '\n';
  return out.str();
}

ActionReport validate_action(const PartialAction& a) {
  const MedianGraph& g = a.graph();
  const Generators& gens = a.generators();
  const std::size_t n = g.vertex_count();
  ActionReport r;
  auto problem = [&](std::string msg) {
    r.ok = false;
    if (r.problems.size() < 20) r.problems.push_back(std::move(msg));
  };
  for (GenId s = 0; s < gens.size(); ++s) {
    const auto& m = a.map(s);
    const auto& inv = a.map(gens.inverse(s));
    std::vector<std::uint8_t> hit(n, 0);
    for (VertexId v = 0; v < n; ++v) {
      if (m[v] == kNone) continue;
      if (hit[m[v]]++) problem("generator " + gens.name(s) + " is not injective at " + g.label(m[v]));
      if (inv[m[v]] != v)
        problem("generator " + gens.name(gens.inverse(s)) + " does not invert " + gens.name(s) + " at " +
                g.label(v));
    }
    for (const Edge& e : g.edges()) {
      if (m[e.u] == kNone || m[e.v] == kNone) continue;
      if (!g.adjacent(m[e.u], m[e.v]))
        problem("generator " + gens.name(s) + " maps edge " + g.label(e.u) + "-" + g.label(e.v) +
                " to a non-edge");
    }
  }
  r.effective_radius = a.effective_radius();
  return r;
}

void require_valid(const PartialAction& a) {
  auto r = validate_action(a);
  if (!r.ok) throw Error("invalid action: " + r.problems.front());
}

OrbitResult hyperplane_orbit(const PartialAction& a, Halfspace h, std::size_t max_length) {
  const Generators& gens = a.generators();
  OrbitResult r;
  std::unordered_map<std::uint32_t, std::size_t> seen;
  r.entries.push_back({h, Word{}});
  seen.emplace(h.index(), 0);
  std::size_t begin = 0, end = 1;
  for (std::size_t len = 1; len <= max_length && begin < end; ++len) {
    for (GenId s = 0; s < gens.size(); ++s)
      for (std::size_t i = begin; i < end; ++i) {
        const Word& w = r.entries[i].witness;
        if (!w.empty() && w.letters().front() == gens.inverse(s)) continue;
        auto img = a.apply_generator(s, r.entries[i].image);
        if (!img) {
          r.truncated = true;
          continue;
        }
        if (seen.emplace(img->index(), r.entries.size()).second) {
          std::vector<GenId> letters{s};
          letters.insert(letters.end(), w.letters().begin(), w.letters().end());
          r.entries.push_back({*img, Word(std::move(letters), gens)});
        }
      }
    begin = end;
    end = r.entries.size();
  }
  return r;
}

namespace {

WordSearch stabilizer_search(const PartialAction& a, Halfspace h, std::size_t max_length, bool setwise) {
  WordSearch r;
  auto words = reduced_words(a.generators(), max_length);
  std::vector<std::uint8_t> verdict(words.size(), 0);
  parallel_chunks(words.size(), 64, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      auto img = a.apply(words[i], h);
      if (!img) {
        verdict[i] = 2;
      } else if (*img == h || (setwise && img->hyperplane == h.hyperplane)) {
        verdict[i] = 1;
      }
    }
  });
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (verdict[i] == 2) r.truncated = true;
    if (verdict[i] == 1) r.words.push_back(words[i]);
  }
  r.degenerate = max_length > 0 && r.words.size() == words.size();
  return r;
}

}  // namespace

WordSearch stabilizer_words(const PartialAction& a, Halfspace h, std::size_t max_length) {
  return stabilizer_search(a, h, max_length, false);
}

WordSearch stabilizer_words_setwise(const PartialAction& a, Halfspace h, std::size_t max_length) {
  return stabilizer_search(a, h, max_length, true);
}

Found find_flipping(const PartialAction& a, Halfspace h, std::size_t max_length) {
  const auto& hs = a.hyperplanes();
  return first_word(a.generators(), max_length, [&](const Word& w) {
    auto img = a.apply(w, h);
    if (!img) return Verdict::out_of_domain;
    return hs.strict_subset(h.complement(), *img) ? Verdict::yes : Verdict::no;
  });
}

Found find_double_skewer(const PartialAction& a, Halfspace k, Halfspace h, std::size_t max_length) {
  const auto& hs = a.hyperplanes();
  if (!hs.subset(k, h))
    throw PreconditionError(to_string(k) + " is not contained in " + to_string(h));
  return first_word(a.generators(), max_length, [&](const Word& w) {
    auto img = a.apply(w, h);
    if (!img) return Verdict::out_of_domain;
    return hs.strict_subset(*img, k) ? Verdict::yes : Verdict::no;
  });
}

std::string EssentialityEvidence::text() const {
  std::ostringstream out;
  out << "essentiality evidence for " << to_string(halfspace) << " (finite-radius evidence only)\n";
  out << "orbit points: " << orbit_points << " (words up to length " << word_length << ")\n";
  out << "depth inside: " << depth_inside << "\ndepth outside: " << depth_outside << '\n';
  out << "target " << target << ": " << (reached() ? "reached" : "not reached") << '\n';
  if (truncated) out << "truncated: yes\n";
  return out.str();
}

EssentialityEvidence essentiality_evidence(const PartialAction& a, Halfspace h, std::uint32_t target,
                                           std::size_t max_length) {
  const auto& hs = a.hyperplanes();
  const MedianGraph& g = a.graph();
  EssentialityEvidence r;
  r.halfspace = h;
  r.target = target;
  r.word_length = max_length;
  auto carrier = hs.carrier(h.hyperplane);
  auto depth = g.distances_from(std::span<const VertexId>(carrier));

  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  std::vector<VertexId> orbit{a.base()};
  seen[a.base()] = 1;
  std::size_t begin = 0;
  for (std::size_t len = 0; len <= max_length; ++len) {
    std::size_t end = orbit.size();
    for (std::size_t i = begin; i < end; ++i) {
      VertexId v = orbit[i];
      auto& best = hs.contains(h, v) ? r.depth_inside : r.depth_outside;
      best = std::max(best, depth[v]);
      if (len == max_length) continue;
      for (GenId s = 0; s < a.generators().size(); ++s) {
        VertexId w = a.image(s, v);
        if (w == kNone) {
          r.truncated = true;
        } else if (!seen[w]) {
          seen[w] = 1;
          orbit.push_back(w);
        }
      }
    }
    begin = end;
  }
  r.orbit_points = orbit.size();
  return r;
}

FiniteQuotient::FiniteQuotient(const Generators& gens, std::vector<std::vector<std::uint32_t>> perms)
    : perms_(std::move(perms)) {
  if (perms_.size() != gens.size()) throw Error("one permutation per generator required");
  degree_ = perms_.empty() ? 1 : perms_.front().size();
  for (GenId s = 0; s < gens.size(); ++s) {
    const auto& p = perms_[s];
    const auto& q = perms_[gens.inverse(s)];
    if (p.size() != degree_) throw Error("permutations of different degrees");
    for (std::uint32_t x = 0; x < degree_; ++x)
      if (p[x] >= degree_ || q[p[x]] != x)
        throw Error("permutation of '" + gens.name(s) + "' does not match its inverse");
  }
}

std::uint32_t FiniteQuotient::image(const Word& w, std::uint32_t point) const {
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) point = perms_[*it][point];
  return point;
}

bool FiniteQuotient::is_identity(const Word& w) const {
  for (std::uint32_t x = 0; x < degree_; ++x)
    if (image(w, x) != x) return false;
  return true;
}

FiniteQuotient load_quotient(std::string_view text, const Generators& gens) {
  std::vector<std::vector<std::vector<std::uint32_t>>> cycles(gens.size());
  std::vector<std::uint8_t> given(gens.size(), 0);
  std::uint32_t degree = 1;
  std::istringstream in{std::string(text)};
  std::string line_text;
  std::size_t line_no = 0;
  while (std::getline(in, line_text)) {
    ++line_no;
    auto line = trim(line_text);
    if (line.empty() || line.front() == '#') continue;
    if (line.substr(0, 5) != "perm ") throw ParseError(line_no, "expected 'perm <name>: <cycles>'");
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "missing ':'");
    std::string name(trim(line.substr(5, colon - 5)));
    auto id = gens.find(name);
    if (!id) throw ParseError(line_no, "unknown generator '" + name + "'");
    if (given[*id]) throw ParseError(line_no, "permutation of '" + name + "' given twice");
    given[*id] = 1;
    std::string body(line.substr(colon + 1));
    std::size_t pos = 0;
    while (true) {
      pos = body.find_first_not_of(" \t", pos);
      if (pos == std::string::npos) break;
      if (body[pos] != '(') throw ParseError(line_no, "expected '(' in cycle notation");
      auto close = body.find(')', pos);
      if (close == std::string::npos) throw ParseError(line_no, "unclosed cycle");
      std::vector<std::uint32_t> cycle;
      for (const auto& t : split_ws(std::string_view(body).substr(pos + 1, close - pos - 1))) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
          v = std::stoul(t, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != t.size() || v > 1'000'000) throw ParseError(line_no, "bad point '" + t + "'");
        cycle.push_back(static_cast<std::uint32_t>(v));
        degree = std::max(degree, static_cast<std::uint32_t>(v) + 1);
      }
      cycles[*id].push_back(std::move(cycle));
      pos = close + 1;
    }
  }
  std::vector<std::vector<std::uint32_t>> perms(gens.size());
  for (GenId s = 0; s < gens.size(); ++s) {
    auto& p = perms[s];
    p.resize(degree);
    for (std::uint32_t x = 0; x < degree; ++x) p[x] = x;
    std::vector<std::uint8_t> moved(degree, 0);
    for (const auto& c : cycles[s])
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (moved[c[i]]++) throw Error("point " + std::to_string(c[i]) + " repeated in '" + gens.name(s) + "'");
        p[c[i]] = c[(i + 1) % c.size()];
      }
  }
  for (GenId s = 0; s < gens.size(); ++s) {
    GenId t = gens.inverse(s);
    if (s != t && given[s] && !given[t])
      for (std::uint32_t x = 0; x < degree; ++x) perms[t][perms[s][x]] = x;
  }
  return FiniteQuotient(gens, std::move(perms));
}

FiniteQuotient load_quotient_file(const std::string& path, const Generators& gens) {
  return load_quotient(read_file(path, "quotient"), gens);
}

}  // namespace cubekit
