#include "cubekit/sageev.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cubekit {

void Wallspace::validate() const {
  const std::size_t n = points.size();
  if (wall_ids.size() != parts.size()) throw Error("wall id table size mismatch");
  std::set<boost::dynamic_bitset<>> seen;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (p.size() != n) throw Error("wall " + wall_ids[i] + " does not cover the ground set");
    if (p.none() || p.all()) throw Error("wall " + wall_ids[i] + " has an empty part");
    // Store each wall once, oriented so that point 0 is in the first part.
    auto key = p.test(0) ? p : ~p;
    if (!seen.insert(key).second) throw Error("wall " + wall_ids[i] + " repeats an earlier wall");
  }
}

std::string Wallspace::to_text() const {
  std::ostringstream out;
  for (const auto& p : points) out << "p " << p << '\n';
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out << "w " << wall_ids[i] << ':';
    for (std::size_t x = 0; x < points.size(); ++x)
      if (parts[i].test(x)) out << ' ' << points[x];
    out << " |";
    for (std::size_t x = 0; x < points.size(); ++x)
      if (!parts[i].test(x)) out << ' ' << points[x];
    out << '\n';
  }
  return out.str();
}

Wallspace load_wallspace(std::string_view text) {
  Wallspace w;
  std::unordered_map<std::string, std::uint32_t> index;
  auto intern = [&](const std::string& label) {
    auto [it, fresh] = index.emplace(label, static_cast<std::uint32_t>(w.points.size()));
    if (fresh) w.points.push_back(label);
    return it->second;
  };
  struct RawWall {
    std::size_t line;
    std::vector<std::uint32_t> first, second;
  };
  std::vector<RawWall> raw;

  std::istringstream in{std::string(text)};
  std::string line_text;
  std::size_t line_no = 0;
  while (std::getline(in, line_text)) {
    ++line_no;
    auto line = trim(line_text);
    if (line.empty() || line.front() == '#') continue;
    auto tok = split_ws(line);
    if (tok[0] == "p") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'p <label>'");
      intern(tok[1]);
    } else if (tok[0] == "w") {
      if (tok.size() < 2) throw ParseError(line_no, "expected 'w <id>: <labels> | <labels>'");
      std::size_t i = 1;
      std::string id = tok[i++];
      if (id.back() == ':') {
        id.pop_back();
      } else if (i < tok.size() && tok[i] == ":") {
        ++i;
      } else {
        throw ParseError(line_no, "missing ':' after wall id");
      }
      if (id.empty()) throw ParseError(line_no, "empty wall id");
      RawWall rw{line_no, {}, {}};
      bool second = false;
      for (; i < tok.size(); ++i) {
        if (tok[i] == "|") {
          if (second) throw ParseError(line_no, "more than one '|'");
          second = true;
          continue;
        }
        (second ? rw.second : rw.first).push_back(intern(tok[i]));
      }
      if (!second) throw ParseError(line_no, "missing '|'");
      w.wall_ids.push_back(id);
      raw.push_back(std::move(rw));
    } else {
      throw ParseError(line_no, "unknown directive '" + tok[0] + "'");
    }
  }
  if (w.points.empty()) throw Error("wallspace has no points");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    boost::dynamic_bitset<> first(w.points.size()), second(w.points.size());
    for (auto x : raw[i].first) first.set(x);
    for (auto x : raw[i].second) second.set(x);
    if (first.intersects(second))
      throw ParseError(raw[i].line, "wall " + w.wall_ids[i] + " puts a point on both sides");
    if ((first | second).count() != w.points.size())
      throw ParseError(raw[i].line, "wall " + w.wall_ids[i] + " misses some points");
    w.parts.push_back(std::move(first));
  }
  w.validate();
  return w;
}

Wallspace load_wallspace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open wallspace file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_wallspace(buf.str());
}

Wallspace wallspace_of(const HyperplaneSystem& hs) {
  const MedianGraph& g = hs.graph();
  Wallspace w;
  for (VertexId v = 0; v < g.vertex_count(); ++v) w.points.push_back(g.label(v));
  for (HyperplaneId h = 0; h < hs.count(); ++h) {
    boost::dynamic_bitset<> part(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (hs.side_of(h, v) == 0) part.set(v);
    w.wall_ids.push_back("H" + std::to_string(h));
    w.parts.push_back(std::move(part));
  }
  return w;
}

DualComplex build_dual(const Wallspace& w, std::size_t max_walls) {
  w.validate();
  const std::size_t k = w.wall_count();
  if (k > std::min<std::size_t>(max_walls, 64))
    throw CapacityError("wallspace has " + std::to_string(k) + " walls; limit is " +
                        std::to_string(std::min<std::size_t>(max_walls, 64)));

  // Most balanced walls last: lopsided walls constrain the search earliest.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto imbalance = [&](std::size_t i) {
    auto a = w.parts[i].count();
    auto b = w.points.size() - a;
    return a > b ? a - b : b - a;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return imbalance(x) > imbalance(y); });

  std::vector<boost::dynamic_bitset<>> complements;
  for (const auto& p : w.parts) complements.push_back(~p);
  auto part = [&](std::size_t wall, int side) -> const boost::dynamic_bitset<>& {
    return side == 0 ? w.parts[wall] : complements[wall];
  };

  std::vector<std::uint64_t> found;
  std::vector<int> choice(k, 0);
  auto search = [&](auto&& self, std::size_t depth, std::uint64_t bits) -> void {
    if (depth == k) {
      found.push_back(bits);
      return;
    }
    std::size_t wall = order[depth];
    for (int side = 0; side < 2; ++side) {
      const auto& p = part(wall, side);
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) ok = p.intersects(part(order[d], choice[order[d]]));
      if (!ok) continue;
      choice[wall] = side;
      self(self, depth + 1, side ? bits | (std::uint64_t{1} << wall) : bits);
    }
  };
  search(search, 0, 0);
  std::sort(found.begin(), found.end());
  if (found.size() >= kNone) throw CapacityError("dual complex too large");

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < found.size(); ++i)
    for (std::size_t b = 0; b < k; ++b) {
      std::uint64_t other = found[i] ^ (std::uint64_t{1} << b);
      if (other < found[i]) continue;
      auto it = std::lower_bound(found.begin(), found.end(), other);
      if (it != found.end() && *it == other)
        edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(it - found.begin())});
    }
  std::vector<std::string> labels;
  for (auto bits : found) {
    std::string s(k, 'A');
    for (std::size_t b = 0; b < k; ++b)
      if (bits >> b & 1) s[b] = 'B';
    labels.push_back(k == 0 ? std::string("-") : s);
  }
  DualComplex out;
  out.graph = MedianGraph::from_edges(found.size(), std::move(edges), std::move(labels));
  out.orientations = std::move(found);
  return out;
}

RoundtripResult roundtrip_check(const HyperplaneSystem& hs) {
  const MedianGraph& g = hs.graph();
  RoundtripResult r;
  auto dual = build_dual(wallspace_of(hs), std::max<std::size_t>(hs.count(), 1));
  if (dual.graph.vertex_count() != g.vertex_count() || dual.graph.edge_count() != g.edge_count()) {
    r.message = "dual has " + std::to_string(dual.graph.vertex_count()) + " vertices and " +
                std::to_string(dual.graph.edge_count()) + " edges";
    return r;
  }
  r.iso.resize(g.vertex_count());
  std::vector<std::uint8_t> used(g.vertex_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    std::uint64_t bits = 0;
    for (HyperplaneId h = 0; h < hs.count(); ++h)
      if (hs.side_of(h, v)) bits |= std::uint64_t{1} << h;
    auto it = std::lower_bound(dual.orientations.begin(), dual.orientations.end(), bits);
    if (it == dual.orientations.end() || *it != bits) {
      r.message = "vertex " + g.label(v) + " has no dual orientation";
      return r;
    }
    auto image = static_cast<VertexId>(it - dual.orientations.begin());
    if (used[image]++) {
      r.message = "two vertices share orientation " + dual.graph.label(image);
      return r;
    }
    r.iso[v] = image;
  }
  for (const Edge& e : g.edges()) {
    if (!dual.graph.adjacent(r.iso[e.u], r.iso[e.v])) {
      r.message = "edge " + g.label(e.u) + "-" + g.label(e.v) + " is not preserved";
      return r;
    }
  }
  r.ok = true;
  return r;
}

}  // namespace cubekit
