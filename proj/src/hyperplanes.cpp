#include "cubekit/hyperplanes.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace cubekit {

std::string to_string(Halfspace h) {
  return "H" + std::to_string(h.hyperplane) + (h.side == 0 ? ":A" : ":B");
}

HyperplaneId parse_hyperplane(std::string_view text) {
  std::string_view digits = text.substr(!text.empty() && text[0] == 'H' ? 1 : 0);
  HyperplaneId id = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
  if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size())
    throw Error("bad hyperplane '" + std::string(text) + "'");
  return id;
}

Halfspace parse_halfspace(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 2 != text.size() || (text.back() != 'A' && text.back() != 'B'))
    throw Error("bad halfspace '" + std::string(text) + "' (expected H<id>:A or H<id>:B)");
  return {parse_hyperplane(text.substr(0, colon)), static_cast<std::uint8_t>(text.back() == 'B')};
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

struct Square {
  EdgeId xb, xc, cd, bd;
};

}  // namespace

HyperplaneSystem::HyperplaneSystem(MedianGraph g)
    : HyperplaneSystem(std::make_shared<const MedianGraph>(std::move(g))) {}

HyperplaneSystem::HyperplaneSystem(std::shared_ptr<const MedianGraph> g) : graph_(std::move(g)) {
  if (!graph_ || !graph_->validated())
    throw PreconditionError("hyperplanes need a validated median graph");
  build_classes();
  build_sides();
}

void HyperplaneSystem::build_classes() {
  const MedianGraph& g = *graph_;
  const std::size_t n = g.vertex_count();
  const std::size_t m = g.edge_count();

  // Every square is listed once, from its smallest corner x with neighbors b < c.
  constexpr std::size_t kChunk = 256;
  std::vector<std::vector<Square>> found((n + kChunk - 1) / kChunk);
  if (!g.is_tree()) {
    parallel_chunks(n, kChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      auto& out = found[chunk];
      for (VertexId x = static_cast<VertexId>(begin); x < end; ++x) {
        auto nx = g.neighbors(x);
        auto up = std::upper_bound(nx.begin(), nx.end(), x);
        for (auto ib = up; ib != nx.end(); ++ib) {
          for (auto ic = ib + 1; ic != nx.end(); ++ic) {
            auto nb = g.neighbors(*ib);
            auto nc = g.neighbors(*ic);
            auto i = std::upper_bound(nb.begin(), nb.end(), x);
            auto j = std::upper_bound(nc.begin(), nc.end(), x);
            while (i != nb.end() && j != nc.end()) {
              if (*i < *j) {
                ++i;
              } else if (*j < *i) {
                ++j;
              } else {
                VertexId d = *i;
                out.push_back({g.edge_id(x, *ib), g.edge_id(x, *ic), g.edge_id(*ic, d), g.edge_id(*ib, d)});
                ++i;
                ++j;
              }
            }
          }
        }
      }
    });
  }

  DisjointSets sets(m);
  for (const auto& chunk : found)
    for (const auto& s : chunk) {
      sets.unite(s.xb, s.cd);
      sets.unite(s.xc, s.bd);
    }

  edge_class_.assign(m, kNone);
  std::vector<HyperplaneId> root_class(m, kNone);
  HyperplaneId next = 0;
  for (EdgeId e = 0; e < m; ++e) {
    auto r = sets.find(e);
    if (root_class[r] == kNone) root_class[r] = next++;
    edge_class_[e] = root_class[r];
  }

  class_offsets_.assign(next + 1, 0);
  for (EdgeId e = 0; e < m; ++e) ++class_offsets_[edge_class_[e] + 1];
  for (HyperplaneId h = 0; h < next; ++h) class_offsets_[h + 1] += class_offsets_[h];
  class_edges_.resize(m);
  std::vector<std::uint32_t> fill(class_offsets_.begin(), class_offsets_.end() - 1);
  for (EdgeId e = 0; e < m; ++e) class_edges_[fill[edge_class_[e]]++] = e;

  std::vector<std::pair<HyperplaneId, HyperplaneId>> pairs;
  for (const auto& chunk : found)
    for (const auto& s : chunk) {
      HyperplaneId a = edge_class_[s.xb], b = edge_class_[s.xc];
      pairs.emplace_back(a, b);
      pairs.emplace_back(b, a);
    }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  cross_offsets_.assign(next + 1, 0);
  for (const auto& p : pairs) ++cross_offsets_[p.first + 1];
  for (HyperplaneId h = 0; h < next; ++h) cross_offsets_[h + 1] += cross_offsets_[h];
  cross_.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) cross_[i] = pairs[i].second;
}

void HyperplaneSystem::build_sides() {
  const MedianGraph& g = *graph_;
  const std::size_t n = g.vertex_count();
  tree_ = g.is_tree();

  parent_.assign(n, kNone);
  depth_.assign(n, 0);
  std::vector<VertexId> order;
  order.reserve(n);
  order.push_back(0);
  parent_[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    VertexId x = order[head];
    for (VertexId y : g.neighbors(x)) {
      if (parent_[y] == kNone) {
        parent_[y] = x;
        depth_[y] = depth_[x] + 1;
        order.push_back(y);
      }
    }
  }
  side_b_size_.assign(count(), 0);

  if (tree_) {
    below_.assign(count(), kNone);
    for (std::size_t i = 1; i < n; ++i) {
      VertexId v = order[i];
      below_[edge_class_[g.edge_id(v, parent_[v])]] = v;
    }
    // Iterative preorder; tout is one past the last descendant.
    tin_.assign(n, 0);
    tout_.assign(n, 0);
    std::vector<std::pair<VertexId, std::uint32_t>> stack{{0, 0}};
    std::uint32_t clock = 0;
    tin_[0] = clock++;
    while (!stack.empty()) {
      auto& [x, next] = stack.back();
      auto nx = g.neighbors(x);
      if (next < nx.size()) {
        VertexId y = nx[next++];
        if (y == parent_[x]) continue;
        tin_[y] = clock++;
        stack.emplace_back(y, 0);
      } else {
        tout_[x] = clock;
        stack.pop_back();
      }
    }
    for (HyperplaneId h = 0; h < count(); ++h) side_b_size_[h] = tout_[below_[h]] - tin_[below_[h]];
    return;
  }

  sep_offsets_.assign(n + 1, 0);
  for (VertexId v = 0; v < n; ++v) sep_offsets_[v + 1] = depth_[v];
  for (std::size_t v = 0; v < n; ++v) sep_offsets_[v + 1] += sep_offsets_[v];
  sep_.resize(sep_offsets_[n]);
  for (std::size_t i = 1; i < n; ++i) {
    VertexId v = order[i];
    VertexId p = parent_[v];
    HyperplaneId h = edge_class_[g.edge_id(v, p)];
    auto src_begin = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[p]);
    auto src_end = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[p + 1]);
    auto dst = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[v]);
    auto split = std::lower_bound(src_begin, src_end, h);
    dst = std::copy(src_begin, split, dst);
    *dst++ = h;
    std::copy(split, src_end, dst);
  }
  for (auto h : sep_) ++side_b_size_[h];
}

EdgeId HyperplaneSystem::dual_edge_at(HyperplaneId h, VertexId v) const {
  for (VertexId y : graph_->neighbors(v)) {
    EdgeId e = graph_->edge_id(v, y);
    if (edge_class_[e] == h) return e;
  }
  return kNone;
}

std::uint8_t HyperplaneSystem::side_of(HyperplaneId h, VertexId v) const {
  if (tree_) {
    VertexId b = below_[h];
    return tin_[b] <= tin_[v] && tin_[v] < tout_[b] ? 1 : 0;
  }
  auto begin = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[v]);
  auto end = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[v + 1]);
  return std::binary_search(begin, end, h) ? 1 : 0;
}

std::size_t HyperplaneSystem::size(Halfspace s) const {
  std::size_t b = side_b_size_[s.hyperplane];
  return s.side == 1 ? b : graph_->vertex_count() - b;
}

std::vector<VertexId> HyperplaneSystem::vertices(Halfspace s) const {
  std::vector<VertexId> out;
  out.reserve(size(s));
  for (VertexId v = 0; v < graph_->vertex_count(); ++v)
    if (contains(s, v)) out.push_back(v);
  return out;
}

std::vector<VertexId> HyperplaneSystem::carrier(HyperplaneId h) const {
  std::vector<VertexId> out;
  for (EdgeId e : edges_of(h)) {
    out.push_back(graph_->edge(e).u);
    out.push_back(graph_->edge(e).v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<HyperplaneId> HyperplaneSystem::separating(VertexId u, VertexId v) const {
  std::vector<HyperplaneId> out;
  if (tree_) {
    while (u != v) {
      if (depth_[u] < depth_[v]) std::swap(u, v);
      out.push_back(edge_class_[graph_->edge_id(u, parent_[u])]);
      u = parent_[u];
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  auto su = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[u]);
  auto eu = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[u + 1]);
  auto sv = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[v]);
  auto ev = sep_.begin() + static_cast<std::ptrdiff_t>(sep_offsets_[v + 1]);
  std::set_symmetric_difference(su, eu, sv, ev, std::back_inserter(out));
  return out;
}

std::uint32_t HyperplaneSystem::distance(VertexId u, VertexId v) const {
  if (tree_) {
    std::uint32_t d = 0;
    while (u != v) {
      if (depth_[u] < depth_[v]) std::swap(u, v);
      u = parent_[u];
      ++d;
    }
    return d;
  }
  return static_cast<std::uint32_t>(separating(u, v).size());
}

bool HyperplaneSystem::crosses(HyperplaneId h1, HyperplaneId h2) const {
  auto c = crossing(h1);
  return std::binary_search(c.begin(), c.end(), h2);
}

bool HyperplaneSystem::strongly_separated(HyperplaneId h1, HyperplaneId h2) const {
  if (h1 == h2 || crosses(h1, h2)) return false;
  auto a = crossing(h1);
  auto b = crossing(h2);
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return false;
    }
  }
  return true;
}

std::uint8_t HyperplaneSystem::side_containing(HyperplaneId h, HyperplaneId other) const {
  return side_of(h, graph_->edge(edges_of(other).front()).u);
}

bool HyperplaneSystem::disjoint(Halfspace a, Halfspace b) const {
  if (a.hyperplane == b.hyperplane) return a.side != b.side;
  if (crosses(a.hyperplane, b.hyperplane)) return false;
  return a.side != side_containing(a.hyperplane, b.hyperplane) &&
         b.side != side_containing(b.hyperplane, a.hyperplane);
}

std::uint32_t HyperplaneSystem::hyperplane_distance(HyperplaneId h1, HyperplaneId h2) const {
  if (h1 == h2 || crosses(h1, h2)) return 0;
  auto c1 = carrier(h1);
  auto c2 = carrier(h2);
  std::uint32_t best = kNone;
  if (c1.size() * c2.size() <= 256) {
    for (VertexId u : c1)
      for (VertexId v : c2) best = std::min(best, distance(u, v));
  } else {
    auto dist = graph_->distances_from(std::span<const VertexId>(c1));
    for (VertexId v : c2) best = std::min(best, dist[v]);
  }
  return best + 1;
}

std::string HyperplaneSystem::report(bool brief) const {
  const MedianGraph& g = *graph_;
  std::ostringstream out;
  auto list = [&](Halfspace s) {
    if (brief) {
      out << size(s);
      return;
    }
    out << '{';
    bool first = true;
    for (VertexId v : vertices(s)) {
      out << (first ? "" : ",") << g.label(v);
      first = false;
    }
    out << '}';
  };
  for (HyperplaneId h = 0; h < count(); ++h) {
    out << 'H' << h << ": edges=";
    bool first = true;
    for (EdgeId e : edges_of(h)) {
      out << (first ? "" : ",") << g.label(g.edge(e).u) << '-' << g.label(g.edge(e).v);
      first = false;
    }
    out << " sideA=";
    list({h, 0});
    out << " sideB=";
    list({h, 1});
    out << '\n';
  }
  return out.str();
}

ProjectionPair projection_pair(const HyperplaneSystem& hs, HyperplaneId h1, HyperplaneId h2) {
  if (!hs.strongly_separated(h1, h2))
    throw PreconditionError("H" + std::to_string(h1) + " and H" + std::to_string(h2) +
                            " are not strongly separated");
  const MedianGraph& g = hs.graph();
  auto image = [&](HyperplaneId onto, HyperplaneId from) {
    auto c_onto = hs.carrier(onto);
    auto gates = nearest_map(g, c_onto);
    VertexId x = kNone;
    for (VertexId v : hs.carrier(from)) {
      if (x == kNone) x = gates[v];
      if (gates[v] != x) throw Error("gate image of a carrier is not a single vertex");
    }
    return x;
  };
  ProjectionPair p;
  p.first_gate = image(h1, h2);
  p.second_gate = image(h2, h1);
  p.first = hs.dual_edge_at(h1, p.first_gate);
  p.second = hs.dual_edge_at(h2, p.second_gate);
  return p;
}

std::vector<std::vector<Halfspace>> facing_tuples(const HyperplaneSystem& hs, unsigned k,
                                                  std::size_t limit) {
  if (k < 2) throw PreconditionError("facing tuples need k >= 2");
  std::vector<std::vector<Halfspace>> out;
  const std::uint32_t total = static_cast<std::uint32_t>(2 * hs.count());
  const std::size_t n = hs.graph().vertex_count();
  std::vector<Halfspace> chosen;
  std::size_t used = 0;

  auto search = [&](auto&& self, std::uint32_t start) -> bool {
    if (chosen.size() == k) {
      out.push_back(chosen);
      return limit != 0 && out.size() >= limit;
    }
    for (std::uint32_t i = start; i < total; ++i) {
      Halfspace s = Halfspace::from_index(i);
      std::size_t sz = hs.size(s);
      if (used + sz > n) continue;
      bool ok = std::all_of(chosen.begin(), chosen.end(), [&](Halfspace c) { return hs.facing(c, s); });
      if (!ok) continue;
      chosen.push_back(s);
      used += sz;
      bool stop = self(self, i + 1);
      used -= sz;
      chosen.pop_back();
      if (stop) return true;
    }
    return false;
  };
  search(search, 0);
  return out;
}

std::vector<Halfspace> facing_triple_at(const HyperplaneSystem& hs, VertexId v) {
  const MedianGraph& g = hs.graph();
  std::vector<Halfspace> out;
  for (VertexId y : g.neighbors(v)) {
    HyperplaneId h = hs.hyperplane_of(g.edge_id(v, y));
    out.push_back({h, hs.side_of(h, y)});
  }
  const std::size_t d = out.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      if (!hs.facing(out[i], out[j])) continue;
      for (std::size_t l = j + 1; l < d; ++l)
        if (hs.facing(out[i], out[l]) && hs.facing(out[j], out[l])) return {out[i], out[j], out[l]};
    }
  return {};
}

Decomposition irreducible_decomposition(const HyperplaneSystem& hs) {
  const MedianGraph& g = hs.graph();
  const std::size_t n = g.vertex_count();
  const std::size_t count = hs.count();
  Decomposition d;

  // Components of the complement of the crossing graph.
  std::vector<HyperplaneId> unvisited(count);
  std::iota(unvisited.begin(), unvisited.end(), 0u);
  std::vector<std::uint32_t> factor_of(count, kNone);
  std::size_t cursor = 0;
  while (true) {
    while (cursor < unvisited.size() && factor_of[unvisited[cursor]] != kNone) ++cursor;
    if (cursor == unvisited.size()) break;
    auto id = static_cast<std::uint32_t>(d.factors.size());
    std::vector<HyperplaneId> members{unvisited[cursor]};
    factor_of[unvisited[cursor]] = id;
    std::vector<HyperplaneId> rest;
    for (std::size_t i = cursor + 1; i < unvisited.size(); ++i)
      if (factor_of[unvisited[i]] == kNone) rest.push_back(unvisited[i]);
    for (std::size_t head = 0; head < members.size(); ++head) {
      auto cross = hs.crossing(members[head]);
      std::vector<HyperplaneId> keep;
      for (HyperplaneId h : rest) {
        if (std::binary_search(cross.begin(), cross.end(), h)) {
          keep.push_back(h);
        } else {
          factor_of[h] = id;
          members.push_back(h);
        }
      }
      rest.swap(keep);
    }
    std::sort(members.begin(), members.end());
    d.factors.push_back(std::move(members));
    unvisited.swap(rest);
    cursor = 0;
  }

  const std::size_t r = d.factors.size();
  if (r <= 1) {
    d.factor_graphs.push_back(g);
    d.coordinates.resize(n);
    std::iota(d.coordinates.begin(), d.coordinates.end(), 0u);
    if (r == 0) d.factors.emplace_back();
    return d;
  }

  d.coordinates.assign(n * r, kNone);
  for (std::size_t i = 0; i < r; ++i) {
    // Factor i's vertices are the components left after deleting its edges.
    std::vector<VertexId> comp(n, kNone);
    VertexId next = 0;
    std::vector<VertexId> queue;
    for (VertexId s = 0; s < n; ++s) {
      if (comp[s] != kNone) continue;
      comp[s] = next;
      queue.assign(1, s);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        VertexId x = queue[head];
        for (VertexId y : g.neighbors(x)) {
          if (comp[y] != kNone || factor_of[hs.hyperplane_of(g.edge_id(x, y))] == i) continue;
          comp[y] = next;
          queue.push_back(y);
        }
      }
      ++next;
    }
    std::vector<Edge> edges;
    for (HyperplaneId h : d.factors[i])
      for (EdgeId e : hs.edges_of(h)) edges.push_back(make_edge(comp[g.edge(e).u], comp[g.edge(e).v]));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    d.factor_graphs.push_back(require_median(MedianGraph::from_edges(next, std::move(edges))));
    for (VertexId v = 0; v < n; ++v) d.coordinates[v * r + i] = comp[v];
  }
  return d;
}

bool verify_product(const MedianGraph& g, const Decomposition& d) {
  const std::size_t r = d.rank();
  const std::size_t n = g.vertex_count();
  if (r == 0 || d.factor_graphs.size() != r || d.coordinates.size() != n * r) return false;
  std::uint64_t product = 1;
  for (const auto& f : d.factor_graphs) {
    if (product > (std::uint64_t{1} << 40) / f.vertex_count()) return false;
    product *= f.vertex_count();
  }
  if (product != n) return false;

  std::vector<std::uint8_t> hit(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < r; ++i) {
      VertexId c = d.coordinates[v * r + i];
      if (c >= d.factor_graphs[i].vertex_count()) return false;
      index = index * d.factor_graphs[i].vertex_count() + c;
    }
    if (hit[index]++) return false;
  }

  std::uint64_t expected_edges = 0;
  for (std::size_t i = 0; i < r; ++i)
    expected_edges += d.factor_graphs[i].edge_count() * (n / d.factor_graphs[i].vertex_count());
  if (expected_edges != g.edge_count()) return false;

  for (const Edge& e : g.edges()) {
    std::size_t differing = 0;
    for (std::size_t i = 0; i < r; ++i) {
      VertexId a = d.coordinates[e.u * r + i];
      VertexId b = d.coordinates[e.v * r + i];
      if (a == b) continue;
      if (++differing > 1 || !d.factor_graphs[i].adjacent(a, b)) return false;
    }
    if (differing != 1) return false;
  }
  return true;
}

}  // namespace cubekit
