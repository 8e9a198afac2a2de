#include "cubekit/fixtures.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace cubekit::fixtures {

MedianGraph hypercube(unsigned dim) {
  if (dim > 20) throw CapacityError("hypercube dimension above 20");
  const std::size_t n = std::size_t{1} << dim;
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < n; ++v) {
    std::string label(dim, '0');
    for (unsigned b = 0; b < dim; ++b)
      if (v >> b & 1) label[dim - 1 - b] = '1';
    labels.push_back(dim == 0 ? std::string("0") : label);
    for (unsigned b = 0; b < dim; ++b)
      if (!(v >> b & 1)) edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(v | (std::size_t{1} << b))});
  }
  return MedianGraph::from_edges(n, std::move(edges), std::move(labels));
}

MedianGraph path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
  return MedianGraph::from_edges(n, std::move(edges));
}

MedianGraph cycle(std::size_t n) {
  if (n < 3) throw Error("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    edges.push_back(make_edge(static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n)));
  return MedianGraph::from_edges(n, std::move(edges));
}

MedianGraph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j)});
  return MedianGraph::from_edges(n, std::move(edges));
}

MedianGraph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({0, static_cast<VertexId>(i)});
  return MedianGraph::from_edges(leaves + 1, std::move(edges));
}

MedianGraph product(const MedianGraph& g, const MedianGraph& h) {
  const std::size_t ng = g.vertex_count(), nh = h.vertex_count();
  if (ng * nh >= kNone) throw CapacityError("product too large");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count() * nh + h.edge_count() * ng);
  auto id = [&](std::size_t a, std::size_t b) { return static_cast<VertexId>(a * nh + b); };
  for (const Edge& e : g.edges())
    for (std::size_t b = 0; b < nh; ++b) edges.push_back(make_edge(id(e.u, b), id(e.v, b)));
  for (std::size_t a = 0; a < ng; ++a)
    for (const Edge& e : h.edges()) edges.push_back(make_edge(id(a, e.u), id(a, e.v)));
  return MedianGraph::from_edges(ng * nh, std::move(edges));
}

MedianGraph grid(std::size_t width, std::size_t height) { return product(path(width), path(height)); }

MedianGraph remove_vertex(const MedianGraph& g, VertexId v) {
  std::vector<Edge> edges;
  auto shift = [&](VertexId x) { return x > v ? x - 1 : x; };
  for (const Edge& e : g.edges())
    if (e.u != v && e.v != v) edges.push_back({shift(e.u), shift(e.v)});
  std::vector<std::string> labels;
  if (g.has_labels())
    for (VertexId x = 0; x < g.vertex_count(); ++x)
      if (x != v) labels.push_back(g.label(x));
  return MedianGraph::from_edges(g.vertex_count() - 1, std::move(edges), std::move(labels));
}

MedianGraph random_tree(std::size_t n, Rng& rng) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    edges.push_back({static_cast<VertexId>(pick(rng)), static_cast<VertexId>(i)});
  }
  return MedianGraph::from_edges(n, std::move(edges));
}

MedianGraph random_graph(std::size_t n, std::size_t extra, Rng& rng) {
  std::set<Edge> edges;
  auto tree = random_tree(n, rng);
  edges.insert(tree.edges().begin(), tree.edges().end());
  if (n >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < extra; ++i) {
      auto a = static_cast<VertexId>(pick(rng)), b = static_cast<VertexId>(pick(rng));
      if (a != b) edges.insert(make_edge(a, b));
    }
  }
  return MedianGraph::from_edges(n, {edges.begin(), edges.end()});
}

MedianGraph random_median(Rng& rng, std::size_t max_vertices, std::size_t max_walls) {
  std::uniform_int_distribution<std::size_t> ground_size(3, 8);
  std::uniform_int_distribution<std::size_t> wall_count(1, std::max<std::size_t>(max_walls, 1));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Wallspace w;
    const std::size_t p = ground_size(rng);
    for (std::size_t i = 0; i < p; ++i) w.points.push_back("p" + std::to_string(i));
    std::set<boost::dynamic_bitset<>> seen;
    const std::size_t k = wall_count(rng);
    for (std::size_t i = 0; i < k; ++i) {
      boost::dynamic_bitset<> part(p);
      for (std::size_t x = 0; x < p; ++x)
        if (rng() & 1) part.set(x);
      if (part.none() || part.all()) continue;
      if (!seen.insert(part.test(0) ? part : ~part).second) continue;
      w.wall_ids.push_back(std::to_string(i));
      w.parts.push_back(std::move(part));
    }
    if (w.parts.empty()) continue;
    auto dual = build_dual(w);
    if (dual.graph.vertex_count() <= max_vertices)
      return MedianGraph::from_edges(dual.graph.vertex_count(), {dual.graph.edges().begin(), dual.graph.edges().end()});
  }
  throw Error("could not draw a small random median graph");
}

Wallspace crossing_walls() {
  Wallspace w;
  w.points = {"p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7"};
  for (unsigned b = 0; b < 3; ++b) {
    boost::dynamic_bitset<> part(8);
    for (std::size_t x = 0; x < 8; ++x)
      if (x >> b & 1) part.set(x);
    w.wall_ids.push_back(std::to_string(b));
    w.parts.push_back(part);
  }
  return w;
}

Wallspace facing_walls() {
  Wallspace w;
  w.points = {"c", "x", "y", "z"};
  for (std::size_t leaf = 1; leaf <= 3; ++leaf) {
    boost::dynamic_bitset<> part(4);
    part.set(leaf);
    w.wall_ids.push_back(w.points[leaf]);
    w.parts.push_back(part);
  }
  return w;
}

std::shared_ptr<const HyperplaneSystem> hyperplanes_of(MedianGraph g) {
  return std::make_shared<const HyperplaneSystem>(require_median(std::move(g)));
}

namespace {

const GeneratorPairs kFreeGens{{"a", "A"}, {"b", "B"}};

struct FreeBall {
  std::vector<VertexId> parent;
  std::vector<GenId> last;                // letter leading from parent; 255 at the root
  std::vector<std::array<VertexId, 4>> child;  // kNone where the child is outside the ball
  std::vector<std::uint8_t> length;
};

FreeBall free_ball(unsigned radius, const Generators& gens) {
  FreeBall b;
  b.parent.push_back(0);
  b.last.push_back(255);
  b.child.push_back({kNone, kNone, kNone, kNone});
  b.length.push_back(0);
  for (std::size_t head = 0; head < b.parent.size(); ++head) {
    if (b.length[head] == radius) continue;
    for (GenId g = 0; g < 4; ++g) {
      if (head != 0 && g == gens.inverse(b.last[head])) continue;
      if (b.parent.size() >= kNone - 1) throw CapacityError("free group ball too large");
      auto id = static_cast<VertexId>(b.parent.size());
      b.child[head][g] = id;
      b.parent.push_back(static_cast<VertexId>(head));
      b.last.push_back(g);
      b.child.push_back({kNone, kNone, kNone, kNone});
      b.length.push_back(static_cast<std::uint8_t>(b.length[head] + 1));
    }
  }
  return b;
}

}  // namespace

PartialAction free_group_ball(unsigned radius) {
  if (radius > 16) throw CapacityError("free group ball radius above 16");
  Generators gens(kFreeGens);
  FreeBall b = free_ball(radius, gens);
  const std::size_t n = b.parent.size();

  // Right multiplication x -> x.l inside the ball.
  auto right = [&](VertexId x, GenId l) -> VertexId {
    if (x != 0 && l == gens.inverse(b.last[x])) return b.parent[x];
    return b.child[x][l];
  };
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (VertexId v = 1; v < n; ++v) edges.push_back({b.parent[v], v});

  std::vector<std::string> labels;
  if (radius <= 10) {
    labels.resize(n);
    labels[0] = "1";
    for (VertexId v = 1; v < n; ++v)
      labels[v] = (b.parent[v] == 0 ? std::string() : labels[b.parent[v]]) + gens.name(b.last[v]);
  }

  // g.w = (g.parent(w)).last(w).
  std::vector<std::vector<VertexId>> maps(4, std::vector<VertexId>(n, kNone));
  for (GenId g = 0; g < 4; ++g) {
    maps[g][0] = b.child[0][g];
    for (VertexId v = 1; v < n; ++v) {
      VertexId p = maps[g][b.parent[v]];
      maps[g][v] = p == kNone ? kNone : right(p, b.last[v]);
    }
  }
  b = FreeBall{};
  auto g = MedianGraph::from_edges(n, std::move(edges), std::move(labels));
  return PartialAction(hyperplanes_of(std::move(g)), std::move(gens), std::move(maps), 0);
}

std::vector<Word> free_group_words(const PartialAction& a) {
  const MedianGraph& g = a.graph();
  const auto& gens = a.generators();
  std::vector<Word> words(g.vertex_count());
  auto dist = g.distances_from(VertexId{0});
  std::vector<VertexId> order(g.vertex_count());
  for (VertexId v = 0; v < order.size(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](VertexId x, VertexId y) { return dist[x] < dist[y]; });
  for (VertexId v : order) {
    if (v == 0) continue;
    for (VertexId p : g.neighbors(v)) {
      if (dist[p] + 1 != dist[v]) continue;
      for (GenId l = 0; l < gens.size(); ++l) {
        // v = p.l  iff  v = (p) right-multiplied by l; test on the ball.
        Word candidate = words[p].times(Word({l}, gens), gens);
        if (candidate.length() != dist[v]) continue;
        if (a.apply(candidate, VertexId{0}).vertex == v) {
          words[v] = candidate;
          break;
        }
      }
    }
  }
  return words;
}

PartialAction integer_path(unsigned radius) {
  const std::size_t n = 2 * std::size_t{radius} + 1;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(static_cast<long>(i) - static_cast<long>(radius)));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
  Generators gens(GeneratorPairs{{"t", "T"}});
  std::vector<std::vector<VertexId>> maps(2, std::vector<VertexId>(n, kNone));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    maps[0][i] = static_cast<VertexId>(i + 1);
    maps[1][i + 1] = static_cast<VertexId>(i);
  }
  auto g = MedianGraph::from_edges(n, std::move(edges), std::move(labels));
  return PartialAction(hyperplanes_of(std::move(g)), std::move(gens), std::move(maps), radius);
}

PartialAction integer_grid(std::size_t width, std::size_t height) {
  auto g = grid(width, height);
  const std::size_t n = width * height;
  Generators gens(GeneratorPairs{{"x", "X"}, {"y", "Y"}});
  std::vector<std::vector<VertexId>> maps(4, std::vector<VertexId>(n, kNone));
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<VertexId>(i * height + j); };
  for (std::size_t i = 0; i < width; ++i)
    for (std::size_t j = 0; j < height; ++j) {
      if (i + 1 < width) maps[0][id(i, j)] = id(i + 1, j);
      if (i > 0) maps[1][id(i, j)] = id(i - 1, j);
      if (j + 1 < height) maps[2][id(i, j)] = id(i, j + 1);
      if (j > 0) maps[3][id(i, j)] = id(i, j - 1);
    }
  return PartialAction(hyperplanes_of(std::move(g)), std::move(gens), std::move(maps), id(width / 2, height / 2));
}

PartialAction trivial_action(MedianGraph g, const GeneratorPairs& decls) {
  Generators gens(decls);
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> identity(n);
  for (VertexId v = 0; v < n; ++v) identity[v] = v;
  std::vector<std::vector<VertexId>> maps(gens.size(), identity);
  return PartialAction(hyperplanes_of(std::move(g)), std::move(gens), std::move(maps), 0);
}

PartialAction free_group_times_integer(unsigned radius, unsigned path_radius) {
  auto f = free_group_ball(radius);
  auto z = integer_path(path_radius);
  const std::size_t nf = f.graph().vertex_count(), nz = z.graph().vertex_count();
  auto g = product(f.graph(), z.graph());
  Generators gens(GeneratorPairs{{"a", "A"}, {"b", "B"}, {"t", "T"}});
  std::vector<std::vector<VertexId>> maps(6, std::vector<VertexId>(nf * nz, kNone));
  for (std::size_t x = 0; x < nf; ++x)
    for (std::size_t y = 0; y < nz; ++y) {
      auto v = x * nz + y;
      for (GenId s = 0; s < 4; ++s)
        if (f.image(s, static_cast<VertexId>(x)) != kNone)
          maps[s][v] = static_cast<VertexId>(f.image(s, static_cast<VertexId>(x)) * nz + y);
      for (GenId s = 0; s < 2; ++s)
        if (z.image(s, static_cast<VertexId>(y)) != kNone)
          maps[4 + s][v] = static_cast<VertexId>(x * nz + z.image(s, static_cast<VertexId>(y)));
    }
  return PartialAction(hyperplanes_of(std::move(g)), std::move(gens), std::move(maps),
                       static_cast<VertexId>(z.base()));
}

FiniteQuotient sign_quotient(const Generators& gens) {
  std::vector<std::vector<std::uint32_t>> perms(gens.size(), std::vector<std::uint32_t>{1, 0});
  return FiniteQuotient(gens, std::move(perms));
}

}  // namespace cubekit::fixtures
