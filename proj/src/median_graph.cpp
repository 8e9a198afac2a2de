#include "cubekit/median_graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace cubekit {

class MedianValidator {
 public:
  static void mark(MedianGraph& g) { g.validated_ = true; }
};

MedianGraph MedianGraph::from_edges(std::size_t n, std::vector<Edge> edges,
                                    std::vector<std::string> labels) {
  if (n == 0) throw Error("graph has no vertices");
  if (n >= kNone) throw CapacityError("too many vertices");
  if (!labels.empty() && labels.size() != n) throw Error("label table size mismatch");
  for (auto& e : edges) {
    if (e.u == e.v) throw Error("loop edge at vertex " + std::to_string(e.u));
    if (e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto it = std::adjacent_find(edges.begin(), edges.end()); it != edges.end())
    throw Error("duplicate edge " + std::to_string(it->u) + " " + std::to_string(it->v));

  MedianGraph g;
  g.offsets_.assign(n + 1, 0);
  for (const auto& e : edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.resize(2 * edges.size());
  std::vector<std::uint32_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : edges) {
    g.adjacency_[fill[e.u]++] = e.v;
    g.adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v)
    std::sort(g.adjacency_.begin() + g.offsets_[v], g.adjacency_.begin() + g.offsets_[v + 1]);
  g.edge_start_.assign(n + 1, 0);
  for (const auto& e : edges) ++g.edge_start_[e.u + 1];
  for (std::size_t i = 0; i < n; ++i) g.edge_start_[i + 1] += g.edge_start_[i];
  g.edges_ = std::move(edges);

  auto dist = g.distances_from(VertexId{0});
  if (std::any_of(dist.begin(), dist.end(), [](auto d) { return d == kNone; }))
    throw Error("graph is disconnected");

  if (!labels.empty()) {
    g.label_index_.reserve(n);
    for (VertexId v = 0; v < n; ++v) {
      if (!g.label_index_.emplace(labels[v], v).second)
        throw Error("duplicate vertex label '" + labels[v] + "'");
    }
    g.labels_ = std::move(labels);
  }
  return g;
}

EdgeId MedianGraph::edge_id(VertexId u, VertexId v) const {
  if (u == v || u >= vertex_count() || v >= vertex_count()) return kNone;
  Edge key = make_edge(u, v);
  auto nb = neighbors(key.u);
  auto above = std::upper_bound(nb.begin(), nb.end(), key.u);
  auto it = std::lower_bound(above, nb.end(), key.v);
  if (it == nb.end() || *it != key.v) return kNone;
  return static_cast<EdgeId>(edge_start_[key.u] + (it - above));
}

std::string MedianGraph::label(VertexId v) const {
  return labels_.empty() ? std::to_string(v) : labels_[v];
}

std::optional<VertexId> MedianGraph::find_vertex(std::string_view label) const {
  if (!labels_.empty()) {
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
  }
  if (label.empty() || label.size() > 10) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : label) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  if (value >= vertex_count()) return std::nullopt;
  return static_cast<VertexId>(value);
}

std::vector<std::uint32_t> MedianGraph::distances_from(VertexId source) const {
  VertexId s[1] = {source};
  return distances_from(std::span<const VertexId>(s));
}

std::vector<std::uint32_t> MedianGraph::distances_from(std::span<const VertexId> sources) const {
  std::vector<std::uint32_t> dist(vertex_count(), kNone);
  std::vector<VertexId> queue;
  queue.reserve(vertex_count());
  for (VertexId s : sources) {
    if (dist[s] == kNone) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId x = queue[head];
    for (VertexId y : neighbors(x)) {
      if (dist[y] == kNone) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

std::string MedianGraph::to_text() const {
  std::ostringstream out;
  for (VertexId v = 0; v < vertex_count(); ++v) out << "v " << label(v) << '\n';
  for (const auto& e : edges_) out << "e " << label(e.u) << ' ' << label(e.v) << '\n';
  return out.str();
}

std::string MedianGraph::digest() const {
  std::uint64_t h = fnv1a(std::to_string(vertex_count()) + " " + std::to_string(edge_count()) + "\n");
  for (const auto& e : edges_) h = fnv1a(std::to_string(e.u) + " " + std::to_string(e.v) + "\n", h);
  return hex64(h);
}

MedianGraph load_graph(std::string_view text) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, VertexId> index;
  std::vector<Edge> edges;
  std::set<std::pair<VertexId, VertexId>> seen;
  auto intern = [&](const std::string& label) {
    auto [it, fresh] = index.emplace(label, static_cast<VertexId>(labels.size()));
    if (fresh) labels.push_back(label);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto tok = split_ws(line);
    if (tok[0] == "v") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'v <label>'");
      intern(tok[1]);
    } else if (tok[0] == "e") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'e <label> <label>'");
      if (tok[1] == tok[2]) throw ParseError(line_no, "loop edge at '" + tok[1] + "'");
      VertexId a = intern(tok[1]);
      VertexId b = intern(tok[2]);
      Edge e = make_edge(a, b);
      if (!seen.emplace(e.u, e.v).second)
        throw ParseError(line_no, "duplicate edge '" + tok[1] + "' '" + tok[2] + "'");
      edges.push_back(e);
    } else {
      throw ParseError(line_no, "unknown directive '" + tok[0] + "'");
    }
    if (end == text.size()) break;
  }
  const std::size_t n = labels.size();
  return MedianGraph::from_edges(n, std::move(edges), std::move(labels));
}

MedianGraph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

namespace {

// Dense all-pairs distances; fine for the desk-scale graphs median checks target.
std::vector<std::uint16_t> distance_matrix(const MedianGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 20000) throw CapacityError("median check limited to 20000 vertices");
  std::vector<std::uint16_t> d(n * n);
  parallel_chunks(n, 16, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      auto row = g.distances_from(static_cast<VertexId>(s));
      for (std::size_t t = 0; t < n; ++t) d[s * n + t] = static_cast<std::uint16_t>(row[t]);
    }
  });
  return d;
}

class IntervalTable {
 public:
  IntervalTable(const std::vector<std::uint16_t>& dist, std::size_t n)
      : dist_(dist), n_(n), words_((n + 63) / 64) {
    if (n_ <= 1500) {
      bits_.assign(n_ * n_ * words_, 0);
      parallel_chunks(n_, 8, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t x = b; x < e; ++x)
          for (std::size_t y = 0; y < n_; ++y) fill(x, y, bits_.data() + (x * n_ + y) * words_);
      });
    }
  }

  // Number of common members of I(u,v), I(v,w), I(u,w), capped at 2.
  std::size_t median_count(std::size_t u, std::size_t v, std::size_t w,
                           std::vector<std::uint64_t>& scratch) const {
    if (!bits_.empty()) {
      const auto* a = bits_.data() + (u * n_ + v) * words_;
      const auto* b = bits_.data() + (v * n_ + w) * words_;
      const auto* c = bits_.data() + (u * n_ + w) * words_;
      std::size_t count = 0;
      for (std::size_t i = 0; i < words_ && count < 2; ++i)
        count += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
      return std::min<std::size_t>(count, 2);
    }
    scratch.resize(words_);
    std::size_t count = 0;
    for (std::size_t m = 0; m < n_ && count < 2; ++m)
      if (on(u, m, v) && on(v, m, w) && on(u, m, w)) ++count;
    return count;
  }

 private:
  bool on(std::size_t x, std::size_t m, std::size_t y) const {
    return dist_[x * n_ + m] + dist_[m * n_ + y] == dist_[x * n_ + y];
  }
  void fill(std::size_t x, std::size_t y, std::uint64_t* out) const {
    for (std::size_t m = 0; m < n_; ++m)
      if (on(x, m, y)) out[m / 64] |= std::uint64_t{1} << (m % 64);
  }

  const std::vector<std::uint16_t>& dist_;
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace

std::optional<MedianViolation> find_median_violation(const MedianGraph& g) {
  const std::size_t n = g.vertex_count();
  if (g.is_tree() || n < 3) return std::nullopt;
  const auto dist = distance_matrix(g);
  const IntervalTable table(dist, n);

  // One slot per first vertex; the smallest u with a violation wins.
  std::vector<std::optional<MedianViolation>> first(n);
  parallel_chunks(n, 1, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<std::uint64_t> scratch;
    for (std::size_t u = b; u < e; ++u) {
      for (std::size_t v = u + 1; v < n && !first[u]; ++v) {
        for (std::size_t w = v + 1; w < n; ++w) {
          std::size_t c = table.median_count(u, v, w, scratch);
          if (c != 1) {
            first[u] = MedianViolation{static_cast<VertexId>(u), static_cast<VertexId>(v),
                                       static_cast<VertexId>(w), c};
            break;
          }
        }
      }
    }
  });
  for (auto& f : first)
    if (f) return f;
  return std::nullopt;
}

std::variant<MedianGraph, MedianViolation> check_median(MedianGraph g) {
  if (auto bad = find_median_violation(g)) return *bad;
  MedianValidator::mark(g);
  return g;
}

MedianGraph require_median(MedianGraph g) {
  auto result = check_median(std::move(g));
  if (auto* bad = std::get_if<MedianViolation>(&result)) {
    throw PreconditionError("not a median graph: triple (" + std::to_string(bad->u) + ", " +
                            std::to_string(bad->v) + ", " + std::to_string(bad->w) + ") has " +
                            std::to_string(bad->median_count) + " medians");
  }
  return std::get<MedianGraph>(std::move(result));
}

VertexId median(const MedianGraph& g, VertexId u, VertexId v, VertexId w) {
  if (!g.validated()) throw PreconditionError("median requires a validated graph");
  if (u == v || u == w) return u;
  if (v == w) return v;
  auto du = g.distances_from(u), dv = g.distances_from(v), dw = g.distances_from(w);
  for (VertexId m = 0; m < g.vertex_count(); ++m) {
    if (du[m] + dv[m] == du[v] && dv[m] + dw[m] == dv[w] && du[m] + dw[m] == du[w]) return m;
  }
  throw Error("validated graph without median");  // unreachable for median graphs
}

std::vector<VertexId> interval(const MedianGraph& g, VertexId u, VertexId v) {
  auto du = g.distances_from(u), dv = g.distances_from(v);
  std::vector<VertexId> out;
  for (VertexId m = 0; m < g.vertex_count(); ++m)
    if (du[m] + dv[m] == du[v]) out.push_back(m);
  return out;
}

bool is_convex(const MedianGraph& g, std::span<const VertexId> set) {
  const std::size_t n = g.vertex_count();
  std::vector<char> member(n, 0);
  for (VertexId v : set) member[v] = 1;
  std::vector<char> mark(n);
  std::vector<std::vector<VertexId>> layers;
  for (VertexId u : set) {
    auto dist = g.distances_from(u);
    layers.clear();
    for (VertexId x = 0; x < n; ++x) {
      if (dist[x] >= layers.size()) layers.resize(dist[x] + 1);
      layers[dist[x]].push_back(x);
    }
    std::fill(mark.begin(), mark.end(), 0);
    for (VertexId w : set) mark[w] = 1;
    // Walk back from the set towards u; marked vertices are the union of I(u, w).
    for (std::size_t d = layers.size(); d-- > 1;) {
      for (VertexId x : layers[d]) {
        if (!mark[x]) continue;
        if (!member[x]) return false;
        for (VertexId y : g.neighbors(x))
          if (dist[y] + 1 == d) mark[y] = 1;
      }
    }
  }
  return true;
}

std::vector<VertexId> nearest_map(const MedianGraph& g, std::span<const VertexId> set) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> dist(n, kNone);
  std::vector<VertexId> gate(n, kNone);
  std::vector<VertexId> queue;
  queue.reserve(n);
  for (VertexId s : set) {
    if (dist[s] == kNone) {
      dist[s] = 0;
      gate[s] = s;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId x = queue[head];
    for (VertexId y : g.neighbors(x)) {
      if (dist[y] == kNone) {
        dist[y] = dist[x] + 1;
        gate[y] = gate[x];
        queue.push_back(y);
      } else if (dist[y] == dist[x] + 1 && gate[y] != gate[x]) {
        throw PreconditionError("vertex " + g.label(y) + " has two nearest members");
      }
    }
  }
  return gate;
}

std::vector<VertexId> gate_map(const MedianGraph& g, std::span<const VertexId> set) {
  if (set.empty()) throw PreconditionError("gate onto an empty set");
  if (!is_convex(g, set)) throw PreconditionError("gate onto a non-convex set");
  return nearest_map(g, set);
}

VertexId gate(const MedianGraph& g, std::span<const VertexId> set, VertexId v) {
  return gate_map(g, set)[v];
}

ConvexSubset make_convex_subset(const MedianGraph& g, std::vector<VertexId> set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  ConvexSubset out;
  out.gates = gate_map(g, set);
  out.members = std::move(set);
  return out;
}

std::vector<std::vector<VertexId>> enumerate_cubes(const MedianGraph& g, unsigned dim) {
  std::vector<std::vector<VertexId>> cubes;
  const std::size_t n = g.vertex_count();
  if (dim == 0) {
    for (VertexId v = 0; v < n; ++v) cubes.push_back({v});
    return cubes;
  }
  if (dim > 20) throw CapacityError("cube dimension too large");
  const std::size_t corners = std::size_t{1} << dim;
  std::vector<VertexId> corner(corners);
  std::vector<unsigned> pick(dim);

  for (VertexId x = 0; x < n; ++x) {
    auto nb = g.neighbors(x);
    if (nb.size() < dim) continue;
    // Cubes are reported from their smallest corner, so only larger neighbours span them.
    std::vector<VertexId> up;
    for (VertexId y : nb)
      if (y > x) up.push_back(y);
    if (up.size() < dim) continue;
    for (unsigned i = 0; i < dim; ++i) pick[i] = i;
    while (true) {
      corner[0] = x;
      for (unsigned i = 0; i < dim; ++i) corner[std::size_t{1} << i] = up[pick[i]];
      bool ok = true;
      for (std::size_t t = 1; t < corners && ok; ++t) {
        if (std::popcount(t) < 2) continue;
        unsigned i = static_cast<unsigned>(std::countr_zero(t));
        std::size_t rest = t & (t - 1);
        unsigned j = static_cast<unsigned>(std::countr_zero(rest));
        VertexId a = corner[t ^ (std::size_t{1} << i)];
        VertexId b = corner[t ^ (std::size_t{1} << j)];
        VertexId skip = corner[t ^ (std::size_t{1} << i) ^ (std::size_t{1} << j)];
        VertexId found = kNone;
        auto na = g.neighbors(a), nbb = g.neighbors(b);
        std::size_t p = 0, q = 0, hits = 0;
        while (p < na.size() && q < nbb.size()) {
          if (na[p] < nbb[q]) ++p;
          else if (na[p] > nbb[q]) ++q;
          else {
            if (na[p] != skip) {
              found = na[p];
              ++hits;
            }
            ++p;
            ++q;
          }
        }
        if (hits != 1) {
          ok = false;
          break;
        }
        corner[t] = found;
        for (unsigned k = 0; k < dim && ok; ++k)
          if ((t >> k) & 1u) ok = g.adjacent(found, corner[t ^ (std::size_t{1} << k)]);
      }
      if (ok) {
        std::vector<VertexId> cube(corner.begin(), corner.end());
        std::sort(cube.begin(), cube.end());
        ok = std::adjacent_find(cube.begin(), cube.end()) == cube.end() && cube.front() == x;
        if (ok) {
          std::size_t induced = 0;
          for (std::size_t a = 0; a < cube.size(); ++a)
            for (std::size_t b = a + 1; b < cube.size(); ++b)
              if (g.adjacent(cube[a], cube[b])) ++induced;
          ok = induced == dim * (corners / 2);
        }
        if (ok) cubes.push_back(std::move(cube));
      }
      // next combination
      int k = static_cast<int>(dim) - 1;
      while (k >= 0 && pick[k] == up.size() - dim + static_cast<unsigned>(k)) --k;
      if (k < 0) break;
      ++pick[k];
      for (unsigned r = static_cast<unsigned>(k) + 1; r < dim; ++r) pick[r] = pick[r - 1] + 1;
    }
  }
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  return cubes;
}

}  // namespace cubekit
