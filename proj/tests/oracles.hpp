#pragma once

// Brute-force reference implementations. Deliberately naive: they share no
// code with the library beyond the graph container.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cubekit/median_graph.hpp"

namespace oracle {

using cubekit::MedianGraph;
using cubekit::VertexId;

inline std::vector<std::vector<std::uint32_t>> all_distances(const MedianGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, cubekit::kNone));
  for (VertexId s = 0; s < n; ++s) {
    std::vector<VertexId> queue{s};
    d[s][s] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (VertexId y : g.neighbors(queue[i]))
        if (d[s][y] == cubekit::kNone) {
          d[s][y] = d[s][queue[i]] + 1;
          queue.push_back(y);
        }
  }
  return d;
}

inline bool between(const std::vector<std::vector<std::uint32_t>>& d, VertexId u, VertexId m, VertexId v) {
  return d[u][m] + d[m][v] == d[u][v];
}

inline std::vector<VertexId> medians(const std::vector<std::vector<std::uint32_t>>& d, VertexId u, VertexId v,
                                     VertexId w) {
  std::vector<VertexId> out;
  for (VertexId m = 0; m < d.size(); ++m)
    if (between(d, u, m, v) && between(d, v, m, w) && between(d, u, m, w)) out.push_back(m);
  return out;
}

struct Triple {
  VertexId u, v, w;
  std::size_t count;
};

// First triple u < v < w (lexicographic) without a unique median.
inline std::optional<Triple> first_bad_triple(const MedianGraph& g) {
  auto d = all_distances(g);
  const auto n = static_cast<VertexId>(g.vertex_count());
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      for (VertexId w = v + 1; w < n; ++w) {
        auto m = medians(d, u, v, w);
        if (m.size() != 1) return Triple{u, v, w, m.size()};
      }
  return std::nullopt;
}

inline bool convex(const MedianGraph& g, const std::vector<VertexId>& s) {
  auto d = all_distances(g);
  std::set<VertexId> in(s.begin(), s.end());
  for (VertexId a : s)
    for (VertexId b : s)
      for (VertexId m = 0; m < g.vertex_count(); ++m)
        if (between(d, a, m, b) && !in.count(m)) return false;
  return true;
}

// Djokovic-Winkler classes: e = xy and f = uv are related iff
// d(x,u) + d(y,v) != d(x,v) + d(y,u). Returns a class index per edge,
// numbered by first edge.
inline std::vector<std::uint32_t> theta_classes(const MedianGraph& g) {
  auto d = all_distances(g);
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  std::vector<std::uint32_t> cls(m, cubekit::kNone);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (cls[i] != cubekit::kNone) continue;
    cls[i] = next;
    for (std::size_t j = i + 1; j < m; ++j) {
      auto [x, y] = std::pair{edges[i].u, edges[i].v};
      auto [u, v] = std::pair{edges[j].u, edges[j].v};
      if (d[x][u] + d[y][v] != d[x][v] + d[y][u]) cls[j] = next;
    }
    ++next;
  }
  return cls;
}

// Components of g after deleting the given edges.
inline std::size_t components_without(const MedianGraph& g, const std::set<std::pair<VertexId, VertexId>>& cut) {
  std::vector<int> seen(g.vertex_count(), 0);
  std::size_t count = 0;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::vector<VertexId> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (VertexId y : g.neighbors(x)) {
        if (seen[y] || cut.count({std::min(x, y), std::max(x, y)})) continue;
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  return count;
}

// Nearest members of s to v, all of them.
inline std::vector<VertexId> nearest(const std::vector<std::vector<std::uint32_t>>& d,
                                     const std::vector<VertexId>& s, VertexId v) {
  std::uint32_t best = cubekit::kNone;
  for (VertexId x : s) best = std::min(best, d[v][x]);
  std::vector<VertexId> out;
  for (VertexId x : s)
    if (d[v][x] == best) out.push_back(x);
  return out;
}

inline bool disjoint(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::set<VertexId> sa(a.begin(), a.end());
  return std::none_of(b.begin(), b.end(), [&](VertexId x) { return sa.count(x) > 0; });
}

inline bool subset(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::set<VertexId> sb(b.begin(), b.end());
  return std::all_of(a.begin(), a.end(), [&](VertexId x) { return sb.count(x) > 0; });
}

}  // namespace oracle
