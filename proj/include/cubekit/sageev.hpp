#pragma once

#include <boost/dynamic_bitset.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "cubekit/hyperplanes.hpp"
#include "cubekit/median_graph.hpp"

namespace cubekit {

// A finite ground set with bipartitions. Each wall stores its first part as a
// bitset over the points; the second part is the complement.
struct Wallspace {
  std::vector<std::string> points;
  std::vector<std::string> wall_ids;
  std::vector<boost::dynamic_bitset<>> parts;

  std::size_t wall_count() const { return parts.size(); }
  // Throws Error on empty parts, size mismatches or repeated walls.
  void validate() const;
  std::string to_text() const;
};

// Format:
//   p <label>
//   w <id>: <labels...> | <labels...>
// Points may also be introduced by their first use inside a wall.
Wallspace load_wallspace(std::string_view text);
Wallspace load_wallspace_file(const std::string& path);

// Ground = vertices, one wall per hyperplane with side A first.
Wallspace wallspace_of(const HyperplaneSystem& hs);

inline constexpr std::size_t kDefaultMaxWalls = 24;

struct DualComplex {
  MedianGraph graph;
  // Per vertex: bit i set when the second part of wall i is chosen. Sorted.
  std::vector<std::uint64_t> orientations;
};

// Vertices are the orientations whose chosen parts pairwise intersect; edges
// join orientations differing on one wall. The graph is not marked
// validated. Throws CapacityError above max_walls (at most 64).
DualComplex build_dual(const Wallspace& w, std::size_t max_walls = kDefaultMaxWalls);

struct RoundtripResult {
  bool ok = false;
  // iso[v] = vertex of the dual graph corresponding to v.
  std::vector<VertexId> iso;
  std::string message;
};

// Rebuilds the graph from its own hyperplanes and checks the natural map
// v -> (side of v for every hyperplane) is an isomorphism.
RoundtripResult roundtrip_check(const HyperplaneSystem& hs);

}  // namespace cubekit
