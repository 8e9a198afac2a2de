#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cubekit/median_graph.hpp"

namespace cubekit {

// One side of a hyperplane. Side 0 ("A") is the side containing vertex 0.
struct Halfspace {
  HyperplaneId hyperplane = 0;
  std::uint8_t side = 0;

  Halfspace complement() const { return {hyperplane, static_cast<std::uint8_t>(side ^ 1)}; }
  std::uint32_t index() const { return 2 * hyperplane + side; }
  static Halfspace from_index(std::uint32_t i) { return {i / 2, static_cast<std::uint8_t>(i & 1)}; }

  friend bool operator==(const Halfspace&, const Halfspace&) = default;
  friend auto operator<=>(const Halfspace&, const Halfspace&) = default;
};

// "H5:A" / "H5:B".
std::string to_string(Halfspace h);
// Inverse of to_string; throws Error on anything else.
Halfspace parse_halfspace(std::string_view text);
// "H5" or "5".
HyperplaneId parse_hyperplane(std::string_view text);

// Hyperplanes of a validated median graph: the classes of the transitive
// closure of "opposite edges of a square". Classes are numbered by their
// smallest edge id. The system shares ownership of the graph.
class HyperplaneSystem {
 public:
  // Throws PreconditionError unless g.validated().
  explicit HyperplaneSystem(std::shared_ptr<const MedianGraph> g);
  explicit HyperplaneSystem(MedianGraph g);

  const MedianGraph& graph() const { return *graph_; }
  std::shared_ptr<const MedianGraph> graph_ptr() const { return graph_; }

  std::size_t count() const { return class_offsets_.size() - 1; }
  HyperplaneId hyperplane_of(EdgeId e) const { return edge_class_[e]; }
  std::span<const EdgeId> edges_of(HyperplaneId h) const {
    return {class_edges_.data() + class_offsets_[h], class_edges_.data() + class_offsets_[h + 1]};
  }
  // The edge of class h incident to v, or kNone.
  EdgeId dual_edge_at(HyperplaneId h, VertexId v) const;

  std::uint8_t side_of(HyperplaneId h, VertexId v) const;
  bool contains(Halfspace s, VertexId v) const { return side_of(s.hyperplane, v) == s.side; }
  std::size_t size(Halfspace s) const;
  std::vector<VertexId> vertices(Halfspace s) const;
  // Endpoints of the dual edges, sorted.
  std::vector<VertexId> carrier(HyperplaneId h) const;

  // Hyperplanes separating u from v, sorted; as many as d(u, v).
  std::vector<HyperplaneId> separating(VertexId u, VertexId v) const;
  std::uint32_t distance(VertexId u, VertexId v) const;

  bool crosses(HyperplaneId h1, HyperplaneId h2) const;
  std::span<const HyperplaneId> crossing(HyperplaneId h) const {
    return {cross_.data() + cross_offsets_[h], cross_.data() + cross_offsets_[h + 1]};
  }
  std::size_t crossing_pair_count() const { return cross_.size() / 2; }
  bool strongly_separated(HyperplaneId h1, HyperplaneId h2) const;

  // Side of h containing the hyperplane `other`; requires other != h and
  // the two not crossing.
  std::uint8_t side_containing(HyperplaneId h, HyperplaneId other) const;

  // Vertex-set relations, computed from the hyperplane combinatorics.
  bool disjoint(Halfspace a, Halfspace b) const;
  // Disjoint halfspaces of distinct hyperplanes.
  bool facing(Halfspace a, Halfspace b) const { return a.hyperplane != b.hyperplane && disjoint(a, b); }
  bool subset(Halfspace a, Halfspace b) const { return disjoint(a, b.complement()); }
  bool strict_subset(Halfspace a, Halfspace b) const { return a != b && subset(a, b); }

  // Number of hyperplanes separating the two carriers, plus one; 0 when the
  // hyperplanes coincide or cross.
  std::uint32_t hyperplane_distance(HyperplaneId h1, HyperplaneId h2) const;

  // One line per hyperplane: "H<id>: edges=u-v,... sideA={...} sideB={...}".
  // With brief set the sides are given as vertex counts.
  std::string report(bool brief = false) const;

 private:
  void build_classes();
  void build_sides();

  std::shared_ptr<const MedianGraph> graph_;
  std::vector<HyperplaneId> edge_class_;
  std::vector<std::uint32_t> class_offsets_;
  std::vector<EdgeId> class_edges_;
  std::vector<std::uint32_t> cross_offsets_;
  std::vector<HyperplaneId> cross_;

  // Trees: Euler-tour intervals of the BFS tree rooted at 0. A vertex lies on
  // side B of h iff it is in the subtree below h's edge.
  bool tree_ = false;
  std::vector<std::uint32_t> tin_, tout_, depth_;
  std::vector<VertexId> parent_, below_;

  // General graphs: for each vertex, the sorted hyperplanes separating it
  // from vertex 0 (exactly those for which it lies on side B).
  std::vector<std::uint64_t> sep_offsets_;
  std::vector<HyperplaneId> sep_;
  std::vector<std::uint32_t> side_b_size_;
};

struct ProjectionPair {
  EdgeId first = kNone;   // dual edge of h1
  EdgeId second = kNone;  // dual edge of h2
  VertexId first_gate = kNone;
  VertexId second_gate = kNone;
};

// The edges of h1 and h2 closest to each other. The gate image of carrier(h2)
// in carrier(h1) is a single vertex; `first` is the h1-edge at that vertex.
// Throws PreconditionError unless the hyperplanes are strongly separated.
ProjectionPair projection_pair(const HyperplaneSystem& hs, HyperplaneId h1, HyperplaneId h2);

// Pairwise facing k-tuples, each sorted by halfspace index, listed in
// lexicographic order. limit = 0 lists all.
std::vector<std::vector<Halfspace>> facing_tuples(const HyperplaneSystem& hs, unsigned k,
                                                  std::size_t limit = 0);

// The halfspaces of edges at v not containing v, in neighbor order, first
// three that pairwise face each other. Empty when v has none.
std::vector<Halfspace> facing_triple_at(const HyperplaneSystem& hs, VertexId v);

struct Decomposition {
  // Hyperplane ids per factor, sorted; factors ordered by smallest id.
  std::vector<std::vector<HyperplaneId>> factors;
  std::vector<MedianGraph> factor_graphs;
  // coordinates[v * r + i] = vertex of factor i that v maps to.
  std::vector<VertexId> coordinates;
  std::size_t rank() const { return factors.size(); }
};

Decomposition irreducible_decomposition(const HyperplaneSystem& hs);

// Checks that v -> coordinates is an isomorphism onto the product of the
// factor graphs: bijective, edge-preserving and with matching edge counts.
bool verify_product(const MedianGraph& g, const Decomposition& d);

}  // namespace cubekit
