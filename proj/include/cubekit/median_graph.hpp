#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cubekit/common.hpp"

namespace cubekit {

// Undirected edge, always stored with u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// The 1-skeleton of a cube complex. Vertices are dense ids in [0, n); adjacency
// is stored as sorted CSR lists and edges are indexed in lexicographic order.
// The graph is immutable once built; `validated()` is set only by check_median.
class MedianGraph {
 public:
  MedianGraph() = default;

  // Throws Error on loops, repeated edges or a disconnected result. Labels
  // are optional; without them a vertex is labelled by its decimal id.
  static MedianGraph from_edges(std::size_t vertex_count, std::vector<Edge> edges,
                                std::vector<std::string> labels = {});

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  // kNone when u and v are not adjacent.
  EdgeId edge_id(VertexId u, VertexId v) const;
  bool adjacent(VertexId u, VertexId v) const { return edge_id(u, v) != kNone; }

  bool has_labels() const { return !labels_.empty(); }
  std::string label(VertexId v) const;
  std::optional<VertexId> find_vertex(std::string_view label) const;

  bool validated() const { return validated_; }
  bool is_tree() const { return edges_.size() + 1 == vertex_count(); }

  std::vector<std::uint32_t> distances_from(VertexId source) const;
  // Multi-source BFS distances.
  std::vector<std::uint32_t> distances_from(std::span<const VertexId> sources) const;

  // Graph file rendering (labels in id order, edges in id order).
  std::string to_text() const;
  // Digest of the label-free structure; stable across relabelling.
  std::string digest() const;

 private:
  friend class MedianValidator;

  std::vector<std::uint32_t> offsets_;
  std::vector<VertexId> adjacency_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> edge_start_;  // first edge id with smaller endpoint v
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> label_index_;
  bool validated_ = false;
};

// Parses the line-oriented graph format:
//   # comment
//   v <label>
//   e <label> <label>
// Ids are assigned in first-appearance order.
MedianGraph load_graph(std::string_view text);
MedianGraph load_graph_file(const std::string& path);

// A triple whose intervals meet in zero or several vertices.
struct MedianViolation {
  VertexId u = 0, v = 0, w = 0;
  std::size_t median_count = 0;
  friend bool operator==(const MedianViolation&, const MedianViolation&) = default;
};

// First violating triple u < v < w in lexicographic order, if any.
std::optional<MedianViolation> find_median_violation(const MedianGraph& g);

// Either the graph marked as validated or the lexicographically first
// counterexample triple.
std::variant<MedianGraph, MedianViolation> check_median(MedianGraph g);

// check_median, throwing PreconditionError with the counterexample.
MedianGraph require_median(MedianGraph g);

VertexId median(const MedianGraph& g, VertexId u, VertexId v, VertexId w);

// Members of the interval I(u, v), sorted.
std::vector<VertexId> interval(const MedianGraph& g, VertexId u, VertexId v);

bool is_convex(const MedianGraph& g, std::span<const VertexId> set);

// Nearest member of a convex set for every vertex of g. Throws
// PreconditionError when the set is empty or some vertex has two nearest members.
std::vector<VertexId> gate_map(const MedianGraph& g, std::span<const VertexId> set);
VertexId gate(const MedianGraph& g, std::span<const VertexId> set, VertexId v);
// gate_map without the convexity test, for sets convex by construction
// (halfspaces, carriers). Still throws when a nearest member is not unique.
std::vector<VertexId> nearest_map(const MedianGraph& g, std::span<const VertexId> set);

struct ConvexSubset {
  std::vector<VertexId> members;  // sorted
  std::vector<VertexId> gates;    // indexed by vertex
};
// Throws PreconditionError when `set` is not convex.
ConvexSubset make_convex_subset(const MedianGraph& g, std::vector<VertexId> set);

// Induced subgraphs isomorphic to Q_dim, each as a sorted vertex list, the
// list itself sorted lexicographically.
std::vector<std::vector<VertexId>> enumerate_cubes(const MedianGraph& g, unsigned dim);

}  // namespace cubekit
