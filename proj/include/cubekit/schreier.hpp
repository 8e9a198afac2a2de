#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubekit/action.hpp"

namespace cubekit {

// Orbit graph of an oriented hyperplane: node w^-1(h) stands for the coset
// Stab(h) w, and generator s joins x to s^-1(x). Nodes are in BFS order.
class SchreierGraph {
 public:
  Halfspace base() const { return nodes_.front(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t generator_count() const { return gens_.size(); }
  const Generators& generators() const { return gens_; }
  std::uint32_t radius() const { return radius_; }
  // Some node was cut off because a generator left the domain.
  bool truncated() const { return truncated_; }

  Halfspace node(std::uint32_t x) const { return nodes_[x]; }
  std::uint32_t depth(std::uint32_t x) const { return depth_[x]; }
  // kNone for the base node.
  std::uint32_t parent(std::uint32_t x) const { return parent_[x]; }
  // kNone when the edge was not explored.
  std::uint32_t neighbor(std::uint32_t x, GenId s) const { return adj_[x * gens_.size() + s]; }
  bool frontier(std::uint32_t x) const { return frontier_[x] != 0; }
  std::optional<std::uint32_t> find(Halfspace h) const;
  // Shortest w (length-lex first in BFS) with node x = w^-1(base).
  Word witness(std::uint32_t x) const;
  std::size_t interior_count() const;

  // Graph file text: one `v` line per node labelled by its halfspace, one
  // `e` line per adjacent pair, loops and frontier as comments.
  std::string to_text() const;

 private:
  friend SchreierGraph build_schreier(const PartialAction&, Halfspace, std::uint32_t);
  Generators gens_;
  std::vector<Halfspace> nodes_;
  std::vector<std::uint32_t> depth_, parent_;
  std::vector<GenId> parent_letter_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::uint8_t> frontier_;
  std::uint32_t radius_ = 0;
  bool truncated_ = false;
};

// Nodes at depth == radius, and nodes with an undefined generator image, are
// frontier; every other node has one edge per generator.
SchreierGraph build_schreier(const PartialAction& a, Halfspace h, std::uint32_t radius);

struct SpectralEstimate {
  std::uint32_t radius = 0;
  std::size_t interior = 0;
  double estimate = 0;   // ||P x|| for the final unit vector x
  std::size_t iterations = 0;
  double residual = 0;   // ||P^2 x - estimate^2 x||
  bool converged = false;
  std::string csv() const;
};

// Dirichlet spectral radius of the simple random walk restricted to interior
// nodes of depth < radius (default: the graph radius). Power iteration on P^2
// until the residual drops below tol. The estimate never exceeds the true
// Dirichlet value, which in turn bounds the walk norm on the full graph from
// below.
SpectralEstimate spectral_estimate(const SchreierGraph& sg, double tol = 1e-6,
                                   std::optional<std::uint32_t> radius = std::nullopt,
                                   std::size_t max_iterations = 100000);

struct SpectralSeries {
  std::vector<SpectralEstimate> points;
  bool monotone = true;
  std::string csv() const;  // header line plus one line per radius
};

// Estimates at radii first..last of the same graph, each warm-started from
// the previous eigenvector.
SpectralSeries spectral_series(const SchreierGraph& sg, std::uint32_t first, std::uint32_t last, double tol = 1e-6);

struct NodeDisplacement {
  std::uint32_t node = 0;
  std::uint32_t displacement = 0;  // least graph distance from x to x.u
  std::string word;                // u over g, G, h, H
};

struct FreeActionCertificate {
  std::size_t max_length = 0;
  std::size_t words = 0;        // nontrivial reduced words in g, h tested
  std::vector<NodeDisplacement> nodes;
  std::size_t skipped = 0;      // (node, word) pairs that ran into the frontier
  bool ok = false;
  std::string failure;
  std::string text(const SchreierGraph& sg) const;
};

// No nontrivial reduced word of length <= L in g, h fixes an interior node.
// Words act on the right: x.s is the s-neighbour of x. Throws BudgetExhausted
// when no node can be tested against every word.
FreeActionCertificate free_action_cert(const SchreierGraph& sg, const Word& g, const Word& h, std::size_t max_length);

// "stable: evidence level N" with N counting the channels that passed: the
// free-action certificate, and a monotone spectral series whose last value
// stays at most `ceiling`.
struct StabilityEvidence {
  bool free_action = false;
  bool spectral_gap = false;
  double last_estimate = 0;
  double ceiling = 0.95;
  int level() const { return static_cast<int>(free_action) + static_cast<int>(spectral_gap); }
  std::string text() const;
};

StabilityEvidence stability_evidence(const FreeActionCertificate* cert, const SpectralSeries& series,
                                     double ceiling = 0.95);

}  // namespace cubekit
