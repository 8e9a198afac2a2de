#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubekit/action.hpp"
#include "cubekit/hyperplanes.hpp"

namespace cubekit {

enum class FactorKind { line, candidate_rank1, bounded };

std::string to_string(FactorKind k);

struct FactorClassification {
  FactorKind kind = FactorKind::bounded;
  std::vector<std::string> evidence;
};

// Line: the factor is a path with at least two hyperplanes. Bounded: at most
// one hyperplane, or no facing pair. Candidate rank one: a facing triple of
// pairwise strongly separated halfspaces. A factor with facing pairs but no
// such triple is reported bounded with that evidence. Throws
// PreconditionError on reducible input. Evidence names hyperplane h as
// H<names[h]> when names is given.
FactorClassification classify_factor(const HyperplaneSystem& hs, const PartialAction* a = nullptr,
                                     const std::vector<HyperplaneId>* names = nullptr);

struct FactorReport {
  std::vector<HyperplaneId> hyperplanes;  // ids in the input complex
  std::size_t vertices = 0;
  FactorClassification classification;
  // Restricted action: nullopt without an action; false when some generator
  // mixes this factor with the others.
  std::optional<bool> action_commutes;
};

struct DecompositionReport {
  std::size_t r = 0;
  std::size_t k = 0;        // line factors
  std::size_t m = 0;        // candidate rank-one factors
  std::size_t bounded = 0;
  std::vector<FactorReport> factors;
  bool product_verified = false;
  std::string text() const;
  std::string json() const;
};

// Restriction of a to factor i of d, or nullopt when some generator does not
// act coordinatewise on that factor.
std::optional<PartialAction> restrict_to_factor(const PartialAction& a, const Decomposition& d, std::size_t i);

DecompositionReport theorem_b_shape(std::shared_ptr<const HyperplaneSystem> hs, const PartialAction* a = nullptr);

}  // namespace cubekit
