#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubekit/hyperplanes.hpp"
#include "cubekit/median_graph.hpp"

namespace cubekit {

using GenId = std::uint8_t;
// (name, inverse name) declarations.
using GeneratorPairs = std::vector<std::pair<std::string, std::string>>;

// Formal generators with an inverse involution. Declaration order defines
// the letter order used for length-lexicographic word enumeration.
class Generators {
 public:
  Generators() = default;
  // pairs[i] = (name, inverse name); a self-inverse generator repeats its name.
  explicit Generators(const GeneratorPairs& pairs);

  std::size_t size() const { return names_.size(); }
  const std::string& name(GenId g) const { return names_[g]; }
  GenId inverse(GenId g) const { return inverse_[g]; }
  std::optional<GenId> find(std::string_view name) const;
  bool single_char() const { return single_char_; }
  const GeneratorPairs& declarations() const { return pairs_; }

 private:
  GeneratorPairs pairs_;
  std::vector<std::string> names_;
  std::vector<GenId> inverse_;
  bool single_char_ = true;
};

// Freely reduced word g1 g2 ... gk, acting as g1 o g2 o ... o gk (gk first).
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<GenId> letters, const Generators& gens);

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<GenId>& letters() const { return letters_; }

  Word inverse(const Generators& gens) const;
  // this * other, reduced.
  Word times(const Word& other, const Generators& gens) const;
  Word power(long n, const Generators& gens) const;

  friend bool operator==(const Word&, const Word&) = default;
  // Length-lexicographic.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.letters_ < b.letters_;
  }

 private:
  std::vector<GenId> letters_;
};

// "()" for the identity; letters joined by '.' unless every name is one character.
std::string to_string(const Word& w, const Generators& gens);
// Accepts "()", "a.B.a" and, for one-character names, "aBa".
Word parse_word(std::string_view text, const Generators& gens);

// All reduced words of length <= max_length in length-lexicographic order.
std::vector<Word> reduced_words(const Generators& gens, std::size_t max_length);

struct ApplyResult {
  VertexId vertex = kNone;
  // Letters applied (from the right) before leaving the domain.
  std::size_t applied = 0;
  bool ok() const { return vertex != kNone; }
};

// Generators acting by partial injections on the vertices of a median graph.
class PartialAction {
 public:
  PartialAction(std::shared_ptr<const HyperplaneSystem> hs, Generators gens,
                std::vector<std::vector<VertexId>> maps, VertexId base);

  const HyperplaneSystem& hyperplanes() const { return *hs_; }
  std::shared_ptr<const HyperplaneSystem> hyperplanes_ptr() const { return hs_; }
  const MedianGraph& graph() const { return hs_->graph(); }
  const Generators& generators() const { return gens_; }
  VertexId base() const { return base_; }

  // kNone outside the domain.
  VertexId image(GenId g, VertexId v) const { return maps_[g][v]; }
  const std::vector<VertexId>& map(GenId g) const { return maps_[g]; }

  ApplyResult apply(const Word& w, VertexId v) const;
  // Image of a halfspace, read off the first edge of its class on which the
  // whole word is defined. nullopt when no such edge exists.
  std::optional<Halfspace> apply(const Word& w, Halfspace h) const;
  std::optional<HyperplaneId> apply_hyperplane(const Word& w, HyperplaneId h) const;
  std::optional<Halfspace> apply_generator(GenId g, Halfspace h) const;

  // Distance from v to the nearest vertex outside some generator's domain
  // (kUnbounded for total actions).
  std::uint32_t margin(VertexId v) const;
  // Largest r such that every generator is defined on the r-ball about the base.
  std::uint32_t effective_radius() const;

  std::string to_text() const;
  std::string digest() const;

 private:
  std::shared_ptr<const HyperplaneSystem> hs_;
  Generators gens_;
  std::vector<std::vector<VertexId>> maps_;
  VertexId base_;
  std::vector<std::uint32_t> margin_;
};

// Action file:
//   gen <name> <inverse-name>
//   map <name> <v> <w>
//   base <v>
// Labels refer to the graph. Maps of an inverse generator that has no map
// lines are derived by inverting its partner.
PartialAction load_action(std::string_view text, std::shared_ptr<const HyperplaneSystem> hs);
PartialAction load_action_file(const std::string& path, std::shared_ptr<const HyperplaneSystem> hs);

struct ActionReport {
  bool ok = true;
  std::vector<std::string> problems;
  std::uint32_t effective_radius = 0;
  std::string text() const;
};

// Injectivity, adjacency preservation and inverse compatibility.
ActionReport validate_action(const PartialAction& a);

// Throws Error with the first problem of validate_action.
void require_valid(const PartialAction& a);

struct OrbitEntry {
  Halfspace image;
  Word witness;
};

struct OrbitResult {
  std::vector<OrbitEntry> entries;  // in order of discovery, witnesses length-lex minimal
  bool truncated = false;           // some word left the domain
};

OrbitResult hyperplane_orbit(const PartialAction& a, Halfspace h, std::size_t max_length);

struct WordSearch {
  std::vector<Word> words;
  bool truncated = false;
  bool degenerate = false;  // every enumerated word qualified
};

// Reduced words w, |w| <= L, with w(h) = h (side-preserving).
WordSearch stabilizer_words(const PartialAction& a, Halfspace h, std::size_t max_length);
// Reduced words with w(h) in {h, h*}.
WordSearch stabilizer_words_setwise(const PartialAction& a, Halfspace h, std::size_t max_length);

struct Found {
  std::optional<Word> word;
  bool truncated = false;
};

enum class Verdict : std::uint8_t { no, yes, out_of_domain };

// First word of length 1..L in length-lex order with pred(w) == yes. Levels
// are scanned in parallel; the smallest hit wins regardless of scheduling.
Found first_word(const Generators& gens, std::size_t max_length, const std::function<Verdict(const Word&)>& pred);

// Shortest g with h* strictly inside g(h).
Found find_flipping(const PartialAction& a, Halfspace h, std::size_t max_length);
// Shortest g with g(h) strictly inside k; requires k inside h.
Found find_double_skewer(const PartialAction& a, Halfspace k, Halfspace h, std::size_t max_length);

struct EssentialityEvidence {
  Halfspace halfspace;
  std::uint32_t target = 0;
  std::uint32_t depth_inside = 0;      // deepest orbit point in h
  std::uint32_t depth_outside = 0;     // deepest orbit point in h*
  std::size_t orbit_points = 0;
  std::size_t word_length = 0;
  bool truncated = false;
  bool reached() const { return depth_inside >= target && depth_outside >= target; }
  std::string text() const;
};

// Orbit of the base point under words of length <= max_length; depth of a
// vertex is its distance to the carrier of the hyperplane.
EssentialityEvidence essentiality_evidence(const PartialAction& a, Halfspace h, std::uint32_t target,
                                           std::size_t max_length);

// Permutation representation used as a membership oracle.
class FiniteQuotient {
 public:
  FiniteQuotient(const Generators& gens, std::vector<std::vector<std::uint32_t>> perms);
  std::size_t degree() const { return degree_; }
  // Image of point 0 under the word (rightmost letter first).
  std::uint32_t image(const Word& w, std::uint32_t point = 0) const;
  bool fixes_marked_point(const Word& w) const { return image(w) == 0; }
  bool is_identity(const Word& w) const;

 private:
  std::vector<std::vector<std::uint32_t>> perms_;
  std::size_t degree_ = 0;
};

// Lines "perm <name>: (0 1)(2 3)"; the degree is one more than the largest
// point mentioned. Missing inverse permutations are derived.
FiniteQuotient load_quotient(std::string_view text, const Generators& gens);
FiniteQuotient load_quotient_file(const std::string& path, const Generators& gens);

}  // namespace cubekit
