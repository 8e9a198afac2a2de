#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <string>
#include <vector>

#include "cubekit/action.hpp"
#include "cubekit/hyperplanes.hpp"

namespace cubekit {

// Stabilizer data for a base hyperplane and a strongly separated test
// halfspace k. sigma holds the side-preserving stabilizer words h with
// h(k) meeting k; a_orbit is the orbit of k under the group they generate.
struct SigmaData {
  HyperplaneId base = kNone;
  Halfspace test;
  std::vector<Word> sigma;
  std::vector<Halfspace> a_orbit;
  // Dual edge of the base hyperplane nearest the test hyperplane.
  Edge fixed_edge{};
  bool fixes_p = true;        // every sigma word fixes both ends of fixed_edge
  bool orbit_closed = true;   // a_orbit closed up within the budget
  bool separea = true;        // no stabilizer word outside <sigma> moves U onto itself
  std::vector<Word> unresolved;  // stabilizer words meeting U whose membership was not settled
  std::size_t stabilizer_words = 0;
  bool truncated = false;

  bool inconclusive() const { return truncated || !orbit_closed || !unresolved.empty(); }
  std::string text(const Generators& gens) const;
};

SigmaData sigma_analysis(const PartialAction& a, HyperplaneId base, Halfspace test, std::size_t max_length);

enum class LocusKind { none, vertex, edge, square };

struct FixedLocus {
  LocusKind kind = LocusKind::none;
  std::vector<VertexId> vertices;
  std::string method;
  std::optional<Word> gamma;  // translate used by the projection method
  bool found() const { return kind != LocusKind::none; }
  std::string text(const MedianGraph& g) const;
};

// Common fixed vertex, edge or square of the words. With a hint hyperplane
// preserved by every word, first looks for gamma (|gamma| <= orbit_length)
// with gamma(hint) strongly separated from hint and also preserved, and
// returns the hint edge nearest gamma(hint).
FixedLocus elliptic_fixed_point(const PartialAction& a, const std::vector<Word>& words, std::size_t orbit_length,
                                std::optional<HyperplaneId> hint = std::nullopt);

// Transport of a strongly separated nested pair b1 < b2 into the members of
// a facing quadruple: member j receives transport[j](b1).
struct Transport {
  Halfspace a1, a2;       // strongly separated, a1 inside a2
  Word skewer;            // x with b = x(a)
  Halfspace b1, b2;       // inside the complement of quadruple[claim]
  int claim = 0;          // 0-based index of that member
  int landing = 0;        // member receiving y(b1)
  std::array<Word, 4> words;
  std::array<Halfspace, 4> images;
};

struct QuadrupleResult {
  std::array<Halfspace, 3> triple;
  Word flip;
  std::array<Halfspace, 4> initial;
  Word g0, h0;  // g0(h2*) < h1 and h0(h4*) < h3 on the initial quadruple
  std::optional<Transport> refinement;
  std::array<Halfspace, 4> quadruple;
  Word g, h;    // the same skewers for the final quadruple
  std::vector<std::string> steps;
  std::string text(const Generators& gens) const;
};

// Facing quadruple h1, h2, k(h1), k(h2) from a facing triple (h, h1, h2)
// and a flip k of h, refined to pairwise strongly separated halfspaces.
// Throws BudgetExhausted naming the step that ran out of words.
QuadrupleResult build_quadruple(const PartialAction& a, const std::array<Halfspace, 3>& triple,
                                std::size_t max_length);

// The refinement on its own: always transports a nested pair, even when the
// quadruple is already strongly separated.
Transport refine_quadruple(const PartialAction& a, const std::array<Halfspace, 4>& quad, const Word& g,
                           const Word& h, std::size_t max_length);

// Pairwise facing and pairwise strongly separated.
bool strongly_separated_quadruple(const HyperplaneSystem& hs, const std::array<Halfspace, 4>& quad);

struct PowerCheck {
  char word = 'g';  // g, G, h or H
  long power = 0;
  Halfspace source;
  std::optional<Halfspace> image;
  int target = -1;            // 0-based quadruple member containing the image
  std::uint32_t distance = 0;  // from the image to the complement of that member
};

struct PingPongCertificate {
  std::string graph_digest, action_digest;
  std::array<Halfspace, 4> quadruple;
  Word g, h;
  long m_max = 0;
  std::vector<PowerCheck> checks;
  std::uint32_t delta = 0;
  bool truncated = false;  // some power left the domain
  bool ok = false;
  std::string failure;
  std::string text(const Generators& gens) const;
};

// g^n(V) inside U and h^n(U) inside V for 0 < |n| <= m_max, with
// U = h1 u h2 and V = h3 u h4. delta is the largest integer with
// d(x^m(S), complement of the receiving member) >= m * delta over every
// tested power. Never throws on a failed inclusion: ok is false and
// failure names it.
PingPongCertificate pingpong_certify(const PartialAction& a, const std::array<Halfspace, 4>& quad, const Word& g,
                                     const Word& h, long m_max);

struct DisplacementCheck {
  Word word;             // over a's generators
  std::string f_word;    // over g, G, h, H
  std::optional<HyperplaneId> image;
  std::uint32_t distance = 0;
};

struct StableCertificate {
  std::string graph_digest, action_digest;
  HyperplaneId hyperplane = kNone;
  std::array<Halfspace, 4> quadruple;
  Word g, h;
  long m_max = 0;
  std::size_t sample_length = 0;
  std::vector<DisplacementCheck> checks;
  std::size_t out_of_domain = 0;
  bool ok = false;
  std::string failure;
  bool vacuous() const { return checks.empty(); }
  std::string text(const Generators& gens) const;
};

// Every nontrivial reduced word in g, h with zero exponent sums whose
// expansion has at most sample_length letters moves the hyperplane off
// itself (image distinct and not crossing).
StableCertificate stable_certify(const PartialAction& a, HyperplaneId hyperplane, const PingPongCertificate& cert,
                                 std::size_t sample_length);

// Certificates are text blocks starting with "cubekit-certificate v1".
// Lines "source <role> <path>" name input files and are not part of the
// checked body.
inline constexpr std::string_view kCertificateTag = "cubekit-certificate v1";

std::vector<std::pair<std::string, std::string>> certificate_sources(std::string_view text);

struct VerifyResult {
  bool ok = false;
  std::string kind;
  std::string message;  // first failing check when !ok
};

// Recomputes the certificate from its echoed inputs and the action and
// compares byte for byte. Throws ParseError on malformed certificates.
VerifyResult verify_certificate(std::string_view text, const PartialAction& a);

struct SeparatedTranslate {
  QuadrupleResult construction;
  Halfspace companion;  // l, facing h and strongly separated from it
  Word skewer;          // x(h*) < l
  long n0 = 0;
  Word translate;       // x^n0
  HyperplaneId image = kNone;
  std::string text(const Generators& gens) const;
};

// Some power x^n0 in the kernel of q moves h to a strongly separated
// hyperplane; x is a double skewer into the companion l of the free-group
// construction. nullopt when no triple, flip, skewer or power is found.
std::optional<SeparatedTranslate> find_separated_translate(const PartialAction& a, Halfspace h,
                                                           const FiniteQuotient& q, std::size_t max_length);

// Facing triple (h, h1, h2), with h1 < h2 by index, among hyperplanes whose
// carriers lie within `reach` of the carrier of h.
std::optional<std::array<Halfspace, 3>> facing_triple_with(const HyperplaneSystem& hs, Halfspace h,
                                                           std::uint32_t reach = 2);

}  // namespace cubekit
