#include <algorithm>
#include <map>
#include <sstream>

#include "cubekit/schottky.hpp"

namespace cubekit {

namespace {

std::string power_name(char base, long m) { return std::string(1, base) + "^" + std::to_string(m); }

std::string quad_string(const std::array<Halfspace, 4>& q) {
  std::string out;
  for (const Halfspace& h : q) out += (out.empty() ? "" : " ") + to_string(h);
  return out;
}

void header(std::ostringstream& out, const char* kind, const std::string& graph, const std::string& action) {
  out << kCertificateTag << "\n";
  out << "kind " << kind << "\n";
  out << "graph " << graph << "\n";
  out << "action " << action << "\n";
}

}  // namespace

std::string PingPongCertificate::text(const Generators& gens) const {
  std::ostringstream out;
  header(out, "pingpong", graph_digest, action_digest);
  out << "quadruple " << quad_string(quadruple) << "\n";
  out << "g " << to_string(g, gens) << "\n";
  out << "h " << to_string(h, gens) << "\n";
  out << "m_max " << m_max << "\n";
  for (const PowerCheck& c : checks) {
    out << "check " << power_name(c.word, c.power) << " " << to_string(c.source) << " -> ";
    if (!c.image) {
      out << "out-of-domain\n";
      continue;
    }
    out << to_string(*c.image);
    if (c.target >= 0)
      out << " in " << to_string(quadruple[c.target]) << " distance " << c.distance;
    out << "\n";
  }
  out << "truncated " << (truncated ? "yes" : "no") << "\n";
  out << "delta " << delta << "\n";
  out << "result " << (ok ? "ok" : "refuted: " + failure) << "\n";
  return out.str();
}

PingPongCertificate pingpong_certify(const PartialAction& a, const std::array<Halfspace, 4>& quad, const Word& g,
                                     const Word& h, long m_max) {
  const auto& hs = a.hyperplanes();
  const auto& gens = a.generators();
  if (m_max < 1) throw PreconditionError("m_max must be at least 1");
  for (const Halfspace& q : quad)
    if (q.hyperplane >= hs.count()) throw PreconditionError("hyperplane out of range");

  PingPongCertificate c;
  c.graph_digest = a.graph().digest();
  c.action_digest = a.digest();
  c.quadruple = quad;
  c.g = g;
  c.h = h;
  c.m_max = m_max;

  for (int i = 0; i < 4 && c.failure.empty(); ++i)
    for (int j = i + 1; j < 4 && c.failure.empty(); ++j) {
      if (!hs.facing(quad[i], quad[j]))
        c.failure = to_string(quad[i]) + " and " + to_string(quad[j]) + " do not face each other";
      else if (!hs.strongly_separated(quad[i].hyperplane, quad[j].hyperplane))
        c.failure = to_string(quad[i]) + " and " + to_string(quad[j]) + " are not strongly separated";
    }
  if (!c.failure.empty()) return c;

  // Distance to the complement of each member.
  std::array<std::vector<std::uint32_t>, 4> dist;
  for (int j = 0; j < 4; ++j) {
    auto outside = hs.vertices(quad[j].complement());
    dist[j] = a.graph().distances_from(outside);
  }

  bool measured = false;
  std::uint32_t delta = kNone;
  for (int which = 0; which < 2; ++which) {
    const Word& x = which == 0 ? g : h;
    const char name = which == 0 ? 'g' : 'h';
    // g sends V = quad[2] u quad[3] into U = quad[0] u quad[1]; h the reverse.
    const int src = which == 0 ? 2 : 0, dst = which == 0 ? 0 : 2;
    for (long m = 1; m <= m_max; ++m)
      for (long sign : {1L, -1L}) {
        const Word xm = x.power(sign * m, gens);
        for (int s = src; s < src + 2; ++s) {
          PowerCheck pc;
          pc.word = name;
          pc.power = sign * m;
          pc.source = quad[s];
          pc.image = a.apply(xm, quad[s]);
          if (!pc.image) {
            c.truncated = true;
            c.checks.push_back(pc);
            continue;
          }
          for (int t = dst; t < dst + 2; ++t)
            if (hs.subset(*pc.image, quad[t])) pc.target = t;
          if (pc.target < 0) {
            c.checks.push_back(pc);
            c.failure = power_name(name, pc.power) + "(" + to_string(quad[s]) + ") = " + to_string(*pc.image) +
                        " is not inside " + (dst == 0 ? "U" : "V");
            return c;
          }
          std::uint32_t d = kNone;
          for (VertexId v : hs.vertices(*pc.image)) d = std::min(d, dist[pc.target][v]);
          pc.distance = d;
          delta = std::min(delta, d / static_cast<std::uint32_t>(m));
          measured = true;
          c.checks.push_back(pc);
        }
      }
  }
  if (!measured) {
    c.failure = "no tested power stays in the domain";
    return c;
  }
  c.delta = delta;
  if (c.delta < 1) {
    c.failure = "displacement margin is zero";
    return c;
  }
  c.ok = true;
  return c;
}

std::string StableCertificate::text(const Generators& gens) const {
  std::ostringstream out;
  header(out, "stable", graph_digest, action_digest);
  out << "hyperplane H" << hyperplane << "\n";
  out << "quadruple " << quad_string(quadruple) << "\n";
  out << "g " << to_string(g, gens) << "\n";
  out << "h " << to_string(h, gens) << "\n";
  out << "m_max " << m_max << "\n";
  out << "sample_length " << sample_length << "\n";
  for (const DisplacementCheck& c : checks) {
    out << "word " << c.f_word << " = " << to_string(c.word, gens) << " -> ";
    if (c.image)
      out << "H" << *c.image << " distance " << c.distance << "\n";
    else
      out << "out-of-domain\n";
  }
  out << "out_of_domain " << out_of_domain << "\n";
  out << "vacuous " << (vacuous() ? "yes" : "no") << "\n";
  out << "result " << (ok ? "ok" : "refuted: " + failure) << "\n";
  return out.str();
}

StableCertificate stable_certify(const PartialAction& a, HyperplaneId hyperplane, const PingPongCertificate& cert,
                                 std::size_t sample_length) {
  const auto& hs = a.hyperplanes();
  const auto& gens = a.generators();
  if (!cert.ok) throw PreconditionError("ping-pong certificate is not valid");
  if (hyperplane >= hs.count()) throw PreconditionError("hyperplane out of range");
  for (const Halfspace& q : cert.quadruple) {
    bool away = q.hyperplane != hyperplane && (hs.subset(q, {hyperplane, 0}) || hs.subset(q, {hyperplane, 1}));
    if (!away) throw PreconditionError("H" + std::to_string(hyperplane) + " meets " + to_string(q));
  }

  StableCertificate s;
  s.graph_digest = cert.graph_digest;
  s.action_digest = cert.action_digest;
  s.hyperplane = hyperplane;
  s.quadruple = cert.quadruple;
  s.g = cert.g;
  s.h = cert.h;
  s.m_max = cert.m_max;
  s.sample_length = sample_length;

  const Generators f(GeneratorPairs{{"g", "G"}, {"h", "H"}});
  const std::array<Word, 4> letters{cert.g, cert.g.inverse(gens), cert.h, cert.h.inverse(gens)};
  const std::size_t shortest = std::max<std::size_t>(1, std::min(cert.g.length(), cert.h.length()));
  for (const Word& w : reduced_words(f, sample_length / shortest)) {
    if (w.empty()) continue;
    long eg = 0, eh = 0;
    std::size_t expanded = 0;
    Word x;
    for (GenId l : w.letters()) {
      (l < 2 ? eg : eh) += (l % 2 == 0) ? 1 : -1;
      expanded += letters[l].length();
      x = x.times(letters[l], gens);
    }
    if (eg != 0 || eh != 0 || expanded > sample_length) continue;
    DisplacementCheck dc;
    dc.word = x;
    dc.f_word = to_string(w, f);
    dc.image = a.apply_hyperplane(x, hyperplane);
    if (!dc.image) {
      ++s.out_of_domain;
    } else {
      if ((*dc.image == hyperplane || hs.crosses(hyperplane, *dc.image)) && s.failure.empty())
        s.failure = dc.f_word + " maps H" + std::to_string(hyperplane) + " to H" + std::to_string(*dc.image) +
                    ", which meets it";
      dc.distance = hs.hyperplane_distance(hyperplane, *dc.image);
    }
    s.checks.push_back(std::move(dc));
  }
  s.ok = s.failure.empty();
  return s;
}

namespace {

std::vector<std::string> body_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("source ", 0) != 0) out.push_back(line);
  return out;
}

Halfspace parse_halfspace(const std::string& s, std::size_t line) {
  auto colon = s.find(':');
  if (s.size() < 4 || s[0] != 'H' || colon == std::string::npos || colon + 2 != s.size() ||
      (s.back() != 'A' && s.back() != 'B'))
    throw ParseError(line, "bad halfspace '" + s + "'");
  try {
    return {static_cast<HyperplaneId>(std::stoul(s.substr(1, colon - 1))),
            static_cast<std::uint8_t>(s.back() == 'B')};
  } catch (const std::exception&) {
    throw ParseError(line, "bad halfspace '" + s + "'");
  }
}

long parse_number(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "bad number '" + s + "'");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> certificate_sources(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("source ", 0) != 0) continue;
    auto tok = split_ws(line);
    if (tok.size() == 3) out.emplace_back(tok[1], tok[2]);
  }
  return out;
}

VerifyResult verify_certificate(std::string_view text, const PartialAction& a) {
  const auto& gens = a.generators();
  auto lines = body_lines(text);
  if (lines.empty() || lines[0] != kCertificateTag) throw ParseError(1, "missing certificate tag");
  std::map<std::string, std::pair<std::string, std::size_t>> fields;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto sp = lines[i].find(' ');
    if (sp == std::string::npos) throw ParseError(i + 1, "expected '<key> <value>'");
    fields.emplace(lines[i].substr(0, sp), std::pair{lines[i].substr(sp + 1), i + 1});
  }
  auto field = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError(lines.size(), "missing field '" + key + "'");
    return it->second;
  };

  VerifyResult r;
  r.kind = field("kind").first;
  if (field("graph").first != a.graph().digest()) {
    r.message = "graph digest does not match the supplied graph";
    return r;
  }
  if (field("action").first != a.digest()) {
    r.message = "action digest does not match the supplied action";
    return r;
  }
  auto quad_tok = split_ws(field("quadruple").first);
  if (quad_tok.size() != 4) throw ParseError(field("quadruple").second, "quadruple needs four halfspaces");
  std::array<Halfspace, 4> quad;
  for (int i = 0; i < 4; ++i) quad[i] = parse_halfspace(quad_tok[i], field("quadruple").second);
  const Word g = parse_word(field("g").first, gens);
  const Word h = parse_word(field("h").first, gens);
  const long m_max = parse_number(field("m_max").first, field("m_max").second);

  std::string expected;
  try {
    auto pp = pingpong_certify(a, quad, g, h, m_max);
    if (r.kind == "pingpong") {
      expected = pp.text(gens);
    } else if (r.kind == "stable") {
      const auto& hl = field("hyperplane");
      if (hl.first.size() < 2 || hl.first[0] != 'H') throw ParseError(hl.second, "bad hyperplane");
      auto hyperplane = static_cast<HyperplaneId>(parse_number(hl.first.substr(1), hl.second));
      auto len = parse_number(field("sample_length").first, field("sample_length").second);
      if (len < 0) throw ParseError(field("sample_length").second, "negative sample length");
      expected = stable_certify(a, hyperplane, pp, static_cast<std::size_t>(len)).text(gens);
    } else {
      throw ParseError(field("kind").second, "unknown certificate kind '" + r.kind + "'");
    }
  } catch (const PreconditionError& e) {
    r.message = std::string("recomputation failed: ") + e.what();
    return r;
  }

  auto want = body_lines(expected);
  for (std::size_t i = 0; i < std::max(want.size(), lines.size()); ++i) {
    const std::string got = i < lines.size() ? lines[i] : "<end>";
    const std::string exp = i < want.size() ? want[i] : "<end>";
    if (got != exp) {
      r.message = "line " + std::to_string(i + 1) + ": expected '" + exp + "', found '" + got + "'";
      return r;
    }
  }
  r.ok = true;
  r.message = "certificate reproduces (" + field("result").first + ")";
  return r;
}

}  // namespace cubekit
