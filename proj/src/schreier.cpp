#include "cubekit/schreier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cubekit {

namespace {

constexpr std::size_t kChunk = 1 << 14;

std::string format_double(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string format_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Interior nodes of depth < radius. BFS order puts them in a prefix, so the
// mask stops at the first node of depth radius.
std::vector<std::uint8_t> interior_mask(const SchreierGraph& sg, std::uint32_t radius) {
  std::vector<std::uint8_t> mask;
  for (std::uint32_t x = 0; x < sg.node_count() && sg.depth(x) < radius; ++x) mask.push_back(!sg.frontier(x));
  return mask;
}

// y = P x on the masked nodes; returns the squared norm of y.
double walk(const SchreierGraph& sg, const std::vector<std::uint8_t>& mask, const std::vector<double>& x,
            std::vector<double>& y) {
  const std::size_t n = mask.size(), k = sg.generator_count();
  const double inv = 1.0 / static_cast<double>(k);
  std::vector<double> partial((n + kChunk - 1) / kChunk, 0.0);
  parallel_chunks(n, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    double acc = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (!mask[i]) {
        y[i] = 0;
        continue;
      }
      double s = 0;
      for (GenId g = 0; g < k; ++g) {
        std::uint32_t j = sg.neighbor(static_cast<std::uint32_t>(i), g);
        if (j < n && mask[j]) s += x[j];
      }
      y[i] = s * inv;
      acc += y[i] * y[i];
    }
    partial[c] = acc;
  });
  double total = 0;
  for (double p : partial) total += p;
  return total;
}

void scale(std::vector<double>& x, double f) {
  parallel_chunks(x.size(), kChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) x[i] *= f;
  });
}

// ||z - r x||^2
double distance_sq(const std::vector<double>& z, const std::vector<double>& x, double r) {
  std::vector<double> partial((x.size() + kChunk - 1) / kChunk, 0.0);
  parallel_chunks(x.size(), kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    double acc = 0;
    for (std::size_t i = begin; i < end; ++i) {
      double d = z[i] - r * x[i];
      acc += d * d;
    }
    partial[c] = acc;
  });
  double total = 0;
  for (double p : partial) total += p;
  return total;
}

double norm_sq(const std::vector<double>& x) { return distance_sq(x, x, 0.0); }

// Power iteration on P^2 from x (unit norm on the mask).
SpectralEstimate iterate(const SchreierGraph& sg, const std::vector<std::uint8_t>& mask, std::vector<double>& x,
                         double tol, std::size_t max_iterations) {
  SpectralEstimate out;
  std::vector<double> y(x.size()), z(x.size());
  for (;;) {
    double py = walk(sg, mask, x, y);
    double pz = walk(sg, mask, y, z);
    out.estimate = std::sqrt(py);
    out.residual = std::sqrt(distance_sq(z, x, py));
    if (out.residual < tol || pz == 0) {
      out.converged = true;
      break;
    }
    if (out.iterations == max_iterations) break;
    ++out.iterations;
    std::swap(x, z);
    scale(x, 1.0 / std::sqrt(pz));
  }
  out.estimate = std::min(out.estimate, 1.0);
  return out;
}

}  // namespace

std::optional<std::uint32_t> SchreierGraph::find(Halfspace h) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), h);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

Word SchreierGraph::witness(std::uint32_t x) const {
  std::vector<GenId> letters;
  for (; x != 0; x = parent_[x]) letters.push_back(parent_letter_[x]);
  std::reverse(letters.begin(), letters.end());
  return Word(std::move(letters), gens_);
}

std::size_t SchreierGraph::interior_count() const {
  return static_cast<std::size_t>(std::count(frontier_.begin(), frontier_.end(), 0));
}

std::string SchreierGraph::to_text() const {
  std::ostringstream out;
  out << "# schreier base=" << to_string(base()) << " radius=" << radius_ << " nodes=" << nodes_.size() << "\n";
  for (const Halfspace& h : nodes_) out << "v " << to_string(h) << "\n";
  std::vector<std::uint32_t> seen;
  std::ostringstream loops;
  for (std::uint32_t x = 0; x < nodes_.size(); ++x) {
    seen.clear();
    for (GenId s = 0; s < gens_.size(); ++s) {
      std::uint32_t y = neighbor(x, s);
      if (y == kNone) continue;
      if (y == x) {
        loops << "# loop " << to_string(nodes_[x]) << " " << gens_.name(s) << "\n";
      } else if (x < y && std::find(seen.begin(), seen.end(), y) == seen.end()) {
        seen.push_back(y);
        out << "e " << to_string(nodes_[x]) << " " << to_string(nodes_[y]) << "\n";
      }
    }
  }
  out << loops.str();
  out << "# frontier:";
  for (std::uint32_t x = 0; x < nodes_.size(); ++x)
    if (frontier_[x]) out << " " << to_string(nodes_[x]);
  out << "\n";
  return out.str();
}

SchreierGraph build_schreier(const PartialAction& a, Halfspace h, std::uint32_t radius) {
  const auto& hs = a.hyperplanes();
  const auto& graph = a.graph();
  if (h.hyperplane >= hs.count()) throw PreconditionError("hyperplane out of range");
  SchreierGraph sg;
  sg.gens_ = a.generators();
  sg.radius_ = radius;
  const std::size_t k = sg.gens_.size();
  std::vector<std::uint32_t> slot(2 * static_cast<std::size_t>(hs.count()), kNone);
  // One dual edge per node, as (inside, outside) endpoints.
  std::vector<Edge> rep;
  auto oriented = [&](Halfspace node) {
    const Edge& e = graph.edge(hs.edges_of(node.hyperplane).front());
    return hs.contains(node, e.u) ? e : Edge{e.v, e.u};
  };
  auto add = [&](Halfspace node, Edge r, std::uint32_t depth, std::uint32_t parent, GenId letter) {
    auto id = static_cast<std::uint32_t>(sg.nodes_.size());
    slot[node.index()] = id;
    sg.nodes_.push_back(node);
    rep.push_back(r);
    sg.depth_.push_back(depth);
    sg.parent_.push_back(parent);
    sg.parent_letter_.push_back(letter);
    sg.frontier_.push_back(0);
    sg.adj_.resize(sg.adj_.size() + k, kNone);
    return id;
  };
  add(h, oriented(h), 0, kNone, 0);
  for (std::uint32_t x = 0; x < sg.nodes_.size(); ++x) {
    if (sg.depth_[x] == radius) {
      sg.frontier_[x] = 1;
      continue;
    }
    for (GenId s = 0; s < k; ++s) {
      // x.s = s^-1(x)
      const GenId t = sg.gens_.inverse(s);
      std::optional<Halfspace> img;
      Edge r{a.image(t, rep[x].u), a.image(t, rep[x].v)};
      EdgeId e = r.u == kNone || r.v == kNone ? kNone : graph.edge_id(r.u, r.v);
      if (e != kNone) {
        HyperplaneId target = hs.hyperplane_of(e);
        img = Halfspace{target, hs.side_of(target, r.u)};
      } else {
        img = a.apply_generator(t, sg.nodes_[x]);
        if (img) r = oriented(*img);
      }
      if (!img) {
        sg.frontier_[x] = 1;
        sg.truncated_ = true;
        continue;
      }
      std::uint32_t y = slot[img->index()];
      if (y == kNone) y = add(*img, r, sg.depth_[x] + 1, x, s);
      sg.adj_[x * k + s] = y;
    }
  }
  return sg;
}

std::string SpectralEstimate::csv() const {
  return std::to_string(radius) + "," + format_double(estimate) + "," + format_sci(residual);
}

SpectralEstimate spectral_estimate(const SchreierGraph& sg, double tol, std::optional<std::uint32_t> radius,
                                   std::size_t max_iterations) {
  std::uint32_t r = radius.value_or(sg.radius());
  if (r > sg.radius()) throw PreconditionError("radius " + std::to_string(r) + " exceeds the graph radius");
  auto mask = interior_mask(sg, r);
  std::size_t interior = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
  if (interior == 0) throw PreconditionError("no interior nodes at radius " + std::to_string(r));
  std::vector<double> x(mask.size(), 0.0);
  const double v = 1.0 / std::sqrt(static_cast<double>(interior));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (mask[i]) x[i] = v;
  auto out = iterate(sg, mask, x, tol, max_iterations);
  out.radius = r;
  out.interior = interior;
  return out;
}

std::string SpectralSeries::csv() const {
  std::string out = "radius,estimate,residual\n";
  for (const auto& p : points) out += p.csv() + "\n";
  return out;
}

SpectralSeries spectral_series(const SchreierGraph& sg, std::uint32_t first, std::uint32_t last, double tol) {
  if (first == 0 || first > last || last > sg.radius())
    throw PreconditionError("radius range must satisfy 1 <= first <= last <= " + std::to_string(sg.radius()));
  SpectralSeries out;
  std::vector<double> x;
  std::vector<std::uint8_t> previous;
  for (std::uint32_t r = first; r <= last; ++r) {
    auto mask = interior_mask(sg, r);
    std::size_t interior = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
    if (interior == 0) throw PreconditionError("no interior nodes at radius " + std::to_string(r));
    // New nodes start from half their BFS parent's weight.
    const std::size_t old = x.size();
    x.resize(mask.size(), 0.0);
    for (std::uint32_t i = 0; i < x.size(); ++i)
      if (mask[i] && (i >= old || !previous[i])) x[i] = i == 0 ? 1.0 : std::max(0.5 * x[sg.parent(i)], 1e-12);
    scale(x, 1.0 / std::sqrt(norm_sq(x)));
    auto est = iterate(sg, mask, x, tol, 100000);
    est.radius = r;
    est.interior = interior;
    if (!out.points.empty() && est.estimate < out.points.back().estimate) out.monotone = false;
    out.points.push_back(est);
    previous = std::move(mask);
  }
  return out;
}

std::string FreeActionCertificate::text(const SchreierGraph& sg) const {
  std::ostringstream out;
  out << "free-action: " << (ok ? "certified" : "refuted") << " L=" << max_length << " words=" << words
      << " nodes=" << nodes.size() << " skipped=" << skipped << "\n";
  if (!ok) out << "  failure: " << failure << "\n";
  for (const auto& n : nodes)
    out << "  " << to_string(sg.node(n.node)) << " displacement=" << n.displacement << " word=" << n.word << "\n";
  return out.str();
}

FreeActionCertificate free_action_cert(const SchreierGraph& sg, const Word& g, const Word& h, std::size_t max_length) {
  const Generators& gens = sg.generators();
  const Generators fg(GeneratorPairs{{"g", "G"}, {"h", "H"}});
  const std::array<Word, 4> letters{g, g.inverse(gens), h, h.inverse(gens)};

  FreeActionCertificate out;
  out.max_length = max_length;
  std::vector<std::pair<std::string, Word>> words;
  std::size_t longest = 0;
  for (const Word& u : reduced_words(fg, max_length)) {
    if (u.empty()) continue;
    Word x;
    for (GenId l : u.letters()) x = x.times(letters[l], gens);
    longest = std::max(longest, x.length());
    words.emplace_back(to_string(u, fg), std::move(x));
  }
  out.words = words.size();

  std::vector<std::uint32_t> candidates;
  for (std::uint32_t x = 0; x < sg.node_count(); ++x)
    if (!sg.frontier(x) && sg.depth(x) + longest <= sg.radius()) candidates.push_back(x);
  if (candidates.empty())
    throw BudgetExhausted("Schreier radius " + std::to_string(sg.radius()) + " cannot hold words of length " +
                          std::to_string(longest));

  struct Slot {
    NodeDisplacement entry;
    std::size_t skipped = 0;
    std::string failure;
  };
  std::vector<Slot> slots(candidates.size());
  parallel_chunks(candidates.size(), 16, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> dist;
    std::vector<std::uint32_t> touched, queue;
    for (std::size_t i = begin; i < end; ++i) {
      Slot& slot = slots[i];
      const std::uint32_t x = candidates[i];
      slot.entry.node = x;
      slot.entry.displacement = kNone;

      // Distances from x within the explored graph, up to the longest word.
      if (dist.empty()) dist.assign(sg.node_count(), kNone);
      for (auto t : touched) dist[t] = kNone;
      touched = {x};
      queue = {x};
      dist[x] = 0;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        std::uint32_t y = queue[q];
        if (dist[y] == longest) continue;
        for (GenId s = 0; s < sg.generator_count(); ++s) {
          std::uint32_t z = sg.neighbor(y, s);
          if (z == kNone || dist[z] != kNone) continue;
          dist[z] = dist[y] + 1;
          touched.push_back(z);
          queue.push_back(z);
        }
      }

      for (const auto& [name, w] : words) {
        std::uint32_t y = x;
        for (GenId l : w.letters()) {
          y = sg.neighbor(y, l);
          if (y == kNone) break;
        }
        if (y == kNone) {
          ++slot.skipped;
          continue;
        }
        std::uint32_t d = dist[y];
        if (d < slot.entry.displacement) {
          slot.entry.displacement = d;
          slot.entry.word = name;
        }
        if (d == 0 && slot.failure.empty())
          slot.failure = name + " fixes " + to_string(sg.node(x)) + " (coset of " + to_string(sg.witness(x), gens) + ")";
      }
    }
  });
  for (auto& slot : slots) {
    out.skipped += slot.skipped;
    if (out.failure.empty() && !slot.failure.empty()) out.failure = slot.failure;
    if (slot.entry.displacement != kNone) out.nodes.push_back(std::move(slot.entry));
  }
  if (out.nodes.empty())
    throw BudgetExhausted("every word left the explored Schreier graph");
  out.ok = out.failure.empty();
  return out;
}

std::string StabilityEvidence::text() const {
  std::ostringstream out;
  out << "stable: evidence level " << level() << " (free-action " << (free_action ? "yes" : "no")
      << ", spectral " << format_double(last_estimate) << (spectral_gap ? " <= " : " > ") << format_double(ceiling, 2)
      << ")\n";
  return out.str();
}

StabilityEvidence stability_evidence(const FreeActionCertificate* cert, const SpectralSeries& series, double ceiling) {
  StabilityEvidence out;
  out.ceiling = ceiling;
  out.free_action = cert && cert->ok;
  if (!series.points.empty()) {
    out.last_estimate = series.points.back().estimate;
    out.spectral_gap = series.monotone && out.last_estimate <= ceiling;
  }
  return out;
}

}  // namespace cubekit
