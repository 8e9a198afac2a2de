#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cubekit/fixtures.hpp"
#include "cubekit/report.hpp"
#include "cubekit/sageev.hpp"
#include "cubekit/schottky.hpp"
#include "cubekit/schreier.hpp"
#include "json.hpp"

namespace {

using namespace cubekit;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kNegative = 1, kError = 2, kInconclusive = 3 };

struct Result {
  int code = kOk;
  std::string text;
  json data;  // structured form for --format=json; null means wrap text
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::shared_ptr<const HyperplaneSystem> load_complex(const std::string& path) {
  return std::make_shared<const HyperplaneSystem>(require_median(load_graph_file(path)));
}

struct Loaded {
  std::shared_ptr<const HyperplaneSystem> hs;
  std::optional<PartialAction> action;
};

Loaded load_inputs(const std::string& graph, const std::string& action) {
  Loaded l;
  l.hs = load_complex(graph);
  l.action.emplace(load_action_file(action, l.hs));
  require_valid(*l.action);
  return l;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string labels(const MedianGraph& g, const std::vector<VertexId>& vs) {
  std::string out;
  for (VertexId v : vs) out += (out.empty() ? "" : " ") + g.label(v);
  return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string found_line(const std::string& what, const Found& f, const Generators& gens, std::size_t length) {
  if (f.word) return what + ": " + to_string(*f.word, gens) + "\n";
  return what + ": none up to length " + std::to_string(length) + (f.truncated ? " (truncated)" : "") + "\n";
}

// Graph and action paths shared by most subcommands.
struct ActionArgs {
  std::string graph, action;
  void add(CLI::App* sub) {
    sub->add_option("graph", graph, "Graph file")->required()->check(CLI::ExistingFile);
    sub->add_option("action", action, "Action file")->required()->check(CLI::ExistingFile);
  }
};

// Schottky pair inputs for pingpong, stable and spectral.
struct PairArgs {
  std::string quadruple, g, h, from;
  long m_max = 3;
  std::size_t length = 8;
  void add(CLI::App* sub) {
    sub->add_option("--quadruple", quadruple, "Four halfspaces, comma separated");
    sub->add_option("--g", g, "Word g (skewer for the first pair)");
    sub->add_option("--h", h, "Word h (skewer for the second pair)");
    sub->add_option("--from", from, "Build the quadruple from a facing triple at this halfspace");
    sub->add_option("--m-max", m_max, "Largest tested power")->check(CLI::PositiveNumber);
    sub->add_option("--length,-L", length, "Word length budget for --from")->check(CLI::PositiveNumber);
  }
};

PingPongCertificate certify_pair(const PartialAction& a, const PairArgs& p) {
  const auto& gens = a.generators();
  if (!p.quadruple.empty()) {
    auto q = split_list(p.quadruple);
    if (q.size() != 4) throw Error("--quadruple needs four halfspaces");
    if (p.g.empty() || p.h.empty()) throw Error("--quadruple needs --g and --h");
    std::array<Halfspace, 4> quad;
    for (int i = 0; i < 4; ++i) quad[i] = parse_halfspace(q[i]);
    return pingpong_certify(a, quad, parse_word(p.g, gens), parse_word(p.h, gens), p.m_max);
  }
  if (p.from.empty()) throw Error("give --quadruple with --g/--h, or --from");
  auto triple = facing_triple_with(a.hyperplanes(), parse_halfspace(p.from));
  if (!triple) throw BudgetExhausted("no facing triple near " + p.from);
  auto q = build_quadruple(a, *triple, p.length);
  return pingpong_certify(a, q.quadruple, q.g, q.h, p.m_max);
}

// Source paths are relative to the certificate file when it has one, else as given.
std::string with_sources(std::string text, const std::string& graph, const std::string& action,
                         const std::string& out) {
  auto rel = [&](const std::string& path) {
    if (out.empty()) return path;
    auto dir = fs::absolute(out).parent_path();
    return fs::absolute(path).lexically_normal().lexically_relative(dir).generic_string();
  };
  return text + "source graph " + rel(graph) + "\nsource action " + rel(action) + "\n";
}


struct Command {
  CLI::App* app;
  std::function<Result()> run;
};

// Graph-only subcommands.
void add_graph_commands(CLI::App& app, std::vector<Command>& cmds) {
  auto graph = std::make_shared<std::string>();
  auto graph_arg = [graph](CLI::App* sub) {
    sub->add_option("graph", *graph, "Graph file")->required()->check(CLI::ExistingFile);
  };

  auto* validate = app.add_subcommand("validate", "Check the median property");
  graph_arg(validate);
  cmds.push_back({validate, [graph] {
    auto checked = check_median(load_graph_file(*graph));
    Result r;
    if (auto* bad = std::get_if<MedianViolation>(&checked)) {
      const auto g = load_graph_file(*graph);
      r.code = kNegative;
      r.text = "median: FAIL (" + labels(g, {bad->u, bad->v, bad->w}) + " has " +
               std::to_string(bad->median_count) + " medians)\n";
      r.data = {{"median", false},
                {"triple", {g.label(bad->u), g.label(bad->v), g.label(bad->w)}},
                {"medians", bad->median_count}};
      return r;
    }
    HyperplaneSystem hs(std::get<MedianGraph>(std::move(checked)));
    const auto& g = hs.graph();
    r.text = "median: OK (" + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(hs.count()) +
             " hyperplanes)\n";
    r.data = {{"median", true}, {"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"hyperplanes", hs.count()}};
    return r;
  }});

  auto* hyper = app.add_subcommand("hyperplanes", "List hyperplanes with sides and carriers");
  graph_arg(hyper);
  auto brief = std::make_shared<bool>(false);
  hyper->add_flag("--brief", *brief, "One line per hyperplane");
  cmds.push_back({hyper, [graph, brief] {
    auto hs = load_complex(*graph);
    Result r;
    r.text = hs->report(*brief);
    json list = json::array();
    for (HyperplaneId h = 0; h < hs->count(); ++h)
      list.push_back({{"id", h},
                      {"edges", hs->edges_of(h).size()},
                      {"side_a", hs->size({h, 0})},
                      {"side_b", hs->size({h, 1})},
                      {"crossing", hs->crossing(h).size()}});
    r.data = {{"hyperplanes", list}};
    return r;
  }});

  auto* sep = app.add_subcommand("separation", "Crossing and strong separation of two hyperplanes");
  graph_arg(sep);
  auto h1 = std::make_shared<std::string>(), h2 = std::make_shared<std::string>();
  sep->add_option("h1", *h1)->required();
  sep->add_option("h2", *h2)->required();
  cmds.push_back({sep, [graph, h1, h2] {
    auto hs = load_complex(*graph);
    HyperplaneId a = parse_hyperplane(*h1), b = parse_hyperplane(*h2);
    if (a >= hs->count() || b >= hs->count()) throw Error("hyperplane out of range");
    const auto& g = hs->graph();
    bool cross = hs->crosses(a, b), ss = hs->strongly_separated(a, b);
    Result r;
    r.code = ss ? kOk : kNegative;
    r.text = std::string("crossing: ") + yes_no(cross) + "\nstrongly separated: " + yes_no(ss) + "\n";
    r.data = {{"h1", a}, {"h2", b}, {"crossing", cross}, {"strongly_separated", ss}};
    if (!cross) {
      auto d = hs->hyperplane_distance(a, b);
      r.text += "distance: " + std::to_string(d) + "\n";
      r.data["distance"] = d;
    }
    if (ss) {
      auto p = projection_pair(*hs, a, b);
      auto edge = [&](EdgeId e) { return g.label(g.edge(e).u) + "-" + g.label(g.edge(e).v); };
      r.text += "projection: " + edge(p.first) + " (gate " + g.label(p.first_gate) + ") " + edge(p.second) +
                " (gate " + g.label(p.second_gate) + ")\n";
      r.data["projection"] = {{"first", edge(p.first)},
                              {"first_gate", g.label(p.first_gate)},
                              {"second", edge(p.second)},
                              {"second_gate", g.label(p.second_gate)}};
    }
    return r;
  }});

  auto* facing = app.add_subcommand("facing", "Pairwise facing tuples of halfspaces");
  graph_arg(facing);
  auto k = std::make_shared<unsigned>(3);
  auto limit = std::make_shared<std::size_t>(0);
  facing->add_option("--k", *k, "Tuple size")->check(CLI::Range(2u, 16u));
  facing->add_option("--limit", *limit, "Stop after this many tuples (0 = all)");
  cmds.push_back({facing, [graph, k, limit] {
    auto hs = load_complex(*graph);
    auto tuples = facing_tuples(*hs, *k, *limit);
    Result r;
    r.code = tuples.empty() ? kNegative : kOk;
    json list = json::array();
    for (const auto& t : tuples) {
      std::string line;
      json row = json::array();
      for (Halfspace s : t) {
        line += (line.empty() ? "" : " ") + to_string(s);
        row.push_back(to_string(s));
      }
      r.text += line + "\n";
      list.push_back(row);
    }
    r.text += "count: " + std::to_string(tuples.size()) + "\n";
    r.data = {{"k", *k}, {"count", tuples.size()}, {"tuples", list}};
    return r;
  }});

  auto* decompose = app.add_subcommand("decompose", "Irreducible product decomposition");
  graph_arg(decompose);
  cmds.push_back({decompose, [graph] {
    auto hs = load_complex(*graph);
    auto d = irreducible_decomposition(*hs);
    bool ok = d.rank() == 1 || verify_product(hs->graph(), d);
    Result r;
    r.code = ok ? kOk : kNegative;
    r.text = "factors: " + std::to_string(d.rank()) + "\nproduct: " + (ok ? "verified" : "failed") + "\n";
    json list = json::array();
    for (std::size_t i = 0; i < d.rank(); ++i) {
      r.text += "factor " + std::to_string(i + 1) + ": " + std::to_string(d.factors[i].size()) + " hyperplanes, " +
                std::to_string(d.factor_graphs[i].vertex_count()) + " vertices:";
      for (HyperplaneId h : d.factors[i]) r.text += " H" + std::to_string(h);
      r.text += "\n";
      list.push_back({{"hyperplanes", d.factors[i]}, {"vertices", d.factor_graphs[i].vertex_count()}});
    }
    r.data = {{"rank", d.rank()}, {"product_verified", ok}, {"factors", list}};
    return r;
  }});

  auto* dual = app.add_subcommand("dual", "Dual cube complex of a wallspace");
  auto walls = std::make_shared<std::string>();
  auto max_walls = std::make_shared<std::size_t>(kDefaultMaxWalls);
  dual->add_option("wallspace", *walls, "Wallspace file")->required()->check(CLI::ExistingFile);
  dual->add_option("--max-walls", *max_walls, "Wall count budget")->check(CLI::Range(1, 64));
  cmds.push_back({dual, [walls, max_walls] {
    auto w = load_wallspace_file(*walls);
    auto d = build_dual(w, *max_walls);
    Result r;
    r.text = "# dual: " + std::to_string(d.graph.vertex_count()) + " vertices, " +
             std::to_string(d.graph.edge_count()) + " edges, " + std::to_string(w.wall_count()) + " walls\n" +
             d.graph.to_text();
    return r;
  }});

  auto* round = app.add_subcommand("roundtrip", "Rebuild the graph from its hyperplanes");
  graph_arg(round);
  cmds.push_back({round, [graph] {
    auto hs = load_complex(*graph);
    auto res = roundtrip_check(*hs);
    Result r;
    r.code = res.ok ? kOk : kNegative;
    r.text = res.ok ? "roundtrip: OK\n" : "roundtrip: FAIL (" + res.message + ")\n";
    r.data = {{"roundtrip", res.ok}, {"message", res.message}};
    return r;
  }});
}

// Subcommands taking a graph and an action.
void add_action_commands(CLI::App& app, std::vector<Command>& cmds) {
  auto in = std::make_shared<ActionArgs>();
  auto half = std::make_shared<std::string>();
  auto length = std::make_shared<std::size_t>(6);
  auto half_arg = [half](CLI::App* sub, const char* name = "halfspace") {
    sub->add_option(name, *half, "Halfspace H<id>:A|B")->required();
  };
  auto length_opt = [length](CLI::App* sub) {
    sub->add_option("--length,-L", *length, "Word length budget")->check(CLI::PositiveNumber);
  };

  auto* av = app.add_subcommand("action-validate", "Check that every generator is a partial automorphism");
  in->add(av);
  cmds.push_back({av, [in] {
    auto hs = load_complex(in->graph);
    auto a = load_action_file(in->action, hs);
    auto rep = validate_action(a);
    Result r;
    r.code = rep.ok ? kOk : kNegative;
    r.text = rep.text();
    r.data = {{"ok", rep.ok}, {"problems", rep.problems}, {"effective_radius", rep.effective_radius}};
    return r;
  }});

  auto* orbit = app.add_subcommand("orbit", "Orbit of a halfspace under words up to length L");
  in->add(orbit);
  half_arg(orbit);
  length_opt(orbit);
  cmds.push_back({orbit, [in, half, length] {
    auto l = load_inputs(in->graph, in->action);
    const auto& gens = l.action->generators();
    auto res = hyperplane_orbit(*l.action, parse_halfspace(*half), *length);
    Result r;
    json list = json::array();
    for (const auto& e : res.entries) {
      auto w = to_string(e.witness, gens);
      r.text += to_string(e.image) + " " + w + "\n";
      list.push_back({{"halfspace", to_string(e.image)}, {"witness", w}});
    }
    r.text += "orbit: " + std::to_string(res.entries.size()) + " halfspaces" + (res.truncated ? " (truncated)" : "") +
              "\n";
    r.data = {{"size", res.entries.size()}, {"truncated", res.truncated}, {"orbit", list}};
    return r;
  }});

  auto found_result = [](const std::string& what, const Found& f, const Generators& gens, std::size_t len) {
    Result r;
    r.code = f.word ? kOk : kInconclusive;
    r.text = found_line(what, f, gens, len);
    r.data = {{what, f.word ? json(to_string(*f.word, gens)) : json(nullptr)}, {"truncated", f.truncated}};
    return r;
  };

  auto* flip = app.add_subcommand("flip", "Shortest word g with h* strictly inside g(h)");
  in->add(flip);
  half_arg(flip);
  length_opt(flip);
  cmds.push_back({flip, [in, half, length, found_result] {
    auto l = load_inputs(in->graph, in->action);
    return found_result("flip", find_flipping(*l.action, parse_halfspace(*half), *length), l.action->generators(),
                        *length);
  }});

  auto* skewer = app.add_subcommand("skewer", "Shortest double skewer g with g(k) strictly inside h");
  in->add(skewer);
  auto k = std::make_shared<std::string>();
  skewer->add_option("k", *k, "Halfspace k")->required();
  half_arg(skewer, "h");
  length_opt(skewer);
  cmds.push_back({skewer, [in, k, half, length, found_result] {
    auto l = load_inputs(in->graph, in->action);
    auto f = find_double_skewer(*l.action, parse_halfspace(*k), parse_halfspace(*half), *length);
    return found_result("skewer", f, l.action->generators(), *length);
  }});

  auto* sigma = app.add_subcommand("sigma", "Stabilizer analysis of a hyperplane against a test halfspace");
  in->add(sigma);
  auto base = std::make_shared<std::string>();
  sigma->add_option("base", *base, "Hyperplane H<id>")->required();
  half_arg(sigma, "test");
  length_opt(sigma);
  cmds.push_back({sigma, [in, base, half, length] {
    auto l = load_inputs(in->graph, in->action);
    auto res = sigma_analysis(*l.action, parse_hyperplane(*base), parse_halfspace(*half), *length);
    Result r;
    r.code = res.inconclusive() ? kInconclusive : kOk;
    r.text = res.text(l.action->generators());
    return r;
  }});

  auto* quad = app.add_subcommand("quadruple", "Facing quadruple with skewers from a facing triple");
  in->add(quad);
  half_arg(quad);
  auto triple = std::make_shared<std::string>();
  auto reach = std::make_shared<std::uint32_t>(2);
  auto qlen = std::make_shared<std::size_t>(8);
  quad->add_option("--triple", *triple, "Two more halfspaces completing the facing triple, comma separated");
  quad->add_option("--reach", *reach, "Carrier distance searched for a triple");
  quad->add_option("--length,-L", *qlen, "Word length budget")->check(CLI::PositiveNumber);
  cmds.push_back({quad, [in, half, triple, reach, qlen] {
    auto l = load_inputs(in->graph, in->action);
    Halfspace h = parse_halfspace(*half);
    std::array<Halfspace, 3> t;
    if (!triple->empty()) {
      auto rest = split_list(*triple);
      if (rest.size() != 2) throw Error("--triple needs two halfspaces");
      t = {h, parse_halfspace(rest[0]), parse_halfspace(rest[1])};
    } else {
      auto found = facing_triple_with(l.hs ? *l.hs : l.action->hyperplanes(), h, *reach);
      if (!found) throw BudgetExhausted("no facing triple within reach " + std::to_string(*reach));
      t = *found;
    }
    Result r;
    r.text = build_quadruple(*l.action, t, *qlen).text(l.action->generators());
    return r;
  }});

  auto pair = std::make_shared<PairArgs>();
  auto out = std::make_shared<std::string>();

  auto* pp = app.add_subcommand("pingpong", "Ping-pong certificate for a facing quadruple");
  in->add(pp);
  pair->add(pp);
  pp->add_option("-o,--output", *out, "Write the certificate to this file");
  cmds.push_back({pp, [in, pair, out] {
    auto l = load_inputs(in->graph, in->action);
    auto cert = certify_pair(*l.action, *pair);
    Result r;
    r.code = cert.ok ? kOk : kNegative;
    r.text = with_sources(cert.text(l.action->generators()), in->graph, in->action, *out);
    if (!out->empty()) {
      write_file(*out, r.text);
      r.text = std::string("pingpong: ") + (cert.ok ? "certified" : "refuted") + ", written to " + *out + "\n";
    }
    return r;
  }});

  auto* stable = app.add_subcommand("stable", "Displacement certificate for a hyperplane under the Schottky pair");
  in->add(stable);
  auto hyper = std::make_shared<std::string>();
  auto sample = std::make_shared<std::size_t>(8);
  stable->add_option("hyperplane", *hyper, "Hyperplane H<id>")->required();
  pair->add(stable);
  stable->add_option("--sample", *sample, "Largest expanded commutator length")->check(CLI::PositiveNumber);
  stable->add_option("-o,--output", *out, "Write the certificate to this file");
  cmds.push_back({stable, [in, pair, hyper, sample, out] {
    auto l = load_inputs(in->graph, in->action);
    const auto& gens = l.action->generators();
    auto pp = certify_pair(*l.action, *pair);
    Result r;
    if (!pp.ok) {
      r.code = kNegative;
      r.text = "stable: ping-pong refuted: " + pp.failure + "\n";
      return r;
    }
    auto cert = stable_certify(*l.action, parse_hyperplane(*hyper), pp, *sample);
    // Nothing tested, or every tested word left the domain: no evidence either way.
    const bool untested = cert.vacuous() || cert.out_of_domain == cert.checks.size();
    r.code = cert.ok ? (untested ? kInconclusive : kOk) : kNegative;
    r.text = with_sources(cert.text(gens), in->graph, in->action, *out);
    if (!out->empty()) {
      write_file(*out, r.text);
      r.text = std::string("stable: ") + (!cert.ok ? "refuted" : untested ? "inconclusive" : "certified") +
               ", written to " + *out + "\n";
    }
    return r;
  }});
}

// Schreier graphs, spectral estimates, fixed points, reports and certificates.
void add_analysis_commands(CLI::App& app, std::vector<Command>& cmds) {
  auto in = std::make_shared<ActionArgs>();
  auto half = std::make_shared<std::string>();
  auto radius = std::make_shared<std::uint32_t>(6);
  auto out = std::make_shared<std::string>();

  auto* sch = app.add_subcommand("schreier", "Schreier graph ball of the orbit of a halfspace");
  in->add(sch);
  sch->add_option("halfspace", *half, "Base halfspace H<id>:A|B")->required();
  sch->add_option("--radius,-R", *radius, "Ball radius")->check(CLI::PositiveNumber);
  sch->add_option("-o,--output", *out, "Write the graph to this file");
  cmds.push_back({sch, [in, half, radius, out] {
    auto l = load_inputs(in->graph, in->action);
    auto sg = build_schreier(*l.action, parse_halfspace(*half), *radius);
    Result r;
    r.text = sg.to_text();
    if (!out->empty()) {
      write_file(*out, r.text);
      r.text = "schreier: " + std::to_string(sg.node_count()) + " nodes, written to " + *out + "\n";
    }
    return r;
  }});

  auto* spec = app.add_subcommand("spectral", "Dirichlet spectral radius series on a Schreier ball");
  in->add(spec);
  auto first = std::make_shared<std::uint32_t>(1);
  auto tol = std::make_shared<double>(1e-6);
  auto g = std::make_shared<std::string>(), h = std::make_shared<std::string>();
  auto words = std::make_shared<std::size_t>(4);
  spec->add_option("halfspace", *half, "Base halfspace H<id>:A|B")->required();
  spec->add_option("--radius,-R", *radius, "Largest radius")->check(CLI::PositiveNumber);
  spec->add_option("--first", *first, "Smallest radius")->check(CLI::PositiveNumber);
  spec->add_option("--tol", *tol, "Residual tolerance")->check(CLI::PositiveNumber);
  spec->add_option("--g", *g, "Word g for the free-action certificate");
  spec->add_option("--h", *h, "Word h for the free-action certificate");
  spec->add_option("--length,-L", *words, "Longest word in g, h tested")->check(CLI::PositiveNumber);
  cmds.push_back({spec, [in, half, radius, first, tol, g, h, words] {
    auto l = load_inputs(in->graph, in->action);
    const auto& gens = l.action->generators();
    auto sg = build_schreier(*l.action, parse_halfspace(*half), *radius);
    auto series = spectral_series(sg, *first, *radius, *tol);
    Result r;
    r.text = series.csv();
    json points = json::array();
    for (const auto& p : series.points)
      points.push_back({{"radius", p.radius},
                        {"interior", p.interior},
                        {"estimate", p.estimate},
                        {"residual", p.residual},
                        {"iterations", p.iterations},
                        {"converged", p.converged}});
    r.data = {{"nodes", sg.node_count()}, {"truncated", sg.truncated()}, {"monotone", series.monotone},
              {"series", points}};
    if (g->empty() != h->empty()) throw Error("--g and --h go together");
    if (!g->empty()) {
      auto cert = free_action_cert(sg, parse_word(*g, gens), parse_word(*h, gens), *words);
      auto ev = stability_evidence(&cert, series);
      std::istringstream lines(cert.text(sg));
      for (std::string line; std::getline(lines, line);) r.text += "# " + line + "\n";
      r.text += "# " + ev.text();
      r.data["free_action"] = {{"ok", cert.ok}, {"words", cert.words}, {"nodes", cert.nodes.size()},
                               {"failure", cert.failure}};
      r.data["evidence_level"] = ev.level();
      r.data["evidence"] = std::string(trim(ev.text()));
    }
    return r;
  }});

  auto* ell = app.add_subcommand("elliptic", "Common fixed vertex, edge or square of a set of words");
  in->add(ell);
  auto list = std::make_shared<std::string>();
  auto hint = std::make_shared<std::string>();
  auto orbit_len = std::make_shared<std::size_t>(6);
  ell->add_option("--words", *list, "Comma separated words")->required();
  ell->add_option("--hint", *hint, "Hyperplane preserved by every word");
  ell->add_option("--length,-L", *orbit_len, "Budget for the projection translate")->check(CLI::PositiveNumber);
  cmds.push_back({ell, [in, list, hint, orbit_len] {
    auto l = load_inputs(in->graph, in->action);
    std::vector<Word> ws;
    for (const auto& w : split_list(*list)) ws.push_back(parse_word(w, l.action->generators()));
    std::optional<HyperplaneId> hh;
    if (!hint->empty()) hh = parse_hyperplane(*hint);
    auto locus = elliptic_fixed_point(*l.action, ws, *orbit_len, hh);
    Result r;
    r.code = locus.found() ? kOk : kNegative;
    r.text = locus.text(l.action->graph());
    return r;
  }});

  auto* rep = app.add_subcommand("report", "Product decomposition with line and rank-one candidates");
  auto graph = std::make_shared<std::string>(), action = std::make_shared<std::string>();
  rep->add_option("graph", *graph, "Graph file")->required()->check(CLI::ExistingFile);
  rep->add_option("action", *action, "Action file (optional)")->check(CLI::ExistingFile);
  cmds.push_back({rep, [graph, action] {
    auto hs = load_complex(*graph);
    std::optional<PartialAction> a;
    if (!action->empty()) {
      a.emplace(load_action_file(*action, hs));
      require_valid(*a);
    }
    auto shape = theorem_b_shape(hs, a ? &*a : nullptr);
    Result r;
    r.code = shape.product_verified ? kOk : kNegative;
    r.text = shape.text();
    r.data = json::parse(shape.json());
    return r;
  }});

  auto* tr = app.add_subcommand("translate", "Power of a skewer in a finite-index kernel moving h off itself");
  in->add(tr);
  auto quotient = std::make_shared<std::string>();
  auto tlen = std::make_shared<std::size_t>(8);
  tr->add_option("halfspace", *half, "Halfspace H<id>:A|B")->required();
  tr->add_option("quotient", *quotient, "Permutation quotient file")->required()->check(CLI::ExistingFile);
  tr->add_option("--length,-L", *tlen, "Word length budget")->check(CLI::PositiveNumber);
  cmds.push_back({tr, [in, half, quotient, tlen] {
    auto l = load_inputs(in->graph, in->action);
    const auto& gens = l.action->generators();
    auto q = load_quotient_file(*quotient, gens);
    auto t = find_separated_translate(*l.action, parse_halfspace(*half), q, *tlen);
    Result r;
    if (!t) {
      r.code = kInconclusive;
      r.text = "translate: none found up to length " + std::to_string(*tlen) + "\n";
      return r;
    }
    r.text = t->text(gens);
    return r;
  }});

  auto* ver = app.add_subcommand("verify", "Recompute a certificate and compare it line by line");
  auto cert_path = std::make_shared<std::string>();
  auto vg = std::make_shared<std::string>(), va = std::make_shared<std::string>();
  ver->add_option("certificate", *cert_path, "Certificate file")->required()->check(CLI::ExistingFile);
  ver->add_option("--graph", *vg, "Graph file (default: the certificate's source line)");
  ver->add_option("--action", *va, "Action file (default: the certificate's source line)");
  cmds.push_back({ver, [cert_path, vg, va] {
    auto text = read_file(*cert_path);
    std::string graph = *vg, action = *va;
    for (const auto& [role, path] : certificate_sources(text)) {
      std::string resolved = path;
      if (auto beside = fs::path(*cert_path).parent_path() / path; fs::exists(beside)) resolved = beside.string();
      if (role == "graph" && graph.empty()) graph = resolved;
      if (role == "action" && action.empty()) action = resolved;
    }
    if (graph.empty() || action.empty()) throw Error("certificate names no graph/action; pass --graph and --action");
    auto l = load_inputs(graph, action);
    auto res = verify_certificate(text, *l.action);
    Result r;
    r.code = res.ok ? kOk : kNegative;
    r.text = "verify: " + res.kind + (res.ok ? " OK" : " FAIL: " + res.message) + "\n";
    r.data = {{"ok", res.ok}, {"kind", res.kind}, {"message", res.message}};
    return r;
  }});
}

std::string sign_quotient_text(const Generators& gens) {
  std::string text = "# sign quotient: every generator swaps 0 and 1\n";
  for (const auto& [name, inv] : gens.declarations()) text += "perm " + name + ": (0 1)\n";
  return text;
}

// Fixture files for experiments and examples.
void add_generate_command(CLI::App& app, std::vector<Command>& cmds, const std::uint64_t* seed) {
  namespace fx = cubekit::fixtures;
  const std::vector<std::string> names = {"f2-ball",  "z-path", "z2-grid",      "f2xz",          "q3",
                                          "star",     "grid",   "facing-walls", "crossing-walls", "random"};
  auto* gen = app.add_subcommand("generate", "Write a built-in fixture to files");
  auto name = std::make_shared<std::string>();
  auto dir = std::make_shared<std::string>(".");
  auto radius = std::make_shared<unsigned>(0);
  auto width = std::make_shared<std::size_t>(5), height = std::make_shared<std::size_t>(5);
  gen->add_option("fixture", *name, "Fixture name")->required()->check(CLI::IsMember(names));
  gen->add_option("-o,--out-dir", *dir, "Output directory");
  gen->add_option("--radius,-R", *radius, "Ball radius (f2-ball, z-path, f2xz) or size (star, random); 0 picks a default");
  gen->add_option("--width", *width, "Grid width");
  gen->add_option("--height", *height, "Grid height");
  cmds.push_back({gen, [name, dir, radius, width, height, seed] {
    fs::create_directories(*dir);
    const unsigned rad = *radius ? *radius : (*name == "f2xz" || *name == "star" ? 3u : 6u);
    std::vector<std::pair<std::string, std::string>> files;
    auto add_action = [&](const PartialAction& a) {
      files.emplace_back(*name + ".graph", a.graph().to_text());
      files.emplace_back(*name + ".action", a.to_text());
    };
    if (*name == "f2-ball") {
      auto a = fx::free_group_ball(rad);
      add_action(a);
      files.emplace_back(*name + ".quotient", sign_quotient_text(a.generators()));
    } else if (*name == "z-path") {
      add_action(fx::integer_path(rad));
    } else if (*name == "z2-grid") {
      add_action(fx::integer_grid(*width, *height));
    } else if (*name == "f2xz") {
      add_action(fx::free_group_times_integer(rad, rad));
    } else if (*name == "q3") {
      files.emplace_back(*name + ".graph", fx::hypercube(3).to_text());
    } else if (*name == "star") {
      files.emplace_back(*name + ".graph", fx::star(rad).to_text());
    } else if (*name == "grid") {
      files.emplace_back(*name + ".graph", fx::grid(*width, *height).to_text());
    } else if (*name == "facing-walls") {
      files.emplace_back(*name + ".walls", fx::facing_walls().to_text());
    } else if (*name == "crossing-walls") {
      files.emplace_back(*name + ".walls", fx::crossing_walls().to_text());
    } else {
      fx::Rng rng(*seed);
      files.emplace_back(*name + ".graph", fx::random_median(rng, std::size_t{rad} * 4).to_text());
    }
    Result r;
    json written = json::array();
    for (const auto& [file, text] : files) {
      auto path = (fs::path(*dir) / file).string();
      write_file(path, text);
      r.text += "wrote " + path + "\n";
      written.push_back(path);
    }
    r.data = {{"written", written}};
    return r;
  }});
}

unsigned default_threads() {
  if (const char* env = std::getenv("CUBEKIT_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubekit: median graphs, hyperplanes and group actions on cube complexes"};
  // --h names the second Schottky word, so help is --help only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = default_threads();
  std::string format = "text";
  std::uint64_t seed = 1;
  app.add_option("--threads", threads, "Worker threads (default: CUBEKIT_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", seed, "Seed for randomized fixtures");

  std::vector<Command> cmds;
  add_graph_commands(app, cmds);
  add_action_commands(app, cmds);
  add_analysis_commands(app, cmds);
  add_generate_command(app, cmds, &seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  set_thread_count(threads);
  Result result;
  try {
    for (const auto& c : cmds)
      if (c.app->parsed()) result = c.run();
  } catch (const BudgetExhausted& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const CapacityError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }

  if (format == "json") {
    json j = result.data.is_null() ? json{{"output", result.text}} : result.data;
    j["exit_code"] = result.code;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << result.text;
  }
  return result.code;
}
