#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cubekit/fixtures.hpp"
#include "cubekit/report.hpp"
#include "cubekit/sageev.hpp"
#include "cubekit/schottky.hpp"
#include "cubekit/schreier.hpp"

namespace py = pybind11;
using namespace cubekit;

namespace {

using ComplexPtr = std::shared_ptr<HyperplaneSystem>;

ComplexPtr make_complex(MedianGraph g) { return std::make_shared<HyperplaneSystem>(require_median(std::move(g))); }

ComplexPtr complex_of(const PartialAction& a) {
  return std::const_pointer_cast<HyperplaneSystem>(a.hyperplanes_ptr());
}

std::vector<std::string> halfspace_names(const std::vector<Halfspace>& hs) {
  std::vector<std::string> out;
  for (Halfspace h : hs) out.push_back(to_string(h));
  return out;
}

std::array<Halfspace, 4> quadruple_of(const std::vector<std::string>& names) {
  if (names.size() != 4) throw Error("a quadruple has four halfspaces");
  std::array<Halfspace, 4> q;
  for (std::size_t i = 0; i < 4; ++i) q[i] = parse_halfspace(names[i]);
  return q;
}

std::optional<std::string> found_word(const Found& f, const Generators& gens) {
  if (!f.word) return std::nullopt;
  return to_string(*f.word, gens);
}

}  // namespace

PYBIND11_MODULE(_cubekit, m) {
  m.doc() = "Median graphs, hyperplanes and group actions on cube complexes";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", error.ptr());
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", error.ptr());

  m.def("set_thread_count", &set_thread_count, py::arg("n"));
  m.def("thread_count", &thread_count);

  m.def(
      "median_violation",
      [](const std::string& text) -> std::optional<std::tuple<std::string, std::string, std::string, std::size_t>> {
        auto g = load_graph(text);
        auto bad = find_median_violation(g);
        if (!bad) return std::nullopt;
        return std::tuple{g.label(bad->u), g.label(bad->v), g.label(bad->w), bad->median_count};
      },
      py::arg("graph_text"), "First triple without a unique median, or None for a median graph");

  py::class_<HyperplaneSystem, ComplexPtr>(m, "Complex", "A validated median graph with its hyperplanes")
      .def_static("from_text", [](const std::string& text) { return make_complex(load_graph(text)); })
      .def_static("from_file", [](const std::string& path) { return make_complex(load_graph_file(path)); })
      .def_property_readonly("vertex_count", [](const HyperplaneSystem& hs) { return hs.graph().vertex_count(); })
      .def_property_readonly("edge_count", [](const HyperplaneSystem& hs) { return hs.graph().edge_count(); })
      .def_property_readonly("hyperplane_count", &HyperplaneSystem::count)
      .def("label", [](const HyperplaneSystem& hs, VertexId v) { return hs.graph().label(v); })
      .def("side_sizes",
           [](const HyperplaneSystem& hs, HyperplaneId h) { return std::pair{hs.size({h, 0}), hs.size({h, 1})}; })
      .def("crosses", &HyperplaneSystem::crosses)
      .def("strongly_separated", &HyperplaneSystem::strongly_separated)
      .def(
          "facing_tuples",
          [](const HyperplaneSystem& hs, unsigned k, std::size_t limit) {
            std::vector<std::vector<std::string>> out;
            for (const auto& t : facing_tuples(hs, k, limit)) out.push_back(halfspace_names(t));
            return out;
          },
          py::arg("k") = 3, py::arg("limit") = 0)
      .def("decompose", [](const HyperplaneSystem& hs) { return irreducible_decomposition(hs).factors; })
      .def("roundtrip", [](const HyperplaneSystem& hs) { return roundtrip_check(hs).ok; })
      .def("report", &HyperplaneSystem::report, py::arg("brief") = false)
      .def("to_text", [](const HyperplaneSystem& hs) { return hs.graph().to_text(); });

  py::class_<PartialAction>(m, "Action", "A group acting by partial automorphisms of a complex")
      .def(py::init([](const std::string& text, const ComplexPtr& hs) {
             auto a = load_action(text, hs);
             require_valid(a);
             return a;
           }),
           py::arg("text"), py::arg("complex"))
      .def_static(
          "from_file",
          [](const std::string& path, const ComplexPtr& hs) {
            auto a = load_action_file(path, hs);
            require_valid(a);
            return a;
          },
          py::arg("path"), py::arg("complex"))
      .def_property_readonly("complex", &complex_of)
      .def_property_readonly("generators",
                             [](const PartialAction& a) {
                               std::vector<std::string> names;
                               for (GenId s = 0; s < a.generators().size(); ++s)
                                 names.push_back(a.generators().name(s));
                               return names;
                             })
      .def("to_text", &PartialAction::to_text)
      .def(
          "halfspace_image",
          [](const PartialAction& a, const std::string& word, const std::string& h) -> std::optional<std::string> {
            auto img = a.apply(parse_word(word, a.generators()), parse_halfspace(h));
            if (!img) return std::nullopt;
            return to_string(*img);
          },
          py::arg("word"), py::arg("halfspace"))
      .def(
          "flip",
          [](const PartialAction& a, const std::string& h, std::size_t length) {
            return found_word(find_flipping(a, parse_halfspace(h), length), a.generators());
          },
          py::arg("halfspace"), py::arg("length") = 6)
      .def(
          "skewer",
          [](const PartialAction& a, const std::string& k, const std::string& h, std::size_t length) {
            return found_word(find_double_skewer(a, parse_halfspace(k), parse_halfspace(h), length),
                              a.generators());
          },
          py::arg("k"), py::arg("h"), py::arg("length") = 6)
      .def(
          "orbit",
          [](const PartialAction& a, const std::string& h, std::size_t length) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& e : hyperplane_orbit(a, parse_halfspace(h), length).entries)
              out.emplace_back(to_string(e.image), to_string(e.witness, a.generators()));
            return out;
          },
          py::arg("halfspace"), py::arg("length") = 4)
      .def(
          "pingpong",
          [](const PartialAction& a, const std::vector<std::string>& quad, const std::string& g, const std::string& h,
             long m_max) {
            const auto& gens = a.generators();
            auto cert = pingpong_certify(a, quadruple_of(quad), parse_word(g, gens), parse_word(h, gens), m_max);
            return py::dict(py::arg("ok") = cert.ok, py::arg("delta") = cert.delta,
                            py::arg("failure") = cert.failure, py::arg("text") = cert.text(gens));
          },
          py::arg("quadruple"), py::arg("g"), py::arg("h"), py::arg("m_max") = 3)
      .def(
          "verify",
          [](const PartialAction& a, const std::string& text) {
            auto r = verify_certificate(text, a);
            return py::dict(py::arg("ok") = r.ok, py::arg("kind") = r.kind, py::arg("message") = r.message);
          },
          py::arg("certificate"))
      .def(
          "spectral_series",
          [](const PartialAction& a, const std::string& h, std::uint32_t first, std::uint32_t last, double tol) {
            py::gil_scoped_release release;
            auto sg = build_schreier(a, parse_halfspace(h), last);
            std::vector<double> out;
            for (const auto& p : spectral_series(sg, first, last, tol).points) out.push_back(p.estimate);
            return out;
          },
          py::arg("halfspace"), py::arg("first"), py::arg("last"), py::arg("tol") = 1e-6);

  m.def(
      "report",
      [](const ComplexPtr& hs, const PartialAction* a) { return theorem_b_shape(hs, a).json(); },
      py::arg("complex"), py::arg("action") = nullptr, "Decomposition report as a JSON string");

  auto fx = m.def_submodule("fixtures", "Built-in complexes and actions");
  fx.def("hypercube", [](unsigned n) { return make_complex(fixtures::hypercube(n)); });
  fx.def("grid", [](std::size_t w, std::size_t h) { return make_complex(fixtures::grid(w, h)); });
  fx.def("star", [](std::size_t leaves) { return make_complex(fixtures::star(leaves)); });
  fx.def("free_group_ball", &fixtures::free_group_ball, py::arg("radius"));
  fx.def("integer_grid", &fixtures::integer_grid, py::arg("width"), py::arg("height"));
  fx.def("free_group_times_integer", &fixtures::free_group_times_integer, py::arg("radius"),
               py::arg("path_radius"));
}
