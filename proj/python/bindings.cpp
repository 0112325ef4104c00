#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlsh/errors.hpp"
#include "nlsh/mixedpow.hpp"
#include "nlsh/scenario.hpp"

namespace py = pybind11;
using namespace nlsh;

namespace {

IndexPair to_pair(const std::pair<cplx, cplx>& p) { return {p.first, p.second}; }
std::pair<cplx, cplx> from_pair(const IndexPair& p) { return {p.a, p.b}; }

std::string report_json(const std::string& text, std::optional<std::uint64_t> seed, std::optional<double> tol,
                        std::optional<double> hbar) {
  const auto s = cli::Scenario::parse(text, {.seed = seed, .tol = tol, .hbar = hbar});
  py::gil_scoped_release release;
  return cli::report_text(cli::make_report(s, s.run()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mixed powers, index pairs and scenario checks";

  static py::exception<Error> base(m, "NlshError", PyExc_RuntimeError);
  static py::exception<cli::ScenarioError> scenario(m, "ScenarioError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const cli::ScenarioError& e) {
      py::set_error(scenario, (e.pointer() + ": " + e.what()).c_str());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("mixed_power", [](cplx z, std::pair<cplx, cplx> idx) { return mixed_power(z, to_pair(idx)); },
        py::arg("z"), py::arg("index"), "z^(a,b) for index = (a, b).");
  m.def("pair_product",
        [](std::pair<cplx, cplx> p, std::pair<cplx, cplx> q) { return from_pair(pair_product(to_pair(p), to_pair(q))); },
        py::arg("p"), py::arg("q"));
  m.def("pair_bracket",
        [](std::pair<cplx, cplx> p, std::pair<cplx, cplx> q) { return from_pair(pair_bracket(to_pair(p), to_pair(q))); },
        py::arg("p"), py::arg("q"));
  m.def("pair_action", [](std::pair<cplx, cplx> idx, cplx z) { return pair_action(to_pair(idx), z); },
        py::arg("index"), py::arg("z"));
  m.def("matrix_rep", [](std::pair<cplx, cplx> idx) { return matrix_rep(to_pair(idx)).m; }, py::arg("index"));

  m.def("list_checks", [] {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& c : cli::check_catalog()) out.emplace_back(c.name, c.anchor, c.summary);
    return out;
  });
  m.def("bundled_scenarios", &cli::bundled_scenarios);
  m.def("bundled_scenario", &cli::bundled_scenario, py::arg("name"));
  m.def("run_scenario", &report_json, py::arg("text"), py::kw_only(), py::arg("seed") = py::none(),
        py::arg("tol") = py::none(), py::arg("hbar") = py::none(), "Runs a scenario; returns the JSON report text.");
  m.attr("__version__") = cli::tool_version();
}
