#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nlc/levelset.hpp"
#include "nlc/scenario.hpp"
#include "nlc/suites.hpp"
#include "nlc/systems/maxwell_bloch.hpp"

namespace py = pybind11;
using namespace nlc;

namespace {

Scenario build(const std::string& text, const py::dict& overrides) {
    std::istringstream in(text);
    Scenario s = parse_scenario(in);
    for (const auto& [k, v] : overrides) s.set(py::str(k), py::str(v));
    return s;
}

py::dict run_scenario(const std::string& text, const py::dict& overrides) {
    const SimulationResult r = nlc::simulate(prepare(build(text, overrides)));
    std::stringstream csv;
    write_trajectory_csv(csv, r);
    const CsvTable t = read_csv(csv);
    py::dict out;
    out["columns"] = t.header;
    out["rows"] = t.rows;
    out["termination"] = std::string(to_string(r.trajectory.termination()));
    return out;
}

py::list run_suite(const std::string& suite, std::uint64_t seed, std::optional<double> rtol) {
    suites::SuiteOptions opt;
    opt.seed = seed;
    if (rtol) {
        opt.config.rtol = *rtol;
        opt.config.atol = *rtol * 1e-3;
    }
    py::list out;
    for (const auto& c : suites::run_suite(suite, opt)) {
        py::dict d;
        d["id"] = c.id;
        d["title"] = c.title;
        d["passed"] = c.passed;
        d["detail"] = c.detail;
        d["seconds"] = c.seconds;
        out.append(d);
    }
    return out;
}

py::list level_set(double E, double B, double K, std::array<double, 4> window, std::size_t grid, bool polish,
                   std::optional<std::array<double, 2>> initial) {
    verify::LevelSetOptions opt;
    opt.grid_u = opt.grid_v = grid;
    opt.newton_polish = polish;
    if (initial) opt.initial = verify::Point{(*initial)[0], (*initial)[1]};
    py::list out;
    for (const auto& c : verify::level_set(E, B, K, verify::Window{window[0], window[1], window[2], window[3]}, opt)) {
        std::vector<std::array<double, 2>> pts;
        for (const auto& p : c.vertices) pts.push_back({p.u, p.v});
        py::dict d;
        d["vertices"] = pts;
        d["closed"] = c.closed;
        d["in_stripe"] = c.inside_stripe;
        d["accessible"] = c.accessible();
        out.append(d);
    }
    return out;
}

py::dict first_integrals(std::array<double, 5> x) {
    const auto f = systems::mb_first_integrals(systems::mb_embed(x));
    py::dict d;
    d["E"] = f.E;
    d["B"] = f.B;
    d["J"] = f.J;
    d["K"] = f.K;
    return d;
}

}  // namespace

PYBIND11_MODULE(_nlc, m) {
    m.doc() = "Nonlocal constants of motion for Lagrangian systems";
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("simulate", &run_scenario, py::arg("scenario") = "", py::arg("overrides") = py::dict(),
          "Runs a scenario given as key = value text plus overrides; returns columns, rows and termination.");
    m.def("run_suite", &run_suite, py::arg("suite") = "all", py::arg("seed") = 0, py::arg("rtol") = py::none(),
          "Runs the acceptance criteria of a suite.");
    m.def("criteria_for", [](const std::string& s) { return suites::criteria_for(s); }, py::arg("suite"));
    m.def("level_set", &level_set, py::arg("E"), py::arg("B"), py::arg("K"),
          py::arg("window") = std::array<double, 4>{-4, 4, -6, 6}, py::arg("grid") = 256, py::arg("polish") = false,
          py::arg("initial") = py::none());
    m.def("first_integrals", &first_integrals, py::arg("x"), "E, B, J, K at x = (x1, y1, x2, y2, z).");
    m.def("psi", &systems::mb_psi, py::arg("E"), py::arg("B"), py::arg("u"), py::arg("v"));
    m.def("phi", &systems::mb_phi_quadrature, py::arg("u_from"), py::arg("u_to"), py::arg("E"), py::arg("B"), py::arg("K"));
}
