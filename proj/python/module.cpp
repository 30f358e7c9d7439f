#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopf/analysis.hpp"

namespace py = pybind11;

namespace {

hopf::ProblemSpec spec_from_json(const std::string& text, int order) {
    hopf::ProblemSpec spec = hopf::parse_problem(text, "<problem>");
    if (order != 0) {
        if (order < 1 || order > 4) throw hopf::schema_error("level must be 1..4");
        spec.level = order;
    }
    return spec;
}

std::string analyze_json(const std::string& problem_json, int order) {
    hopf::AnalysisReport rep = hopf::analyze(spec_from_json(problem_json, order));
    return hopf::emit_report(rep, hopf::report_format::json);
}

std::string analyze_file(const std::string& path, int order) {
    hopf::ProblemSpec spec = hopf::load_problem(path);
    if (order != 0) spec.level = order;
    hopf::AnalysisReport rep = hopf::analyze(spec);
    return hopf::emit_report(rep, hopf::report_format::json);
}

std::string sweep_json(const std::string& problem_json, const std::string& parameter, double from,
                       double to, int steps, const std::string& locate, bool independent,
                       int order) {
    hopf::SweepResult res = hopf::sweep(spec_from_json(problem_json, order), parameter, from, to,
                                        steps, locate, independent);
    return hopf::emit_sweep(res, hopf::report_format::json);
}

std::string transversality_json(const std::string& problem_json, int order) {
    hopf::TransversalityReport rep = hopf::run_transversality(spec_from_json(problem_json, order));
    return hopf::emit_transversality(rep, hopf::report_format::json);
}

std::string check_json(const std::string& problem_json, int order) {
    hopf::CheckResult res = hopf::check_problem(spec_from_json(problem_json, order));
    return hopf::emit_check(res);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lyapunov coefficients l1..l4 at Hopf equilibria of smooth vector fields";

    py::register_exception<hopf::error>(m, "HopfError");

    m.def("analyze_json", &analyze_json, py::arg("problem_json"), py::arg("order") = 0,
          "Run the full analysis on a JSON problem document; returns the JSON report.");
    m.def("analyze_file", &analyze_file, py::arg("path"), py::arg("order") = 0,
          "Run the full analysis on a problem file; returns the JSON report.");
    m.def("sweep_json", &sweep_json, py::arg("problem_json"), py::arg("parameter"),
          py::arg("from_value"), py::arg("to_value"), py::arg("steps"), py::arg("locate") = "",
          py::arg("independent") = false, py::arg("order") = 0,
          "Parameter sweep; returns one JSON object per line.");
    m.def("transversality_json", &transversality_json, py::arg("problem_json"),
          py::arg("order") = 0, "Finite-difference rank report of mu -> (eta, l1, ...).");
    m.def("check_json", &check_json, py::arg("problem_json"), py::arg("order") = 0,
          "Analyze plus the invariant suite; returns the check transcript.");
}
