// Python bindings. Reports cross the boundary as JSON text; the package
// wrapper in cismodel/__init__.py turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cismodel/design_io.hpp"
#include "cismodel/error.hpp"
#include "cismodel/oracle.hpp"
#include "cismodel/report.hpp"

namespace py = pybind11;

namespace {

std::string check_json(const std::string& text) {
  const cis::Design d = cis::load_design(text);
  const cis::CheckReport checks = cis::run_checks(d);
  std::vector<cis::StallCause> stalls;
  if (checks.passed()) stalls = cis::simulate_digital(d.graph, d.hardware, d.mapping).stalls;
  return cis::emit_checks(checks, stalls, cis::Format::Json);
}

std::string run_report(const std::string& text, double fps, const std::string& format) {
  return cis::emit(cis::run(cis::load_design(text), fps), cis::format_from_string(format));
}

std::string sweep_report(const std::vector<std::pair<std::string, std::string>>& docs, double fps,
                         const std::string& format) {
  return cis::emit(cis::sweep(docs, fps), cis::format_from_string(format));
}

std::vector<std::string> verify(const std::string& text) {
  return cis::cross_check(cis::load_design(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy model for computational image sensors";

  auto model_error = py::register_exception<cis::ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<cis::ParseError>(m, "ParseError", model_error.ptr());
  py::register_exception<cis::DigitalTooSlowError>(m, "DigitalTooSlowError", model_error.ptr());

  m.def("check", &check_json, py::arg("text"),
        "Validate a design document; returns checks and stalls as JSON.");
  m.def("run", &run_report, py::arg("text"), py::arg("fps"), py::arg("format") = "json",
        "Per-frame energy report for one design document.");
  m.def("sweep", &sweep_report, py::arg("documents"), py::arg("fps"), py::arg("format") = "json",
        "Evaluate (label, text) pairs and normalize to the first.");
  m.def("verify", &verify, py::arg("text"),
        "Count mismatches between the analytical model and the oracle replay.");
  m.def("validate", [](const std::string& text) { (void)cis::load_design(text); },
        py::arg("text"), "Parse and schema-check a design document.");
}
