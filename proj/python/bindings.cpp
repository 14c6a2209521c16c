#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fabric/cli.hpp"
#include "fabric/dataset.hpp"
#include "fabric/error.hpp"
#include "fabric/lifecycle.hpp"
#include "fabric/report.hpp"
#include "fabric/scenario.hpp"

namespace py = pybind11;
using namespace fabric;

namespace {

EngineConfig make_config(std::optional<std::string> region, std::optional<int> year,
                         std::optional<double> duty, std::optional<double> pue) {
  EngineConfig c;
  c.region = std::move(region);
  c.year = year;
  c.duty = duty;
  c.pue = pue;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Biodiversity impact engine (native core)";

  // Translators run newest first, so the base class is registered first.
  auto base = py::register_exception<Error>(m, "FabricError");
  py::register_exception<DatasetError>(m, "DatasetError", base.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());
  py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());

  py::class_<DatasetBundle>(m, "Bundle")
      .def_readonly("name", &DatasetBundle::name)
      .def_readonly("edition", &DatasetBundle::edition)
      .def_readonly("version", &DatasetBundle::version)
      .def("device_ids",
           [](const DatasetBundle& b) {
             std::vector<std::string> ids;
             for (const auto& [id, _] : b.devices) ids.push_back(id);
             return ids;
           })
      .def("system_ids", [](const DatasetBundle& b) {
        std::vector<std::string> ids;
        for (const auto& [id, _] : b.systems) ids.push_back(id);
        return ids;
      });

  m.def("load_bundle", [](const std::string& dir) { return load_bundle(dir); }, py::arg("dir"));

  m.def(
      "device_report_json",
      [](const DatasetBundle& b, const std::string& id, std::optional<std::string> region,
         std::optional<int> year, std::optional<double> duty) {
        Engine engine(b, make_config(std::move(region), year, duty, std::nullopt));
        return report_json(engine.device_report(id));
      },
      py::arg("bundle"), py::arg("device"), py::arg("region") = py::none(), py::arg("year") = py::none(),
      py::arg("duty") = py::none());

  m.def(
      "system_report_json",
      [](const DatasetBundle& b, const std::string& id, std::optional<std::string> region,
         std::optional<int> year, std::optional<double> duty, std::optional<double> years,
         std::optional<double> pue) {
        Engine engine(b, make_config(std::move(region), year, duty, pue));
        return report_json(engine.system_rollup(id, years));
      },
      py::arg("bundle"), py::arg("system"), py::arg("region") = py::none(), py::arg("year") = py::none(),
      py::arg("duty") = py::none(), py::arg("years") = py::none(), py::arg("pue") = py::none());

  m.def(
      "fleet_per_year",
      [](const DatasetBundle& b, const std::string& id, double count, std::optional<double> duty) {
        Engine engine(b, make_config(std::nullopt, std::nullopt, duty, std::nullopt));
        return fleet_projection(engine.system_rollup(id), count);
      },
      py::arg("bundle"), py::arg("system"), py::arg("count"), py::arg("duty") = py::none());

  m.def(
      "workload_json",
      [](const DatasetBundle& b, const std::string& scenario_path) {
        const auto s = load_scenario(scenario_path, b);
        Engine engine(b, s.config);
        return render_workloads(compare_workloads(engine, s), b.version, OutputFormat::Json);
      },
      py::arg("bundle"), py::arg("scenario"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
