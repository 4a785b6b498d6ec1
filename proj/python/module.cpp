#include "specurve/charts.hpp"
#include "specurve/engine.hpp"
#include "specurve/errors.hpp"
#include "specurve/results.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace specurve;

namespace {

Dataset dataset_from_dict(const py::dict& columns) {
    std::vector<Column> cols;
    for (const auto& [key, value] : columns) {
        cols.push_back({py::cast<std::string>(key), py::cast<std::vector<double>>(value)});
    }
    return Dataset(std::move(cols));
}

}  // namespace

PYBIND11_MODULE(_specurve, m) {
    m.doc() = "Specification curve analysis";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_IOError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::enum_<Estimator>(m, "Estimator").value("ols", Estimator::ols).value("logistic", Estimator::logistic);
    py::enum_<OutcomeMode>(m, "OutcomeMode")
        .value("single_y", OutcomeMode::single_y)
        .value("multi_y", OutcomeMode::multi_y);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("data_path", &RunConfig::data_path)
        .def_readwrite("y_cols", &RunConfig::y_cols)
        .def_readwrite("x_cols", &RunConfig::x_cols)
        .def_readwrite("z_cols", &RunConfig::z_cols)
        .def_readwrite("group", &RunConfig::group)
        .def_readwrite("estimator", &RunConfig::estimator)
        .def_readwrite("mode", &RunConfig::mode)
        .def_readwrite("draws", &RunConfig::draws)
        .def_readwrite("kfold", &RunConfig::kfold)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("ci", &RunConfig::ci)
        .def_readwrite("n_cpu", &RunConfig::n_cpu)
        .def_readwrite("threshold", &RunConfig::threshold)
        .def_property(
            "oos_metric", [](const RunConfig& c) { return std::string(to_string(c.oos_metric)); },
            [](RunConfig& c, const std::string& s) { c.oos_metric = parse_oos_metric(s); });

    py::class_<StoufferResult>(m, "StoufferResult")
        .def_readonly("z", &StoufferResult::z)
        .def_readonly("p", &StoufferResult::p);

    py::class_<CurveResults>(m, "CurveResults")
        .def_property_readonly("n_specs", [](const CurveResults& r) { return r.space.size(); })
        .def_property_readonly("estimates", &CurveResults::estimates)
        .def_property_readonly("pvalues", &CurveResults::pvalues)
        .def_property_readonly("oos_averages", &CurveResults::oos_averages)
        .def_property_readonly("z_subsets",
                               [](const CurveResults& r) {
                                   std::vector<std::vector<std::string>> out;
                                   for (const auto& s : r.space.specs) out.push_back(s.z_subset);
                                   return out;
                               })
        .def_property_readonly("draws", [](const CurveResults& r) { return r.boot.estimates; })
        .def_property_readonly("null_pvalues", [](const CurveResults& r) { return r.inference.null_pvals; })
        .def_property_readonly("stouffer", [](const CurveResults& r) { return r.inference.stouffer; })
        .def_property_readonly("bma_weights", [](const CurveResults& r) { return r.bma.weights; })
        .def_property_readonly("shap", [](const CurveResults& r) -> py::object {
            if (!r.shap) return py::none();
            return py::make_tuple(r.shap->phi, r.shap->test_features, r.shap->feature_names);
        })
        .def_property_readonly("warnings", [](const CurveResults& r) { return r.diagnostics.warnings; })
        .def_readonly("timings", &CurveResults::timings)
        .def("summary", &summary)
        .def("to_json", &to_json)
        .def("export", &export_results, py::arg("dir"))
        .def(
            "charts",
            [](const CurveResults& r, const std::filesystem::path& dir, bool loess, double ci) {
                ChartOptions o;
                o.loess = loess;
                o.ci = ci;
                return emit_charts(r, o, dir);
            },
            py::arg("dir"), py::arg("loess") = false, py::arg("ci") = 1.0);

    m.def(
        "run",
        [](const RunConfig& c, const py::object& data) {
            if (data.is_none()) {
                py::gil_scoped_release release;
                return run(c);
            }
            const Dataset ds = dataset_from_dict(data.cast<py::dict>());
            py::gil_scoped_release release;
            return run(c, ds);
        },
        py::arg("config"), py::arg("data") = py::none(),
        "Run the analysis on `data` (dict of column name -> sequence of float) or on config.data_path.");

    m.def(
        "synthetic",
        [](std::size_t n_rows, std::size_t n_controls, double beta, bool binary, std::uint64_t seed) {
            const auto ds = synthetic_dataset({n_rows, n_controls, beta, binary, seed});
            py::dict out;
            for (const auto& c : ds.columns()) out[py::str(c.name)] = c.values;
            return out;
        },
        py::arg("n_rows") = 100, py::arg("n_controls") = 4, py::arg("beta") = 2.0, py::arg("binary") = false,
        py::arg("seed") = 0);

    m.def("load_results", [](const std::filesystem::path& p) { return load_results(p); });
    m.def("concat", &concat_results);
    m.def("stouffer", [](const std::vector<double>& p) { return stouffer(p); });
}
