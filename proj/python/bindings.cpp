#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pmqcc/commands.hpp"
#include "pmqcc/curve.hpp"
#include "pmqcc/errors.hpp"
#include "pmqcc/keyrate.hpp"
#include "pmqcc/run_config.hpp"
#include "pmqcc/serialize.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

pmqcc::RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw pmqcc::ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    return pmqcc::parse_run_config(doc);
}

json curve_rows(const std::vector<pmqcc::CurveRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"L_km", r.distance_km},
                       {"rate", r.rate},
                       {"gain", r.gain},
                       {"qber_max", r.qber_max},
                       {"phase_error", r.phase_error},
                       {"mu", r.mu},
                       {"M", r.slices},
                       {"flag", r.flag}});
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_pmqcc, m) {
    m.doc() = "Key-rate analysis for phase-matching quantum conference key agreement";

    py::register_exception<pmqcc::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<pmqcc::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<pmqcc::ResourceError>(m, "ResourceError", PyExc_RuntimeError);
    py::register_exception<pmqcc::DegenerateGeometryError>(m, "DegenerateGeometryError", PyExc_RuntimeError);
    py::register_exception<pmqcc::InsufficientDecoysError>(m, "InsufficientDecoysError", PyExc_RuntimeError);
    py::register_exception<pmqcc::InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);

    m.def(
        "rate",
        [](const std::string& config, const std::string& protocol) {
            const auto cfg = parse_config(config);
            py::gil_scoped_release release;
            return pmqcc::dump_json(pmqcc::rate_document(cfg, protocol));
        },
        py::arg("config"), py::arg("protocol") = "pmqcc");

    m.def(
        "curve",
        [](const std::string& config, double l_min, double l_max, double l_step, const std::string& protocol,
           const std::string& optimize) {
            const auto cfg = parse_config(config);
            pmqcc::CurveSpec spec;
            spec.l_min = l_min;
            spec.l_max = l_max;
            spec.l_step = l_step;
            spec.protocol = protocol;
            spec.optimize = pmqcc::curve_optimization_from_string(optimize);
            py::gil_scoped_release release;
            return pmqcc::dump_json(curve_rows(pmqcc::compute_curve(cfg, spec)));
        },
        py::arg("config"), py::arg("l_min"), py::arg("l_max"), py::arg("l_step") = 10.0,
        py::arg("protocol") = "pmqcc", py::arg("optimize") = "none");

    m.def(
        "curve_csv",
        [](const std::string& rows_json) {
            std::vector<pmqcc::CurveRow> rows;
            for (const auto& r : json::parse(rows_json)) {
                rows.push_back({r.at("L_km"), r.at("rate").is_null() ? 0.0 : r.at("rate").get<double>(),
                                r.at("gain").is_null() ? 0.0 : r.at("gain").get<double>(),
                                r.at("qber_max").is_null() ? 0.0 : r.at("qber_max").get<double>(),
                                r.at("phase_error").is_null() ? 0.0 : r.at("phase_error").get<double>(),
                                r.at("mu"), r.at("M"), r.at("flag")});
            }
            std::ostringstream out;
            pmqcc::write_curve_csv(out, rows);
            return out.str();
        },
        py::arg("rows"));

    m.def(
        "simulate",
        [](const std::string& config, unsigned workers) {
            const auto cfg = parse_config(config);
            py::gil_scoped_release release;
            return pmqcc::dump_json(pmqcc::simulate_document(cfg, workers));
        },
        py::arg("config"), py::arg("workers") = 1u);

    m.def(
        "optimize",
        [](const std::string& config, const std::string& target, const std::string& protocol, bool trace) {
            const auto cfg = parse_config(config);
            py::gil_scoped_release release;
            return pmqcc::dump_json(pmqcc::optimize_document(cfg, target, protocol, trace));
        },
        py::arg("config"), py::arg("target") = "signal", py::arg("protocol") = "pmqcc", py::arg("trace") = false);

    m.def(
        "scaling_exponent",
        [](const std::vector<std::pair<double, double>>& points) { return pmqcc::scaling_exponent(points); },
        py::arg("points"));
}
