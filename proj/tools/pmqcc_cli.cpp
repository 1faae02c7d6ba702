#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pmqcc/commands.hpp"
#include "pmqcc/curve.hpp"
#include "pmqcc/errors.hpp"
#include "pmqcc/montecarlo.hpp"
#include "pmqcc/optimizer.hpp"
#include "pmqcc/run_config.hpp"
#include "pmqcc/serialize.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitComputation = 3;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw pmqcc::ConfigError("cannot write '" + out_path + "'");
    }
    out << text;
}

int report_error(const std::string& kind, const std::string& message, int code) {
    std::cout << pmqcc::dump_json({{"error", {{"kind", kind}, {"message", message}}}});
    return code;
}

std::string run_curve(const pmqcc::RunConfig& cfg, const pmqcc::CurveSpec& spec) {
    std::ostringstream out;
    pmqcc::write_curve_csv(out, pmqcc::compute_curve(cfg, spec));
    return out.str();
}

std::string run_fit(const std::string& csv_path, double l_min, double l_max) {
    std::ifstream in(csv_path);
    if (!in) {
        throw pmqcc::ConfigError("cannot open '" + csv_path + "'");
    }
    return pmqcc::dump_json(pmqcc::fit_document(pmqcc::read_curve_csv(in), l_min, l_max));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Key-rate analysis for phase-matching quantum conference key agreement"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", out_path, "Write output to this file instead of stdout");
    };

    std::string protocol = "pmqcc";
    const std::vector<std::string> protocols{"pmqcc", "pmqcc-star", "reduced", "decoy-lower"};
    auto* rate = app.add_subcommand("rate", "Single-point key rate with all intermediate quantities (JSON)");
    add_common(rate);
    rate->add_option("--protocol", protocol, "Rate pipeline")->check(CLI::IsMember(protocols));

    pmqcc::CurveSpec curve_spec;
    std::string optimize_mode = "none";
    auto* curve = app.add_subcommand("curve", "Rate versus distance (CSV)");
    add_common(curve);
    curve->add_option("--l-min", curve_spec.l_min, "First distance in km")->required();
    curve->add_option("--l-max", curve_spec.l_max, "Last distance in km")->required();
    curve->add_option("--l-step", curve_spec.l_step, "Distance step in km");
    curve->add_option("--protocol", curve_spec.protocol, "Rate pipeline")->check(CLI::IsMember(protocols));
    curve->add_option("--optimize", optimize_mode, "Per-point optimization")
        ->check(CLI::IsMember({"none", "signal", "signal+decoys"}));

    unsigned workers = 1;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run with analytic comparison (JSON)");
    add_common(simulate);
    simulate->add_option("--workers", workers, "Worker threads (0 = all cores); does not affect results");

    std::string target = "signal";
    std::string objective = "pmqcc";
    bool trace = false;
    auto* optimize = app.add_subcommand("optimize", "Rate-maximizing parameters (JSON)");
    add_common(optimize);
    optimize->add_option("--target", target, "What to optimize")->check(CLI::IsMember({"signal", "decoys"}));
    optimize->add_option("--protocol", objective, "Objective for --target signal")
        ->check(CLI::IsMember({"pmqcc", "pmqcc-star", "reduced"}));
    optimize->add_flag("--trace", trace, "Include every evaluated point");

    std::string csv_path;
    double fit_min = 0.0;
    double fit_max = 1e300;
    auto* fit = app.add_subcommand("fit", "Slope of log10(rate) against distance from a curve CSV");
    fit->add_option("csv", csv_path, "Curve CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--l-min", fit_min, "Lower distance limit");
    fit->add_option("--l-max", fit_max, "Upper distance limit");
    fit->add_option("--out", out_path, "Write output to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*fit) {
            emit(run_fit(csv_path, fit_min, fit_max), out_path);
            return 0;
        }
        const auto cfg = pmqcc::load_run_config(config_path);
        if (*rate) {
            emit(pmqcc::dump_json(pmqcc::rate_document(cfg, protocol)), out_path);
        } else if (*curve) {
            curve_spec.optimize = pmqcc::curve_optimization_from_string(optimize_mode);
            emit(run_curve(cfg, curve_spec), out_path);
        } else if (*simulate) {
            emit(pmqcc::dump_json(pmqcc::simulate_document(cfg, workers)), out_path);
        } else if (*optimize) {
            emit(pmqcc::dump_json(pmqcc::optimize_document(cfg, target, objective, trace)), out_path);
        }
    } catch (const pmqcc::ConfigError& e) {
        return report_error("config", e.what(), kExitConfig);
    } catch (const pmqcc::InsufficientDecoysError& e) {
        return report_error("insufficient_decoys", e.what(), kExitComputation);
    } catch (const pmqcc::DegenerateGeometryError& e) {
        return report_error("degenerate_geometry", e.what(), kExitComputation);
    } catch (const pmqcc::InsufficientDataError& e) {
        return report_error("insufficient_data", e.what(), kExitComputation);
    } catch (const pmqcc::ResourceError& e) {
        return report_error("resource", e.what(), kExitComputation);
    } catch (const std::exception& e) {
        return report_error("computation", e.what(), kExitComputation);
    }
    return 0;
}
