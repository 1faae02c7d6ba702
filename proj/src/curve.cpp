#include "pmqcc/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmqcc/errors.hpp"
#include "pmqcc/optimizer.hpp"

namespace pmqcc {

RateReport evaluate_protocol(const std::string& protocol, const ProtocolParams& pp, const ChannelParams& ch,
                             Boundaries boundaries, DecoyBounds* bounds) {
    if (protocol == "pmqcc") {
        return rate_pmqcc(pp, ch);
    }
    if (protocol == "pmqcc-star") {
        return rate_pmqcc_star(pp, ch);
    }
    if (protocol == "reduced") {
        return rate_reduced(pp, ch, boundaries);
    }
    if (protocol == "decoy-lower") {
        return rate_lower(pp, ch, bounds);
    }
    throw ConfigError("unknown protocol '" + protocol + "'");
}

CurveOptimization curve_optimization_from_string(const std::string& name) {
    if (name == "none") {
        return CurveOptimization::none;
    }
    if (name == "signal") {
        return CurveOptimization::signal;
    }
    if (name == "signal+decoys") {
        return CurveOptimization::signal_and_decoys;
    }
    throw ConfigError("unknown optimization mode '" + name + "'");
}

std::vector<double> curve_distances(const CurveSpec& spec) {
    if (!(spec.l_min >= 0.0) || !(spec.l_min <= spec.l_max) || !(spec.l_step > 0.0)) {
        throw ConfigError("curve needs 0 <= l-min <= l-max and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((spec.l_max - spec.l_min) / spec.l_step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = spec.l_min + static_cast<double>(i) * spec.l_step;
    }
    return out;
}

namespace {

Objective signal_objective(const std::string& protocol) {
    if (protocol == "pmqcc-star") {
        return Objective::pmqcc_star;
    }
    if (protocol == "reduced") {
        return Objective::reduced;
    }
    return Objective::pmqcc;
}

CurveRow curve_point(const RunConfig& config, const CurveSpec& spec, double distance) {
    ChannelParams ch = config.channel;
    ch.distance_km = distance;
    ProtocolParams pp = config.protocol;
    if (spec.optimize != CurveOptimization::none) {
        const auto best = optimize_signal(ch, pp, signal_objective(spec.protocol), config.boundaries);
        pp.signal_intensity = best.best_params.signal_intensity;
        pp.slice_count = best.best_params.slice_count;
    }
    if (spec.optimize == CurveOptimization::signal_and_decoys && spec.protocol == "decoy-lower") {
        pp.decoy_intensities = optimize_decoys(ch, pp).best_params.decoy_intensities;
    }
    const auto report = evaluate_protocol(spec.protocol, pp, ch, config.boundaries);
    CurveRow row;
    row.distance_km = distance;
    row.rate = report.rate;
    row.gain = report.gain;
    row.qber_max = report.marginal_qbers.empty()
                       ? 0.0
                       : *std::max_element(report.marginal_qbers.begin(), report.marginal_qbers.end());
    row.phase_error = report.phase_error;
    row.mu = pp.signal_intensity;
    row.slices = pp.slice_count;
    row.flag = report.rate > 0.0 ? "ok" : "zero_rate";
    return row;
}

}  // namespace

std::vector<CurveRow> compute_curve(const RunConfig& config, const CurveSpec& spec) {
    if (spec.protocol != "pmqcc" && spec.protocol != "pmqcc-star" && spec.protocol != "reduced" &&
        spec.protocol != "decoy-lower") {
        throw ConfigError("unknown protocol '" + spec.protocol + "'");
    }
    std::vector<CurveRow> rows;
    for (const double distance : curve_distances(spec)) {
        try {
            rows.push_back(curve_point(config, spec, distance));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            CurveRow failed;
            failed.distance_km = distance;
            failed.mu = config.protocol.signal_intensity;
            failed.slices = config.protocol.slice_count;
            failed.flag = "failed";
            rows.push_back(failed);
        }
    }
    return rows;
}

}  // namespace pmqcc
