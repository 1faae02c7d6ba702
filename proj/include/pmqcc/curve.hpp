#pragma once

#include <string>
#include <vector>

#include "pmqcc/decoy.hpp"
#include "pmqcc/keyrate.hpp"
#include "pmqcc/run_config.hpp"

namespace pmqcc {

/// Evaluates one of: pmqcc, pmqcc-star, reduced, decoy-lower.
RateReport evaluate_protocol(const std::string& protocol, const ProtocolParams& pp, const ChannelParams& ch,
                             Boundaries boundaries = {}, DecoyBounds* bounds = nullptr);

enum class CurveOptimization { none, signal, signal_and_decoys };

CurveOptimization curve_optimization_from_string(const std::string& name);

struct CurveSpec {
    double l_min = 0.0;
    double l_max = 0.0;
    double l_step = 10.0;
    std::string protocol = "pmqcc";
    CurveOptimization optimize = CurveOptimization::none;
};

struct CurveRow {
    double distance_km = 0.0;
    double rate = 0.0;
    double gain = 0.0;
    double qber_max = 0.0;
    double phase_error = 0.0;
    double mu = 0.0;
    int slices = 0;
    /// ok, zero_rate or failed.
    std::string flag = "ok";
};

/// Distances l_min, l_min + step, ... up to l_max inclusive.
std::vector<double> curve_distances(const CurveSpec& spec);

/// One row per distance, in order. A point whose computation throws is kept
/// as a row flagged "failed" instead of aborting the curve.
std::vector<CurveRow> compute_curve(const RunConfig& config, const CurveSpec& spec);

}  // namespace pmqcc
