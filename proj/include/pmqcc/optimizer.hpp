#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pmqcc/core_model.hpp"
#include "pmqcc/keyrate.hpp"
#include "pmqcc/yield_oracle.hpp"

namespace pmqcc {

enum class Objective { pmqcc, pmqcc_star, reduced };

std::string to_string(Objective objective);
Objective objective_from_string(const std::string& name);

struct TracePoint {
    ProtocolParams params;
    double rate = 0.0;
};

struct OptimizationResult {
    ProtocolParams best_params;
    double best_rate = 0.0;
    /// Full report of the rate pipeline at best_params.
    RateReport best_report;
    std::uint64_t evaluations = 0;
    /// Set when no positive rate was found; best_params then echoes the input.
    bool zero_rate = false;
    std::vector<TracePoint> trace;
};

struct SignalSearch {
    double mu_min = 1e-3;
    double mu_max = 1.0;
    int mu_grid_points = 64;
    double mu_tolerance = 1e-5;
    int slices_min = 4;
    int slices_max = 64;
    bool record_trace = false;
};

/// Maximizes the rate over (mu, M) for a fixed channel.
///
/// `base` supplies N, f and the PM-QCC* misalignment; for pmqcc_star the slice
/// count is left untouched because it does not enter the rate.
OptimizationResult optimize_signal(const ChannelParams& ch, const ProtocolParams& base, Objective objective,
                                   Boundaries boundaries = {}, const SignalSearch& search = {});

struct DecoySearch {
    /// Per-decoy (lower, upper) box; empty means [1e-6, mu] for every decoy.
    std::vector<std::pair<double, double>> box;
    std::vector<std::uint64_t> restart_seeds{1, 2, 3};
    /// Optional extra starting point tried before the seeded restarts.
    std::vector<double> initial;
    double initial_step = 1.0;
    double step_tolerance = 1e-4;
    std::uint64_t max_evaluations = 20000;
    bool record_trace = false;
};

/// Maximizes the decoy lower-bound rate over n_cut+1 nonzero decoys (plus vacuum)
/// at fixed signal intensity and slice count, by log-space coordinate descent.
/// Infeasible or degenerate points count as rate 0.
OptimizationResult optimize_decoys(const ChannelParams& ch, const ProtocolParams& base,
                                   const DecoySearch& search = {});

}  // namespace pmqcc
