#include "pmqcc/commands.hpp"

#include "pmqcc/errors.hpp"
#include "pmqcc/keyrate.hpp"
#include "pmqcc/montecarlo.hpp"
#include "pmqcc/optimizer.hpp"
#include "pmqcc/serialize.hpp"

namespace pmqcc {

using nlohmann::json;

json rate_document(const RunConfig& config, const std::string& protocol) {
    DecoyBounds bounds;
    const auto report = evaluate_protocol(protocol, config.protocol, config.channel, config.boundaries, &bounds);
    json doc = {{"report", to_json(report)},
                {"protocol_params", to_json(config.protocol)},
                {"channel", to_json(config.channel)}};
    if (protocol == "decoy-lower") {
        doc["decoy_bounds"] = to_json(bounds);
    }
    return doc;
}

json simulate_document(const RunConfig& config, unsigned workers) {
    auto sc = config.simulation;
    sc.workers = workers;
    const auto tally = run_rounds(config.protocol, config.channel, sc);
    return {{"tally", tally_json(tally, config.protocol, config.channel, sc)},
            {"estimate", to_json(estimate(tally))},
            {"comparison", to_json(compare_to_analytic(config.protocol, config.channel, sc, tally))}};
}

json optimize_document(const RunConfig& config, const std::string& target, const std::string& protocol,
                       bool trace) {
    OptimizationResult result;
    if (target == "signal") {
        SignalSearch search;
        search.record_trace = trace;
        result = optimize_signal(config.channel, config.protocol, objective_from_string(protocol),
                                 config.boundaries, search);
    } else if (target == "decoys") {
        DecoySearch search;
        search.record_trace = trace;
        result = optimize_decoys(config.channel, config.protocol, search);
    } else {
        throw ConfigError("unknown optimization target '" + target + "'");
    }
    return to_json(result);
}

json fit_document(const std::vector<CurveRow>& rows, double l_min, double l_max) {
    std::vector<std::pair<double, double>> points;
    for (const auto& row : rows) {
        if (row.distance_km >= l_min && row.distance_km <= l_max) {
            points.emplace_back(row.distance_km, row.rate);
        }
    }
    const double slope = scaling_exponent(points);
    return {{"slope_decades_per_km", slope}, {"points", points.size()}};
}

}  // namespace pmqcc
