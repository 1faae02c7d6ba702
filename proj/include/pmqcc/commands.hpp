#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pmqcc/curve.hpp"
#include "pmqcc/run_config.hpp"

namespace pmqcc {

/// Single-point rate for `protocol` (pmqcc, pmqcc-star, reduced, decoy-lower)
/// with the inputs echoed back.
nlohmann::json rate_document(const RunConfig& config, const std::string& protocol);

/// Monte Carlo tally, empirical estimate and analytic comparison.
nlohmann::json simulate_document(const RunConfig& config, unsigned workers);

/// Optimization over the signal (`target` = "signal") or the decoy ladder ("decoys").
nlohmann::json optimize_document(const RunConfig& config, const std::string& target, const std::string& protocol,
                                 bool trace);

/// Slope of log10(rate) over the rows with l_min <= L <= l_max.
nlohmann::json fit_document(const std::vector<CurveRow>& rows, double l_min, double l_max);

}  // namespace pmqcc
