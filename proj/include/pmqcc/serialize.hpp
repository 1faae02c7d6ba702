#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pmqcc/core_model.hpp"
#include "pmqcc/curve.hpp"
#include "pmqcc/decoy.hpp"
#include "pmqcc/keyrate.hpp"
#include "pmqcc/montecarlo.hpp"
#include "pmqcc/optimizer.hpp"

namespace pmqcc {

/// Scientific notation with 12 significant digits; non-finite values become "null".
std::string format_number(double x);

/// Pretty-prints JSON with floats rendered by format_number, so output is byte-stable.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

nlohmann::json to_json(const ProtocolParams& pp);
nlohmann::json to_json(const ChannelParams& ch);
nlohmann::json to_json(const RateReport& report);
nlohmann::json to_json(const DecoyBounds& bounds);
nlohmann::json to_json(const OptimizationResult& result);
nlohmann::json to_json(const SimComparison& comparison);
nlohmann::json to_json(const EmpiricalEstimate& est);

/// Pattern label such as "LR": one letter per branch, R meaning the right port fired.
std::string pattern_label(unsigned pattern, int branches);

/// Tally with the configuration echo and seed.
nlohmann::json tally_json(const SimTally& tally, const ProtocolParams& pp, const ChannelParams& ch,
                          const SimConfig& sc);

inline constexpr const char* kCurveHeader = "L_km,rate,gain,qber_max,phase_error,mu,M,flag";

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);
/// Parses CSV produced by write_curve_csv; throws ConfigError on a malformed file.
std::vector<CurveRow> read_curve_csv(std::istream& in);

}  // namespace pmqcc
