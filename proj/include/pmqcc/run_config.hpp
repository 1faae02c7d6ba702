#pragma once

#include <string>

#include "json.hpp"

#include "pmqcc/core_model.hpp"
#include "pmqcc/montecarlo.hpp"
#include "pmqcc/yield_oracle.hpp"

namespace pmqcc {

/// Everything a run configuration file can set.
struct RunConfig {
    ProtocolParams protocol;
    ChannelParams channel;
    Boundaries boundaries;
    SimConfig simulation;
};

/// Builds a RunConfig from a JSON object. Unknown keys, wrong types and
/// out-of-range values raise ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Reads and parses a configuration file; I/O and syntax failures raise ConfigError.
RunConfig load_run_config(const std::string& path);

}  // namespace pmqcc
