#include "pmqcc/run_config.hpp"

#include <cstdint>
#include <fstream>
#include <set>
#include <type_traits>

#include "pmqcc/errors.hpp"

namespace pmqcc {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "parties", "distance_km", "alpha_db_per_km", "detector_efficiency", "dark_count",
    "f",       "slices",      "mu",              "decoys",              "signal_phase_misalignment",
    "boundaries", "seed",     "rounds",          "mode",                "reference_offsets",
    "slice_adjust",
};

double number(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) {
        throw ConfigError(std::string("'") + key + "' must be a number");
    }
    return v.get<double>();
}

template <typename Int>
Int integer(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(std::string("'") + key + "' must be an integer");
    }
    if (std::is_unsigned_v<Int> && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
        throw ConfigError(std::string("'") + key + "' must be non-negative");
    }
    return v.get<Int>();
}

std::vector<double> number_array(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_array()) {
        throw ConfigError(std::string("'") + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) {
            throw ConfigError(std::string("'") + key + "' must be an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    for (const auto& item : doc.items()) {
        if (!kKnownKeys.contains(item.key())) {
            throw ConfigError("unknown configuration key '" + item.key() + "'");
        }
    }

    RunConfig cfg;
    auto& pp = cfg.protocol;
    auto& ch = cfg.channel;
    auto& sc = cfg.simulation;
    if (doc.contains("parties")) {
        pp.n_parties = integer<int>(doc, "parties");
    }
    if (doc.contains("mu")) {
        pp.signal_intensity = number(doc, "mu");
    }
    if (doc.contains("decoys")) {
        pp.decoy_intensities = number_array(doc, "decoys");
    }
    if (doc.contains("slices")) {
        pp.slice_count = integer<int>(doc, "slices");
    }
    if (doc.contains("f")) {
        pp.ec_efficiency = number(doc, "f");
    }
    if (doc.contains("signal_phase_misalignment")) {
        pp.signal_phase_misalignment = number(doc, "signal_phase_misalignment");
    }
    if (doc.contains("distance_km")) {
        ch.distance_km = number(doc, "distance_km");
    }
    if (doc.contains("alpha_db_per_km")) {
        ch.loss_db_per_km = number(doc, "alpha_db_per_km");
    }
    if (doc.contains("detector_efficiency")) {
        ch.detector_efficiency = number(doc, "detector_efficiency");
    }
    if (doc.contains("dark_count")) {
        ch.dark_count = number(doc, "dark_count");
    }
    if (doc.contains("boundaries")) {
        const auto& v = doc.at("boundaries");
        if (!v.is_array()) {
            throw ConfigError("'boundaries' must be an array containing \"first\" and/or \"last\"");
        }
        for (const auto& b : v) {
            if (b == "first") {
                cfg.boundaries.first = true;
            } else if (b == "last") {
                cfg.boundaries.last = true;
            } else {
                throw ConfigError("'boundaries' entries must be \"first\" or \"last\"");
            }
        }
    }
    if (doc.contains("seed")) {
        sc.seed = integer<std::uint64_t>(doc, "seed");
    }
    if (doc.contains("rounds")) {
        sc.rounds = integer<std::uint64_t>(doc, "rounds");
    }
    if (doc.contains("mode")) {
        if (!doc.at("mode").is_string()) {
            throw ConfigError("'mode' must be a string");
        }
        sc.mode = sim_mode_from_string(doc.at("mode").get<std::string>());
    }
    if (doc.contains("reference_offsets")) {
        sc.reference_offsets = number_array(doc, "reference_offsets");
    }
    if (doc.contains("slice_adjust")) {
        for (const double x : number_array(doc, "slice_adjust")) {
            if (x != static_cast<int>(x)) {
                throw ConfigError("'slice_adjust' entries must be integers");
            }
            sc.slice_adjust.push_back(static_cast<int>(x));
        }
    }

    pp.validate();
    ch.validate();
    if (sc.rounds < 1) {
        throw ConfigError("rounds must be >= 1");
    }
    const auto branches = static_cast<std::size_t>(pp.n_parties - 1);
    if (!sc.reference_offsets.empty() && sc.reference_offsets.size() != branches) {
        throw ConfigError("reference_offsets needs one entry per adjacent pair");
    }
    if (!sc.slice_adjust.empty() && sc.slice_adjust.size() != branches) {
        throw ConfigError("slice_adjust needs one entry per adjacent pair");
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open configuration file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    return parse_run_config(doc);
}

}  // namespace pmqcc
