#include "pmqcc/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pmqcc/errors.hpp"

namespace pmqcc {

using nlohmann::json;

std::string format_number(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

namespace {

void emit(std::ostringstream& out, const json& v, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (const auto& item : v.items()) {
                out << (first ? "" : ",\n") << pad << json(item.key()).dump() << ": ";
                emit(out, item.value(), indent, depth + 1);
                first = false;
            }
            out << "\n" << close_pad << "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            bool first = true;
            for (const auto& x : v) {
                out << (first ? "" : ",\n") << pad;
                emit(out, x, indent, depth + 1);
                first = false;
            }
            out << "\n" << close_pad << "]";
            return;
        }
        case json::value_t::number_float:
            out << format_number(v.get<double>());
            return;
        default:
            out << v.dump();
            return;
    }
}

json number_list(const std::vector<double>& xs) {
    json out = json::array();
    for (const double x : xs) {
        out.push_back(x);
    }
    return out;
}

}  // namespace

std::string dump_json(const json& doc, int indent) {
    std::ostringstream out;
    emit(out, doc, indent, 0);
    out << "\n";
    return out.str();
}

json to_json(const ProtocolParams& pp) {
    return {{"parties", pp.n_parties},
            {"mu", pp.signal_intensity},
            {"decoys", number_list(pp.decoy_intensities)},
            {"slices", pp.slice_count},
            {"f", pp.ec_efficiency},
            {"signal_phase_misalignment", pp.signal_phase_misalignment}};
}

json to_json(const ChannelParams& ch) {
    return {{"distance_km", ch.distance_km},
            {"alpha_db_per_km", ch.loss_db_per_km},
            {"detector_efficiency", ch.detector_efficiency},
            {"dark_count", ch.dark_count}};
}

json to_json(const RateReport& report) {
    json qbers = json::object();
    for (std::size_t i = 0; i < report.marginal_qbers.size(); ++i) {
        qbers["P1P" + std::to_string(i + 2)] = report.marginal_qbers[i];
    }
    return {{"protocol", report.protocol},
            {"rate", report.rate},
            {"raw_rate", report.raw_rate},
            {"clamped", report.clamped},
            {"gain", report.gain},
            {"branch_gain", report.branch_gain},
            {"branch_qber", report.branch_qber},
            {"marginal_qbers", qbers},
            {"phase_error", report.phase_error},
            {"phase_error_is_upper_bound", report.protocol == "decoy-lower"},
            {"sifting_prefactor", report.sifting_prefactor}};
}

json to_json(const DecoyBounds& bounds) {
    json yields = json::object();
    for (const auto& [k, y] : bounds.y_lower) {
        yields["Y" + std::to_string(k)] = y;
    }
    return {{"n_cut", bounds.n_cut},
            {"yield_lower_bounds", yields},
            {"phase_error_upper", bounds.phase_error_upper},
            {"rate_lower", bounds.rate_lower}};
}

json to_json(const OptimizationResult& result) {
    json doc = {{"best_params", to_json(result.best_params)},
                {"best_rate", result.best_rate},
                {"best_report", to_json(result.best_report)},
                {"evaluations", result.evaluations},
                {"zero_rate", result.zero_rate}};
    if (!result.trace.empty()) {
        json trace = json::array();
        for (const auto& t : result.trace) {
            trace.push_back({{"params", to_json(t.params)}, {"rate", t.rate}});
        }
        doc["trace"] = std::move(trace);
    }
    return doc;
}

json to_json(const SimComparison& comparison) {
    json entries = json::array();
    for (const auto& e : comparison.entries) {
        entries.push_back({{"quantity", e.name},
                           {"empirical", e.empirical},
                           {"analytic", e.analytic},
                           {"sigma", e.sigma},
                           {"sigma_distance", e.sigma_distance},
                           {"closed_form", e.closed_form},
                           {"closed_form_sigma_distance", e.closed_form_sigma_distance}});
    }
    return {{"entries", entries}, {"max_sigma_distance", comparison.max_sigma_distance}};
}

json to_json(const EmpiricalEstimate& est) {
    json qbers = json::object();
    for (std::size_t i = 0; i < est.pair_qbers.size(); ++i) {
        qbers["P1P" + std::to_string(i + 2)] = {{"value", est.pair_qbers[i]},
                                                {"half_width", est.pair_half_widths[i]}};
    }
    return {{"gain", est.gain},
            {"gain_half_width", est.gain_half_width},
            {"pair_qbers", qbers},
            {"sifting_fraction", est.sifting_fraction},
            {"phase_error", est.phase_error ? json(*est.phase_error) : json(nullptr)}};
}

std::string pattern_label(unsigned pattern, int branches) {
    std::string label;
    for (int l = 0; l < branches; ++l) {
        label += ((pattern >> l) & 1U) != 0 ? 'R' : 'L';
    }
    return label;
}

json tally_json(const SimTally& tally, const ProtocolParams& pp, const ChannelParams& ch, const SimConfig& sc) {
    const int branches = tally.n_parties() - 1;
    json patterns = json::object();
    for (std::size_t p = 0; p < tally.pattern_counts.size(); ++p) {
        patterns[pattern_label(static_cast<unsigned>(p), branches)] = tally.pattern_counts[p];
    }
    json errors = json::object();
    for (std::size_t i = 0; i < tally.pair_errors.size(); ++i) {
        errors["P1P" + std::to_string(i + 2)] = tally.pair_errors[i];
    }
    json config = {{"protocol", to_json(pp)},
                   {"channel", to_json(ch)},
                   {"rounds", sc.rounds},
                   {"mode", to_string(sc.mode)},
                   {"reference_offsets", number_list(sc.reference_offsets)},
                   {"slice_adjust", sc.slice_adjust},
                   {"chunk_rounds", sc.chunk_rounds}};
    return {{"sent", tally.sent},
            {"sifted", tally.sifted},
            {"success", tally.success},
            {"pattern_counts", patterns},
            {"pair_errors", errors},
            {"config", config},
            {"seed", sc.seed}};
}

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
    out << kCurveHeader << "\n";
    for (const auto& r : rows) {
        out << format_number(r.distance_km) << ',' << format_number(r.rate) << ',' << format_number(r.gain) << ','
            << format_number(r.qber_max) << ',' << format_number(r.phase_error) << ',' << format_number(r.mu) << ','
            << r.slices << ',' << r.flag << "\n";
    }
}

std::vector<CurveRow> read_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCurveHeader) {
        throw ConfigError("curve CSV: unexpected header");
    }
    std::vector<CurveRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        if (cells.size() != 8) {
            throw ConfigError("curve CSV: expected 8 columns");
        }
        auto num = [](const std::string& s) { return s == "null" ? NAN : std::stod(s); };
        try {
            rows.push_back({num(cells[0]), num(cells[1]), num(cells[2]), num(cells[3]), num(cells[4]), num(cells[5]),
                            std::stoi(cells[6]), cells[7]});
        } catch (const std::logic_error&) {
            throw ConfigError("curve CSV: malformed number");
        }
    }
    return rows;
}

}  // namespace pmqcc
