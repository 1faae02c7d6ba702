#include "pmqcc/keyrate.hpp"

#include <algorithm>
#include <boost/math/special_functions/binomial.hpp>
#include <cmath>

#include "pmqcc/errors.hpp"
#include "pmqcc/interference.hpp"

namespace pmqcc {

double marginal_qber(double branch_qber, int pair_index) {
    if (pair_index < 2) {
        throw DomainError("marginal_qber: pair index must be >= 2");
    }
    if (!(branch_qber >= 0.0 && branch_qber <= 1.0)) {
        throw DomainError("marginal_qber: branch QBER outside [0, 1]");
    }
    const unsigned links = static_cast<unsigned>(pair_index - 1);
    double sum = 0.0;
    for (unsigned k = 0; 2 * k + 1 <= links; ++k) {
        const unsigned errors = 2 * k + 1;
        sum += boost::math::binomial_coefficient<double>(links, errors) * std::pow(branch_qber, errors) *
               std::pow(1.0 - branch_qber, links - errors);
    }
    return sum;
}

RateReport assemble_rate(int n_parties, double sifting_prefactor, double branch_gain, double branch_qber,
                         double phase_error, double ec_efficiency) {
    RateReport report;
    report.sifting_prefactor = sifting_prefactor;
    report.branch_gain = branch_gain;
    report.branch_qber = branch_qber;
    report.gain = std::pow(branch_gain, n_parties - 1);
    report.phase_error = phase_error;
    double worst = 0.0;
    for (int m = 2; m <= n_parties; ++m) {
        const double e = marginal_qber(branch_qber, m);
        report.marginal_qbers.push_back(e);
        worst = std::max(worst, binary_entropy(e));
    }
    report.raw_rate =
        sifting_prefactor * report.gain * (1.0 - ec_efficiency * worst - binary_entropy(phase_error));
    report.clamped = !(report.raw_rate > 0.0);
    report.rate = report.clamped ? 0.0 : report.raw_rate;
    return report;
}

double signal_phase_error(int n_parties, double signal_intensity, const ChannelParams& ch, Boundaries boundaries) {
    const auto topology =
        reduced_topology(n_parties, signal_intensity, transmittance(ch), ch.dark_count, boundaries);
    const auto table = yield_table(topology);
    return phase_error_rate(table, topology);
}

namespace {

struct BranchTerms {
    double arrival;
    double gain;
};

BranchTerms branch_terms(const ProtocolParams& pp, const ChannelParams& ch) {
    pp.validate();
    ch.validate();
    // Two arms of mu/2 each arrive at the branch.
    const double arrival = transmittance(ch) * pp.signal_intensity;
    return {arrival, branch_gain_avg(arrival, ch.dark_count)};
}

// With no detections at all every quantity degenerates; report a zero rate.
RateReport dark_report(const ProtocolParams& pp, double prefactor, const char* protocol) {
    RateReport report;
    report.protocol = protocol;
    report.sifting_prefactor = prefactor;
    report.clamped = true;
    report.marginal_qbers.assign(static_cast<std::size_t>(pp.n_parties - 1), 0.0);
    return report;
}

RateReport rate_with_slices(const ProtocolParams& pp, const ChannelParams& ch, Boundaries boundaries,
                            const char* protocol) {
    const auto terms = branch_terms(pp, ch);
    const double prefactor = std::pow(2.0 / pp.slice_count, pp.n_parties - 1);
    if (!(terms.gain > 0.0)) {
        return dark_report(pp, prefactor, protocol);
    }
    const double qber = branch_qber_avg(terms.arrival, ch.dark_count, pp.slice_count);
    const double phase_error = signal_phase_error(pp.n_parties, pp.signal_intensity, ch, boundaries);
    auto report = assemble_rate(pp.n_parties, prefactor, terms.gain, qber, phase_error, pp.ec_efficiency);
    report.protocol = protocol;
    return report;
}

}  // namespace

RateReport rate_pmqcc(const ProtocolParams& pp, const ChannelParams& ch) {
    return rate_with_slices(pp, ch, {}, "pmqcc");
}

RateReport rate_reduced(const ProtocolParams& pp, const ChannelParams& ch, Boundaries boundaries) {
    return rate_with_slices(pp, ch, boundaries, "reduced");
}

double qber_star(double arrival_intensity, double dark_count, double misalignment) {
    if (!(misalignment >= 0.0 && misalignment <= 0.5)) {
        throw DomainError("qber_star: misalignment outside [0, 0.5]");
    }
    const double gain = branch_gain_avg(arrival_intensity, dark_count);
    if (!(gain > 0.0)) {
        throw InsufficientDataError("qber_star: gain is zero");
    }
    const double keep = 1.0 - dark_count;
    return keep * std::exp(-arrival_intensity * (1.0 - misalignment)) *
           (1.0 - keep * std::exp(-arrival_intensity * misalignment)) / gain;
}

RateReport rate_pmqcc_star(const ProtocolParams& pp, const ChannelParams& ch) {
    const auto terms = branch_terms(pp, ch);
    if (!(terms.gain > 0.0)) {
        return dark_report(pp, 1.0, "pmqcc-star");
    }
    const double qber = qber_star(terms.arrival, ch.dark_count, pp.signal_phase_misalignment);
    const double phase_error = signal_phase_error(pp.n_parties, pp.signal_intensity, ch);
    auto report = assemble_rate(pp.n_parties, 1.0, terms.gain, qber, phase_error, pp.ec_efficiency);
    report.protocol = "pmqcc-star";
    return report;
}

double scaling_exponent(std::span<const std::pair<double, double>> distance_rate) {
    std::vector<std::pair<double, double>> points;
    for (const auto& [distance, rate] : distance_rate) {
        if (rate > 0.0 && std::isfinite(rate)) {
            points.emplace_back(distance, std::log10(rate));
        }
    }
    if (points.size() < 2) {
        throw InsufficientDataError("scaling_exponent: need at least two positive rates");
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= static_cast<double>(points.size());
    mean_y /= static_cast<double>(points.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if (!(sxx > 0.0)) {
        throw InsufficientDataError("scaling_exponent: distances must not all coincide");
    }
    return sxy / sxx;
}

}  // namespace pmqcc
