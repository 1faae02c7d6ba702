#include "pmqcc/yield_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pmqcc/core_model.hpp"
#include "pmqcc/errors.hpp"

namespace pmqcc {

BranchSpec BranchSpec::from_arms(double mu_left, double eta_left, double mu_right, double eta_right) {
    if (!(mu_left > 0.0 && mu_right > 0.0)) {
        throw DomainError("branch arms need positive intensity");
    }
    if (!(eta_left > 0.0 && eta_left <= 1.0 && eta_right > 0.0 && eta_right <= 1.0)) {
        throw DomainError("arm transmittance outside (0, 1]");
    }
    const double left = eta_left * mu_left;
    const double right = eta_right * mu_right;
    if (std::abs(left - right) > 1e-9 * std::max(left, right)) {
        throw DomainError("branch arms must arrive with equal intensity");
    }
    const double virtual_intensity = mu_left + mu_right;
    return {virtual_intensity, (left + right) / virtual_intensity};
}

double BranchTopology::total_virtual_intensity() const {
    return std::accumulate(branches.begin(), branches.end(), 0.0,
                           [](double acc, const BranchSpec& b) { return acc + b.virtual_intensity; });
}

void BranchTopology::validate() const {
    if (branches.empty()) {
        throw DomainError("topology has no branches");
    }
    for (const auto& b : branches) {
        if (!(b.virtual_intensity > 0.0) || !(b.survival > 0.0 && b.survival <= 1.0)) {
            throw DomainError("branch needs positive intensity and survival in (0, 1]");
        }
    }
    if (!(dark_count >= 0.0 && dark_count < 1.0)) {
        throw DomainError("dark count outside [0, 1)");
    }
}

BranchTopology symmetric_topology(int n_parties, double signal_intensity, double eta, double dark_count) {
    return reduced_topology(n_parties, signal_intensity, eta, dark_count, {});
}

BranchTopology reduced_topology(int n_parties, double signal_intensity, double eta, double dark_count,
                                Boundaries boundaries) {
    if (n_parties < 2) {
        throw DomainError("need at least two parties");
    }
    const double half = 0.5 * signal_intensity;
    BranchTopology topology;
    topology.dark_count = dark_count;
    for (int b = 0; b < n_parties - 1; ++b) {
        double mu_left = half;
        double eta_left = eta;
        double mu_right = half;
        double eta_right = eta;
        if (b == 0 && boundaries.first) {
            mu_left = signal_intensity;
            eta_left = 0.5 * eta;
        }
        if (b == n_parties - 2 && boundaries.last) {
            mu_right = signal_intensity;
            eta_right = 0.5 * eta;
        }
        topology.branches.push_back(BranchSpec::from_arms(mu_left, eta_left, mu_right, eta_right));
    }
    return topology;
}

namespace {

double composition_count(int k, std::size_t parts) {
    // C(k + parts - 1, parts - 1)
    return std::exp(std::lgamma(k + static_cast<double>(parts)) - std::lgamma(k + 1.0) -
                    std::lgamma(static_cast<double>(parts)));
}

// Per-branch factor (p_l^c / c!) * P(branch succeeds | c photons routed to it).
std::vector<std::vector<double>> branch_factors(const BranchTopology& topology, int k) {
    const double total = topology.total_virtual_intensity();
    const double pd = topology.dark_count;
    const double dark_only = 2.0 * pd * (1.0 - pd);
    std::vector<std::vector<double>> factors;
    factors.reserve(topology.branches.size());
    for (const auto& b : topology.branches) {
        const double log_share = std::log(b.virtual_intensity / total);
        const double log_loss = std::log1p(-b.survival);
        std::vector<double> row(static_cast<std::size_t>(k) + 1);
        for (int c = 0; c <= k; ++c) {
            // Probability that none of the c photons survives.
            const double none = b.survival == 1.0 ? (c == 0 ? 1.0 : 0.0) : std::exp(c * log_loss);
            const double success = none * dark_only + (1.0 - none) * (1.0 - pd);
            row[static_cast<std::size_t>(c)] = std::exp(c * log_share - std::lgamma(c + 1.0)) * success;
        }
        factors.push_back(std::move(row));
    }
    return factors;
}

double enumerate(const std::vector<std::vector<double>>& factors, std::size_t branch, int remaining) {
    const auto& row = factors[branch];
    if (branch + 1 == factors.size()) {
        return row[static_cast<std::size_t>(remaining)];
    }
    double sum = 0.0;
    for (int c = 0; c <= remaining; ++c) {
        const double head = row[static_cast<std::size_t>(c)];
        if (head != 0.0) {
            sum += head * enumerate(factors, branch + 1, remaining - c);
        }
    }
    return sum;
}

}  // namespace

double yield(const BranchTopology& topology, int k, const YieldOptions& options) {
    topology.validate();
    if (k < 0) {
        throw DomainError("yield: negative photon number");
    }
    if (composition_count(k, topology.branches.size()) > options.composition_cap) {
        throw ResourceError("yield: composition enumeration exceeds the configured cap");
    }
    const auto factors = branch_factors(topology, k);
    const double y = std::exp(std::lgamma(k + 1.0)) * enumerate(factors, 0, k);
    return std::clamp(y, 0.0, 1.0);
}

YieldTable yield_table(const BranchTopology& topology, const TruncationPolicy& policy) {
    topology.validate();
    const double t = topology.total_virtual_intensity();
    YieldTable table;
    table.truncation = std::max(policy.min_order, truncation_order(t));
    table.tail_mass = poisson_tail_bound(t, table.truncation);
    table.yields.reserve(static_cast<std::size_t>(table.truncation) + 1);
    for (int k = 0; k <= table.truncation; ++k) {
        table.yields.push_back(yield(topology, k, policy.yield_options));
    }
    return table;
}

namespace {

struct ParitySums {
    double even = 0.0;
    double odd = 0.0;
};

ParitySums parity_sums(const YieldTable& table, const BranchTopology& topology) {
    const double t = topology.total_virtual_intensity();
    ParitySums sums;
    for (std::size_t k = 0; k < table.yields.size(); ++k) {
        const double term = poisson_weight(t, static_cast<int>(k)) * table.yields[k];
        (k % 2 == 0 ? sums.even : sums.odd) += term;
    }
    return sums;
}

double tail_correction(const YieldTable& table) {
    return table.yields.empty() ? 0.0 : 0.5 * table.tail_mass * table.yields.back();
}

}  // namespace

double gain_from_yields(const YieldTable& table, const BranchTopology& topology) {
    const auto sums = parity_sums(table, topology);
    return sums.even + sums.odd + tail_correction(table);
}

double phase_error_rate(const YieldTable& table, const BranchTopology& topology) {
    const auto sums = parity_sums(table, topology);
    const double gain = sums.even + sums.odd + tail_correction(table);
    if (!(gain > 0.0)) {
        throw InsufficientDataError("phase_error_rate: gain is zero");
    }
    return sums.odd / gain;
}

}  // namespace pmqcc
