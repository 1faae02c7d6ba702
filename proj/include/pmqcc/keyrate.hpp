#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmqcc/core_model.hpp"
#include "pmqcc/yield_oracle.hpp"

namespace pmqcc {

/// Everything that goes into one key-rate evaluation.
struct RateReport {
    /// Key bits per pulse, clamped at zero.
    double rate = 0.0;
    /// Rate before clamping; negative when error correction and privacy
    /// amplification cost more than the sifted gain.
    double raw_rate = 0.0;
    bool clamped = false;
    double gain = 0.0;
    double branch_gain = 0.0;
    double branch_qber = 0.0;
    /// E^Z for the pairs (P1,P2) ... (P1,PN).
    std::vector<double> marginal_qbers;
    /// E_X, or its decoy upper bound for certified rates.
    double phase_error = 0.0;
    double sifting_prefactor = 1.0;
    std::string protocol;
};

/// Probability of an odd number of errors across the m-1 branches linking P1 and Pm.
double marginal_qber(double branch_qber, int pair_index);

/// Assembles R = prefactor * Q * [1 - f max_m H(E_m) - H(E_X)] from branch-level
/// quantities. Every rate pipeline funnels through here.
RateReport assemble_rate(int n_parties, double sifting_prefactor, double branch_gain, double branch_qber,
                         double phase_error, double ec_efficiency);

/// Phase error of the signal state from the exact photon-number yields.
double signal_phase_error(int n_parties, double signal_intensity, const ChannelParams& ch,
                          Boundaries boundaries = {});

/// PM-QCC with phase post-selection: prefactor (2/M)^(N-1).
RateReport rate_pmqcc(const ProtocolParams& pp, const ChannelParams& ch);

/// Z-branch QBER of PM-QCC* for a signal-mode misalignment `misalignment`.
double qber_star(double arrival_intensity, double dark_count, double misalignment);

/// PM-QCC* without post-selection on signal phases: prefactor 1.
RateReport rate_pmqcc_star(const ProtocolParams& pp, const ChannelParams& ch);

/// Reduced network whose chain ends may sit at broken links.
RateReport rate_reduced(const ProtocolParams& pp, const ChannelParams& ch, Boundaries boundaries);

/// Least-squares slope of log10(R) against L, in decades per km.
/// Non-positive rates are skipped; throws InsufficientDataError below two points.
double scaling_exponent(std::span<const std::pair<double, double>> distance_rate);

}  // namespace pmqcc
