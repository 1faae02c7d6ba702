#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmqcc/core_model.hpp"

namespace pmqcc {

enum class SimMode {
    /// Every party draws a uniform slice; rounds failing the slice rule are discarded.
    full_random,
    /// Slices are drawn already matched, so every round is sifted. The sifting
    /// probability is applied analytically.
    forced_matching,
};

std::string to_string(SimMode mode);
SimMode sim_mode_from_string(const std::string& name);

struct SimConfig {
    std::uint64_t rounds = 1'000'000;
    std::uint64_t seed = 1;
    SimMode mode = SimMode::forced_matching;
    /// Reference-phase deviation between P_l and P_{l+1} (radians, N-1 entries or empty).
    std::vector<double> reference_offsets;
    /// Adjusted slice index j_l^a per adjacent pair (N-1 entries or empty).
    std::vector<int> slice_adjust;
    /// 0 selects the hardware concurrency.
    unsigned workers = 1;
    /// Rounds per independently seeded chunk; part of the determinism contract.
    std::uint64_t chunk_rounds = 1 << 16;

    void validate(int n_parties, int slice_count) const;
};

/// Slice adjustment that best cancels a reference offset: -round(offset M / 2pi) mod M.
int compensating_adjust(double reference_offset, int slice_count);

/// Offset left after applying `adjust`, wrapped to [-pi, pi).
double residual_offset(double reference_offset, int adjust, int slice_count);

/// Per-pair probability that two uniform slice indices pass the slice rule:
/// 2/M for even M (equal or opposite slices), 1/M for odd M (equal slices only).
double matched_slice_fraction(int slice_count);

struct SimTally {
    std::uint64_t sent = 0;
    std::uint64_t sifted = 0;
    std::uint64_t success = 0;
    /// Indexed by the bit mask of branches whose right detector clicked.
    std::vector<std::uint64_t> pattern_counts;
    /// Entry m-2 counts (P1, Pm) disagreements after bit-flip cooperation.
    std::vector<std::uint64_t> pair_errors;
    /// Slice count M when rounds were drawn already matched, 0 otherwise.
    int forced_slices = 0;

    explicit SimTally(int n_parties = 2);

    int n_parties() const { return static_cast<int>(pair_errors.size()) + 1; }
    SimTally& merge(const SimTally& other);
    bool operator==(const SimTally&) const = default;
};

/// Simulates the protocol round by round with an honest measurement station.
///
/// Work is cut into fixed-size chunks whose generators are seeded from
/// (seed, chunk index), so the tally does not depend on `workers`.
SimTally run_rounds(const ProtocolParams& pp, const ChannelParams& ch, const SimConfig& sc);

struct EmpiricalEstimate {
    double gain = 0.0;
    double gain_half_width = 0.0;
    std::vector<double> pair_qbers;
    std::vector<double> pair_half_widths;
    double sifting_fraction = 0.0;
    /// The phase error is a counterfactual X-basis quantity and is never estimated.
    std::optional<double> phase_error;
};

/// Wilson score interval half-width for k successes out of n trials.
double wilson_half_width(std::uint64_t k, std::uint64_t n, double z = 1.96);

/// Throws InsufficientDataError when the tally has no successful rounds.
EmpiricalEstimate estimate(const SimTally& tally, double z = 1.96);

struct ComparisonEntry {
    std::string name;
    double empirical = 0.0;
    /// Exact slice-averaged model at the simulated reference offsets.
    double analytic = 0.0;
    double sigma = 0.0;
    double sigma_distance = 0.0;
    /// Closed-form pipeline value (slice-averaged approximations) and its distance.
    double closed_form = 0.0;
    double closed_form_sigma_distance = 0.0;
};

struct SimComparison {
    std::vector<ComparisonEntry> entries;
    double max_sigma_distance = 0.0;
};

/// Compares a tally against the analytic model of the same configuration.
SimComparison compare_to_analytic(const ProtocolParams& pp, const ChannelParams& ch, const SimConfig& sc,
                                  const SimTally& tally);

}  // namespace pmqcc
