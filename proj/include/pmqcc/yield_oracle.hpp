#pragma once

#include <cstdint>
#include <vector>

namespace pmqcc {

/// One interference branch seen as a single virtual coherent source.
struct BranchSpec {
    /// mu_V = mu_left + mu_right.
    double virtual_intensity = 0.0;
    /// Per-photon detection probability (eta_l mu_l + eta_r mu_r) / mu_V.
    double survival = 0.0;

    double arrival_intensity() const { return survival * virtual_intensity; }

    /// Builds a branch from its two arms. Throws DomainError when the arms do
    /// not arrive with equal intensity (relative tolerance 1e-9).
    static BranchSpec from_arms(double mu_left, double eta_left, double mu_right, double eta_right);
};

struct BranchTopology {
    std::vector<BranchSpec> branches;
    double dark_count = 0.0;

    double total_virtual_intensity() const;
    void validate() const;
};

/// Chain of N-1 identical branches: every arm carries mu/2 at transmittance eta.
BranchTopology symmetric_topology(int n_parties, double signal_intensity, double eta, double dark_count);

/// Which ends of the chain sit at broken links. A boundary party sends the full
/// interior intensity, half of which is lost towards the failed neighbour.
struct Boundaries {
    bool first = false;
    bool last = false;
};

BranchTopology reduced_topology(int n_parties, double signal_intensity, double eta, double dark_count,
                                Boundaries boundaries);

struct YieldOptions {
    /// Maximum number of occupation compositions enumerated for a single k.
    double composition_cap = 1e7;
};

/// Probability that every branch registers exactly one click given k photons
/// in the combined virtual source (matched phases). Exact enumeration over the
/// branch occupation compositions of k; throws ResourceError above the cap.
double yield(const BranchTopology& topology, int k, const YieldOptions& options = {});

struct YieldTable {
    std::vector<double> yields;  ///< index k = 0..truncation
    int truncation = 0;
    /// Upper bound on the Poisson mass beyond `truncation`.
    double tail_mass = 0.0;
};

struct TruncationPolicy {
    /// Lower limit on K; the core tail rule is applied on top.
    int min_order = 0;
    YieldOptions yield_options{};
};

YieldTable yield_table(const BranchTopology& topology, const TruncationPolicy& policy = {});

/// sum_k P_t(k) Y_k with t the total virtual intensity, plus half the tail
/// mass weighted by the last tabulated yield. The neglected tail is below
/// `tail_mass`, so the correction never exceeds it.
double gain_from_yields(const YieldTable& table, const BranchTopology& topology);

/// Fraction of successful events coming from odd total photon number.
/// Throws InsufficientDataError when the gain vanishes.
double phase_error_rate(const YieldTable& table, const BranchTopology& topology);

}  // namespace pmqcc
