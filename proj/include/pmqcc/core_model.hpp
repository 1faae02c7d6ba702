#pragma once

#include <cstdint>
#include <vector>

namespace pmqcc {

/// Protocol-side settings shared by every rate pipeline.
///
/// Intensities follow the interior-party convention: interior parties send
/// `signal_intensity`, the two chain ends send half of it.
struct ProtocolParams {
    int n_parties = 3;
    double signal_intensity = 0.1;
    /// Strictly decreasing; an optional trailing 0 denotes the vacuum decoy.
    std::vector<double> decoy_intensities;
    /// Number of phase slices M >= 2. For odd M the simulator only accepts
    /// equal slice indices, since no opposite slice exists.
    int slice_count = 16;
    double ec_efficiency = 1.16;
    /// Signal-mode misalignment used only by PM-QCC*.
    double signal_phase_misalignment = 0.0;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct ChannelParams {
    double loss_db_per_km = 0.2;
    double distance_km = 0.0;
    double detector_efficiency = 1.0;
    double dark_count = 0.0;

    void validate() const;
};

struct ParitySplit {
    double p_even = 1.0;
    double p_odd = 0.0;
};

/// H(x) with 0 log 0 = 0. Throws DomainError outside [0, 1].
double binary_entropy(double x);

/// Overall transmittance eta_d * 10^(-alpha L / 10); detector efficiency is folded in.
double transmittance(const ChannelParams& ch);

/// Photon-number parity of a coherent source with the given total mean photon number.
ParitySplit parity_split(double total_intensity);

/// Poisson probability e^-t t^k / k!, evaluated in log space.
double poisson_weight(double total_intensity, int k);

/// Truncation order K = ceil(t + 12 sqrt(t) + 30); keeps the Poisson tail below 1e-12.
int truncation_order(double total_intensity);

/// Rigorous upper bound on sum_{k > K} poisson_weight(t, k).
double poisson_tail_bound(double total_intensity, int truncation);

/// Intrinsic misalignment from coarse phase slicing, pi/M - (M^2/pi^2) sin^3(pi/M).
double intrinsic_misalignment(int slice_count);

}  // namespace pmqcc
