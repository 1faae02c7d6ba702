#pragma once

#include <map>
#include <utility>
#include <vector>

#include "pmqcc/core_model.hpp"
#include "pmqcc/keyrate.hpp"

namespace pmqcc {

/// Observed overall gains per decoy intensity (interior-party convention).
struct DecoyGains {
    /// (intensity, gain) with strictly decreasing positive intensities.
    std::vector<std::pair<double, double>> entries;
    double vacuum_gain = 0.0;
};

struct DecoyBounds {
    /// Lower bounds Y_k^L for the even orders 2..n_cut.
    std::map<int, double> y_lower;
    double phase_error_upper = 1.0;
    double rate_lower = 0.0;
    int n_cut = 2;
};

/// Highest even photon order bounded for N parties: N-1 for odd N, N for even N.
int cut_order(int n_parties);

/// Honest-model gains Q_x = Q_branch(eta x)^(N-1) and Q_0 = (2 p_d (1 - p_d))^(N-1).
/// A zero entry in `intensities` is folded into the vacuum gain.
DecoyGains simulate_decoy_gains(const ProtocolParams& pp, const ChannelParams& ch,
                                const std::vector<double>& intensities);

/// Closed-form Y_2^L of the three-decoy-plus-vacuum elimination for N = 3
/// (virtual intensity 2x). Clamped to [0, 1].
double y2_lower_3party(const DecoyGains& gains);

/// Lower bounds for every even order 2..n_cut from the first n_cut+1 nonzero
/// decoys plus vacuum. `total_intensity_scale` maps a decoy intensity x to its
/// virtual-source intensity (N-1 for symmetric chains).
///
/// Each bound cancels Y_1..Y_{n_cut+1} except its target order; the dropped
/// orders above n_cut+1 carry negative coefficients, which is verified at
/// runtime. A floating-point error allowance is subtracted so the bound stays
/// certified under rounding.
DecoyBounds yields_lower_general(const DecoyGains& gains, double total_intensity_scale, int n_cut);

/// E_X^U = 1 - P(0) Y_0 / Q - sum_{even k<=n_cut} P(k) Y_k^L / Q, clamped to [0, 1].
double phase_error_upper(const std::map<int, double>& y_lower, double signal_intensity, double signal_gain,
                         double vacuum_gain, int n_parties);

/// Full finite-decoy pipeline; `bounds` is filled when non-null.
RateReport rate_lower(const ProtocolParams& pp, const ChannelParams& ch, DecoyBounds* bounds = nullptr);

}  // namespace pmqcc
