#pragma once

#include <cmath>
#include <vector>

#include "pmqcc/core_model.hpp"
#include "pmqcc/decoy.hpp"
#include "pmqcc/yield_oracle.hpp"

namespace pmqcc::testing {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

/// Reference channel (0.2 dB/km, eta_d = 0.65, p_d = 7.2e-8) at distance `km`.
inline ChannelParams table_channel(double km) { return ChannelParams{0.2, km, 0.65, 7.2e-8}; }

inline ProtocolParams table_protocol(double mu, int slices, int parties = 3) {
    ProtocolParams pp;
    pp.n_parties = parties;
    pp.signal_intensity = mu;
    pp.slice_count = slices;
    pp.ec_efficiency = 1.16;
    return pp;
}

/// Q_x = sum_k P_{scale x}(k) Y_k for intensity-independent yields.
inline double gain_from_table(const std::vector<double>& yields, double total_intensity) {
    double q = 0.0;
    for (std::size_t k = 0; k < yields.size(); ++k) {
        q += poisson_weight(total_intensity, static_cast<int>(k)) * yields[k];
    }
    return q;
}

/// Decoy gains forward-mapped from a yield list, so they are exactly consistent with it.
inline DecoyGains gains_from_yields(const std::vector<double>& yields, const std::vector<double>& intensities,
                                    double scale) {
    DecoyGains g;
    for (const double x : intensities) {
        if (x == 0.0) {
            g.vacuum_gain = yields.at(0);
        } else {
            g.entries.emplace_back(x, gain_from_table(yields, scale * x));
        }
    }
    return g;
}

}  // namespace pmqcc::testing
