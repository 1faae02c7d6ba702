#include "pmqcc/core_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pmqcc/errors.hpp"

namespace pmqcc {

void ProtocolParams::validate() const {
    if (n_parties < 2) {
        throw ConfigError("n_parties must be >= 2");
    }
    if (!(signal_intensity > 0.0) || !std::isfinite(signal_intensity)) {
        throw ConfigError("signal intensity must be positive");
    }
    for (std::size_t i = 0; i < decoy_intensities.size(); ++i) {
        const double x = decoy_intensities[i];
        const bool last = i + 1 == decoy_intensities.size();
        if (!std::isfinite(x) || x < 0.0 || (x == 0.0 && !last)) {
            throw ConfigError("decoy intensities must be positive, with 0 allowed only as the last entry");
        }
        if (i > 0 && !(x < decoy_intensities[i - 1])) {
            throw ConfigError("decoy intensities must be strictly decreasing");
        }
    }
    if (slice_count < 2) {
        throw ConfigError("slice count must be >= 2");
    }
    if (!(ec_efficiency >= 1.0)) {
        throw ConfigError("error-correction efficiency must be >= 1");
    }
    if (!(signal_phase_misalignment >= 0.0 && signal_phase_misalignment <= 0.5)) {
        throw ConfigError("signal phase misalignment must lie in [0, 0.5]");
    }
}

void ChannelParams::validate() const {
    if (!(loss_db_per_km >= 0.0) || !std::isfinite(loss_db_per_km)) {
        throw ConfigError("loss rate must be >= 0");
    }
    if (!(distance_km >= 0.0) || !std::isfinite(distance_km)) {
        throw ConfigError("distance must be >= 0");
    }
    if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0)) {
        throw ConfigError("detector efficiency must lie in (0, 1]");
    }
    if (!(dark_count >= 0.0 && dark_count < 1.0)) {
        throw ConfigError("dark count probability must lie in [0, 1)");
    }
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("binary_entropy: argument outside [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return 0.0;
    }
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double transmittance(const ChannelParams& ch) {
    return ch.detector_efficiency * std::pow(10.0, -ch.loss_db_per_km * ch.distance_km / 10.0);
}

ParitySplit parity_split(double total_intensity) {
    if (!(total_intensity >= 0.0)) {
        throw DomainError("parity_split: negative intensity");
    }
    // e^-t sinh t = (1 - e^-2t) / 2, and p_even is its complement.
    const double p_odd = -0.5 * std::expm1(-2.0 * total_intensity);
    return {1.0 - p_odd, p_odd};
}

double poisson_weight(double total_intensity, int k) {
    if (!(total_intensity >= 0.0) || k < 0) {
        throw DomainError("poisson_weight: negative intensity or photon number");
    }
    if (total_intensity == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    return std::exp(-total_intensity + k * std::log(total_intensity) - std::lgamma(k + 1.0));
}

int truncation_order(double total_intensity) {
    if (!(total_intensity >= 0.0)) {
        throw DomainError("truncation_order: negative intensity");
    }
    return static_cast<int>(std::ceil(total_intensity + 12.0 * std::sqrt(total_intensity) + 30.0));
}

double poisson_tail_bound(double total_intensity, int truncation) {
    // For k >= K+1 > t the ratio of successive weights is at most t/(K+2).
    const double first = poisson_weight(total_intensity, truncation + 1);
    const double ratio = total_intensity / (truncation + 2.0);
    if (ratio >= 1.0) {
        return 1.0;
    }
    return first / (1.0 - ratio);
}

double intrinsic_misalignment(int slice_count) {
    if (slice_count < 2) {
        throw DomainError("intrinsic_misalignment: need at least 2 slices");
    }
    const double m = slice_count;
    const double x = std::numbers::pi / m;
    const double s = std::sin(x);
    // For large M the two terms cancel to O(x^3); expand to keep relative accuracy.
    if (x < 1e-3) {
        // pi/M - (sin x / x)^2 sin x, series in x: x^3/2 - 13 x^5/120 + ...
        const double x2 = x * x;
        return x * x2 * (0.5 - x2 * (13.0 / 120.0));
    }
    return x - (m * m / (std::numbers::pi * std::numbers::pi)) * s * s * s;
}

}  // namespace pmqcc
