#include "pmqcc/interference.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "pmqcc/core_model.hpp"
#include "pmqcc/errors.hpp"

namespace pmqcc {

namespace {

constexpr double kPi = std::numbers::pi;

void check_inputs(double arrival_intensity, double dark_count) {
    if (!(arrival_intensity >= 0.0)) {
        throw DomainError("negative arrival intensity");
    }
    if (!(dark_count >= 0.0 && dark_count < 1.0)) {
        throw DomainError("dark count outside [0, 1)");
    }
}

struct PortRates {
    double gain;
    double wrong;
};

PortRates port_rates(double arrival_intensity, double dark_count, double phase_delta) {
    const auto cp = click_probabilities(arrival_intensity, phase_delta, dark_count);
    const double right_only = cp.p_left_silent * cp.p_right_click;
    return {cp.p_left_click * cp.p_right_silent + right_only, right_only};
}

// 32-point Gauss-Legendre rule mapped to [0, width), weights normalised to sum to 1.
struct UniformNodes {
    std::vector<double> x;
    std::vector<double> w;
};

UniformNodes uniform_nodes(double width) {
    using Rule = boost::math::quadrature::gauss<double, 32>;
    const auto& abscissa = Rule::abscissa();
    const auto& weights = Rule::weights();
    UniformNodes nodes;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        for (const double sign : {-1.0, 1.0}) {
            if (abscissa[i] == 0.0 && sign > 0.0) {
                continue;
            }
            nodes.x.push_back(0.5 * width * (1.0 + sign * abscissa[i]));
            nodes.w.push_back(0.5 * weights[i]);
        }
    }
    return nodes;
}

}  // namespace

ClickProbabilities click_probabilities(double arrival_intensity, double phase_delta, double dark_count) {
    check_inputs(arrival_intensity, dark_count);
    const double half = 0.5 * phase_delta;
    const double c = std::cos(half);
    const double s = std::sin(half);
    ClickProbabilities cp;
    cp.p_left_silent = (1.0 - dark_count) * std::exp(-arrival_intensity * c * c);
    cp.p_right_silent = (1.0 - dark_count) * std::exp(-arrival_intensity * s * s);
    cp.p_left_click = 1.0 - cp.p_left_silent;
    cp.p_right_click = 1.0 - cp.p_right_silent;
    return cp;
}

BranchStats branch_success(const ClickProbabilities& cp) {
    const double left_only = cp.p_left_click * cp.p_right_silent;
    const double right_only = cp.p_left_silent * cp.p_right_click;
    const double gain = left_only + right_only;
    return {gain, gain > 0.0 ? right_only / gain : 0.0};
}

double branch_double_click(const ClickProbabilities& cp) { return cp.p_left_click * cp.p_right_click; }

double branch_gain_avg(double arrival_intensity, double dark_count) {
    check_inputs(arrival_intensity, dark_count);
    const double survive = std::exp(-arrival_intensity);
    return -std::expm1(-arrival_intensity) + 2.0 * dark_count * survive;
}

double branch_qber_avg(double arrival_intensity, double dark_count, int slice_count) {
    const double gain = branch_gain_avg(arrival_intensity, dark_count);
    if (!(gain > 0.0)) {
        throw InsufficientDataError("branch_qber_avg: gain is zero");
    }
    const double misalignment = intrinsic_misalignment(slice_count);
    return (dark_count + arrival_intensity * misalignment) * std::exp(-arrival_intensity) / gain;
}

double phase_delta_density(double phase_delta, double reference_offset, int slice_count) {
    if (slice_count < 2) {
        throw DomainError("phase_delta_density: need at least 2 slices");
    }
    const double m = slice_count;
    const double width = 2.0 * kPi / m;
    const double scale = (m / (2.0 * kPi)) * (m / (2.0 * kPi));
    if (phase_delta >= reference_offset - width && phase_delta < reference_offset) {
        return scale * (phase_delta + (width - reference_offset));
    }
    if (phase_delta >= reference_offset && phase_delta < reference_offset + width) {
        return scale * (-phase_delta + (width + reference_offset));
    }
    return 0.0;
}

BranchStats branch_average_exact(double arrival_intensity, double dark_count, int slice_count,
                                 double reference_offset) {
    check_inputs(arrival_intensity, dark_count);
    using Integrator = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double width = 2.0 * kPi / slice_count;
    double gain = 0.0;
    double wrong = 0.0;
    // The density has a kink at the apex; integrate each side separately.
    for (const auto [lo, hi] : {std::array{reference_offset - width, reference_offset},
                                std::array{reference_offset, reference_offset + width}}) {
        gain += Integrator::integrate(
            [&](double phi) {
                return phase_delta_density(phi, reference_offset, slice_count) *
                       port_rates(arrival_intensity, dark_count, phi).gain;
            },
            lo, hi, 10, 1e-13);
        wrong += Integrator::integrate(
            [&](double phi) {
                return phase_delta_density(phi, reference_offset, slice_count) *
                       port_rates(arrival_intensity, dark_count, phi).wrong;
            },
            lo, hi, 10, 1e-13);
    }
    return {gain, gain > 0.0 ? wrong / gain : 0.0};
}

BranchStats branch_average_exact_over_offsets(double arrival_intensity, double dark_count, int slice_count) {
    using Integrator = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double half = kPi / slice_count;
    auto average = [&](auto&& field) {
        return Integrator::integrate(
                   [&](double offset) {
                       return field(branch_average_exact(arrival_intensity, dark_count, slice_count, offset));
                   },
                   -half, half, 5, 1e-12) /
               (2.0 * half);
    };
    const double gain = average([](const BranchStats& b) { return b.gain; });
    const double wrong = average([](const BranchStats& b) { return b.gain * b.qber; });
    return {gain, gain > 0.0 ? wrong / gain : 0.0};
}

ChainStats chain_average_exact(double arrival_intensity, double dark_count, int slice_count,
                               std::span<const double> residual_offsets) {
    check_inputs(arrival_intensity, dark_count);
    if (slice_count < 2) {
        throw DomainError("chain_average_exact: need at least 2 slices");
    }
    const std::size_t branches = residual_offsets.size();
    if (branches == 0) {
        throw DomainError("chain_average_exact: empty chain");
    }
    const UniformNodes nodes = uniform_nodes(2.0 * kPi / slice_count);
    const std::size_t n = nodes.x.size();

    // Per-branch transfer kernels: success without error, success with error.
    std::vector<std::vector<PortRates>> kernels(branches, std::vector<PortRates>(n * n));
    for (std::size_t b = 0; b < branches; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double delta = nodes.x[j] - nodes.x[i] + residual_offsets[b];
                kernels[b][i * n + j] = port_rates(arrival_intensity, dark_count, delta);
            }
        }
    }

    // Propagate (even, odd) error-parity weights over the phase of the next party.
    // Parity is tracked for the first `tracked` branches only.
    auto propagate = [&](std::size_t tracked) {
        std::vector<std::array<double, 2>> state(n);
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = {nodes.w[i], 0.0};
        }
        for (std::size_t b = 0; b < branches; ++b) {
            std::vector<std::array<double, 2>> next(n, {0.0, 0.0});
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const PortRates& k = kernels[b][i * n + j];
                    const double right = k.gain - k.wrong;
                    const double w = nodes.w[j];
                    if (b < tracked) {
                        next[j][0] += w * (state[i][0] * right + state[i][1] * k.wrong);
                        next[j][1] += w * (state[i][1] * right + state[i][0] * k.wrong);
                    } else {
                        next[j][0] += w * state[i][0] * k.gain;
                        next[j][1] += w * state[i][1] * k.gain;
                    }
                }
            }
            state = std::move(next);
        }
        std::array<double, 2> total{0.0, 0.0};
        for (const auto& s : state) {
            total[0] += s[0];
            total[1] += s[1];
        }
        return total;
    };

    ChainStats out;
    for (std::size_t tracked = 1; tracked <= branches; ++tracked) {
        const auto total = propagate(tracked);
        out.gain = total[0] + total[1];
        out.pair_qbers.push_back(out.gain > 0.0 ? total[1] / out.gain : 0.0);
    }
    return out;
}

}  // namespace pmqcc
