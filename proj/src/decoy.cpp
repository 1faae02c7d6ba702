#include "pmqcc/decoy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "pmqcc/errors.hpp"
#include "pmqcc/interference.hpp"

namespace pmqcc {

namespace {

// Number of extra orders above the cancelled block whose sign is checked.
constexpr int kSignCheckOrders = 12;
// Relative conditioning beyond which the ladder is rejected as degenerate.
constexpr double kMaxConditioning = 1e10;

void check_gains(const DecoyGains& gains) {
    for (std::size_t i = 0; i < gains.entries.size(); ++i) {
        const auto [x, q] = gains.entries[i];
        if (!(x > 0.0) || !(q >= 0.0 && q <= 1.0)) {
            throw DomainError("decoy gains need positive intensities and gains in [0, 1]");
        }
        if (i > 0 && !(x < gains.entries[i - 1].first)) {
            throw DegenerateGeometryError("decoy intensities must be distinct and strictly decreasing");
        }
    }
    if (!(gains.vacuum_gain >= 0.0 && gains.vacuum_gain <= 1.0)) {
        throw DomainError("vacuum gain outside [0, 1]");
    }
}

// Solves sum_i w_i u_i^j = delta_{j,target} for j = 1..d by Gaussian
// elimination with partial pivoting on the row-scaled Vandermonde system.
std::vector<double> elimination_weights(const std::vector<double>& u, int target) {
    const std::size_t d = u.size();
    std::vector<std::vector<double>> a(d, std::vector<double>(d + 1, 0.0));
    for (std::size_t j = 0; j < d; ++j) {
        // Row j holds the power j+1, scaled by u_max^-(j+1) to keep entries O(1).
        const double scale = std::pow(u.front(), static_cast<double>(j + 1));
        for (std::size_t i = 0; i < d; ++i) {
            a[j][i] = std::pow(u[i], static_cast<double>(j + 1)) / scale;
        }
        a[j][d] = (static_cast<int>(j) + 1 == target) ? 1.0 / scale : 0.0;
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        std::swap(a[col], a[pivot]);
        if (a[col][col] == 0.0) {
            throw DegenerateGeometryError("decoy elimination matrix is singular");
        }
        for (std::size_t r = col + 1; r < d; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= d; ++c) {
                a[r][c] -= factor * a[col][c];
            }
        }
    }
    std::vector<double> w(d);
    for (std::size_t r = d; r-- > 0;) {
        double acc = a[r][d];
        for (std::size_t c = r + 1; c < d; ++c) {
            acc -= a[r][c] * w[c];
        }
        w[r] = acc / a[r][r];
    }
    return w;
}

double power_moment(const std::vector<double>& w, const std::vector<double>& u, int order) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += w[i] * std::pow(u[i], order);
    }
    return s;
}

}  // namespace

int cut_order(int n_parties) {
    if (n_parties < 2) {
        throw DomainError("cut_order: need at least two parties");
    }
    return n_parties % 2 == 1 ? n_parties - 1 : n_parties;
}

DecoyGains simulate_decoy_gains(const ProtocolParams& pp, const ChannelParams& ch,
                                const std::vector<double>& intensities) {
    ch.validate();
    const double eta = transmittance(ch);
    const double pd = ch.dark_count;
    DecoyGains gains;
    gains.vacuum_gain = std::pow(2.0 * pd * (1.0 - pd), pp.n_parties - 1);
    for (const double x : intensities) {
        if (x == 0.0) {
            continue;
        }
        if (!(x > 0.0)) {
            throw DomainError("decoy intensities must be non-negative");
        }
        gains.entries.emplace_back(x, std::pow(branch_gain_avg(eta * x, pd), pp.n_parties - 1));
    }
    return gains;
}

double y2_lower_3party(const DecoyGains& gains) {
    check_gains(gains);
    if (gains.entries.size() != 3) {
        throw InsufficientDecoysError("y2_lower_3party needs exactly three nonzero decoys");
    }
    const double a = 2.0 * gains.entries[0].first;
    const double b = 2.0 * gains.entries[1].first;
    const double c = 2.0 * gains.entries[2].first;
    const auto w = elimination_weights({a, b, c}, 2);
    double conditioning = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        conditioning += std::abs(w[i]) * std::pow(std::array{a, b, c}[i], 2);
    }
    if (!std::isfinite(conditioning) || conditioning > kMaxConditioning) {
        throw DegenerateGeometryError("decoy intensities too close for the elimination ladder");
    }
    const double q0 = gains.vacuum_gain;
    const double ga = std::exp(a) * gains.entries[0].second - q0;
    const double gb = std::exp(b) * gains.entries[1].second - q0;
    const double gc = std::exp(c) * gains.entries[2].second - q0;

    const double lead = b * a * a * a - a * b * b * b;
    const double tail = c * b * b * b - b * c * c * c;
    const double numerator = lead * (c * gb - b * gc) - tail * (b * ga - a * gb);
    const double denominator = lead * (c * b * b - b * c * c) - tail * (b * a * a - a * b * b);
    if (!(denominator > 0.0) || !std::isfinite(denominator)) {
        throw DegenerateGeometryError("Y2 elimination denominator is not positive");
    }
    return std::clamp(2.0 * numerator / denominator, 0.0, 1.0);
}

DecoyBounds yields_lower_general(const DecoyGains& gains, double total_intensity_scale, int n_cut) {
    check_gains(gains);
    if (n_cut < 2 || n_cut % 2 != 0) {
        throw DomainError("cut order must be an even number >= 2");
    }
    if (!(total_intensity_scale > 0.0)) {
        throw DomainError("intensity scale must be positive");
    }
    const std::size_t needed = static_cast<std::size_t>(n_cut) + 1;
    if (gains.entries.size() < needed) {
        throw InsufficientDecoysError();
    }

    std::vector<double> u;
    std::vector<double> g;
    std::vector<double> g_magnitude;
    const double q0 = gains.vacuum_gain;
    for (std::size_t i = 0; i < needed; ++i) {
        const auto [x, q] = gains.entries[i];
        const double v = total_intensity_scale * x;
        const double scaled = std::exp(v) * q;
        u.push_back(v);
        g.push_back(scaled - q0);
        g_magnitude.push_back(scaled + q0);
    }
    for (std::size_t i = 1; i < u.size(); ++i) {
        if (!(u[i] < u[i - 1])) {
            throw DegenerateGeometryError("virtual decoy intensities coincide");
        }
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    DecoyBounds bounds;
    bounds.n_cut = n_cut;
    for (int target = 2; target <= n_cut; target += 2) {
        const auto w = elimination_weights(u, target);

        // Scale-free conditioning: sum |w_i| u_i^k equals 1 for a perfectly
        // separated ladder and blows up as intensities coalesce.
        double conditioning = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            conditioning += std::abs(w[i]) * std::pow(u[i], target);
        }
        if (!std::isfinite(conditioning) || conditioning > kMaxConditioning) {
            throw DegenerateGeometryError("decoy intensities too close for the elimination ladder");
        }
        const double target_coefficient = power_moment(w, u, target);
        if (!(std::abs(target_coefficient - 1.0) < 1e-6)) {
            throw DegenerateGeometryError("elimination failed to isolate the target order");
        }
        for (int order = static_cast<int>(needed) + 1; order <= static_cast<int>(needed) + kSignCheckOrders;
             ++order) {
            if (!(power_moment(w, u, order) < 0.0)) {
                throw DegenerateGeometryError("dropped orders do not all carry negative coefficients");
            }
        }

        double estimate = 0.0;
        double rounding = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            estimate += w[i] * g[i];
            rounding += std::abs(w[i]) * g_magnitude[i];
        }
        const double factorial = std::exp(std::lgamma(target + 1.0));
        // Generous bound on accumulated rounding in exp, products and the sum.
        const double allowance = factorial * 16.0 * (static_cast<double>(u.size()) + 4.0) * eps * rounding;
        bounds.y_lower[target] = std::clamp(factorial * estimate - allowance, 0.0, 1.0);
    }
    return bounds;
}

double phase_error_upper(const std::map<int, double>& y_lower, double signal_intensity, double signal_gain,
                         double vacuum_gain, int n_parties) {
    if (!(signal_gain > 0.0)) {
        throw InsufficientDataError("phase_error_upper: signal gain is zero");
    }
    const double t = (n_parties - 1) * signal_intensity;
    double even = poisson_weight(t, 0) * vacuum_gain;
    for (const auto& [k, y] : y_lower) {
        even += poisson_weight(t, k) * y;
    }
    return std::clamp(1.0 - even / signal_gain, 0.0, 1.0);
}

RateReport rate_lower(const ProtocolParams& pp, const ChannelParams& ch, DecoyBounds* bounds) {
    pp.validate();
    ch.validate();
    const int n_cut = cut_order(pp.n_parties);
    const bool has_vacuum = !pp.decoy_intensities.empty() && pp.decoy_intensities.back() == 0.0;
    const std::size_t nonzero = pp.decoy_intensities.size() - (has_vacuum ? 1 : 0);
    if (!has_vacuum || nonzero < static_cast<std::size_t>(n_cut) + 1) {
        throw InsufficientDecoysError();
    }

    const auto gains = simulate_decoy_gains(pp, ch, pp.decoy_intensities);
    auto result = yields_lower_general(gains, pp.n_parties - 1.0, n_cut);

    const double arrival = transmittance(ch) * pp.signal_intensity;
    const double branch_gain = branch_gain_avg(arrival, ch.dark_count);
    const double prefactor = std::pow(2.0 / pp.slice_count, pp.n_parties - 1);
    const double signal_gain = std::pow(branch_gain, pp.n_parties - 1);
    if (!(signal_gain > 0.0)) {
        throw InsufficientDataError("rate_lower: signal gain is zero");
    }
    result.phase_error_upper =
        phase_error_upper(result.y_lower, pp.signal_intensity, signal_gain, gains.vacuum_gain, pp.n_parties);
    const double qber = branch_qber_avg(arrival, ch.dark_count, pp.slice_count);
    // Entropy of the upper bound, capped at 1/2.
    auto report = assemble_rate(pp.n_parties, prefactor, branch_gain, qber,
                                std::min(result.phase_error_upper, 0.5), pp.ec_efficiency);
    report.phase_error = result.phase_error_upper;
    report.protocol = "decoy-lower";
    result.rate_lower = report.rate;
    if (bounds != nullptr) {
        *bounds = std::move(result);
    }
    return report;
}

}  // namespace pmqcc
