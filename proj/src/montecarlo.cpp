#include "pmqcc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "pmqcc/errors.hpp"
#include "pmqcc/interference.hpp"
#include "pmqcc/keyrate.hpp"

namespace pmqcc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
    return splitmix64(splitmix64(seed) ^ splitmix64(chunk + 0x632be59bd9b4e019ULL));
}

// Portable conversions; std:: distributions are implementation-defined.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int uniform_index(std::mt19937_64& rng, int n) {
    return static_cast<int>(((rng() >> 32) * static_cast<std::uint64_t>(n)) >> 32);
}

int wrap(int j, int m) { return ((j % m) + m) % m; }

struct RoundModel {
    int parties;
    int slices;
    double slice_width;
    double arrival;
    double dark_count;
    SimMode mode;
    bool half_slice;
    std::vector<double> offsets;
    std::vector<int> adjust;
};

void simulate_chunk(const RoundModel& model, std::uint64_t rounds, std::uint64_t seed, SimTally& tally) {
    std::mt19937_64 rng(seed);
    const int n = model.parties;
    const int branches = n - 1;
    const int m = model.slices;
    std::vector<int> slice(static_cast<std::size_t>(n));
    std::vector<int> bit(static_cast<std::size_t>(n));
    std::vector<double> phase(static_cast<std::size_t>(n));
    std::vector<int> shifted(static_cast<std::size_t>(branches));
    std::vector<int> parity_prefix(static_cast<std::size_t>(branches));

    for (std::uint64_t r = 0; r < rounds; ++r) {
        ++tally.sent;
        slice[0] = uniform_index(rng, m);
        for (int p = 0; p < n; ++p) {
            bit[static_cast<std::size_t>(p)] = static_cast<int>(rng() >> 63);
            phase[static_cast<std::size_t>(p)] = uniform01(rng) * model.slice_width;
        }
        bool sifted = true;
        for (int l = 0; l < branches; ++l) {
            const auto li = static_cast<std::size_t>(l);
            if (model.mode == SimMode::forced_matching) {
                const int half = model.half_slice ? static_cast<int>(rng() >> 63) : 0;
                shifted[li] = half;
                slice[li + 1] = wrap(slice[li] + model.adjust[li] - half * (m / 2), m);
            } else {
                slice[li + 1] = uniform_index(rng, m);
                const int c = wrap(slice[li] + model.adjust[li] - slice[li + 1], m);
                if (c == 0) {
                    shifted[li] = 0;
                } else if (model.half_slice && c == m / 2) {
                    shifted[li] = 1;
                } else {
                    sifted = false;
                }
            }
        }
        if (!sifted) {
            continue;
        }
        ++tally.sifted;

        unsigned pattern = 0;
        int parity = 0;
        bool success = true;
        for (int l = 0; l < branches && success; ++l) {
            const auto li = static_cast<std::size_t>(l);
            // Optical phase of P_{l+1} minus that of P_l, reference deviation included.
            const double delta = kTwoPi * (slice[li + 1] - slice[li]) / m + (phase[li + 1] - phase[li]) +
                                 std::numbers::pi * (bit[li + 1] - bit[li]) + model.offsets[li];
            const auto cp = click_probabilities(model.arrival, delta, model.dark_count);
            const bool left = uniform01(rng) < cp.p_left_click;
            const bool right = uniform01(rng) < cp.p_right_click;
            if (left == right) {
                success = false;
                break;
            }
            const int outcome = right ? 1 : 0;
            pattern |= static_cast<unsigned>(outcome) << l;
            // Cooperation maps every announcement to all-left with zero slice offset;
            // a residual 1 means P_{l+1} ended up with a flipped bit relative to P_l.
            parity ^= outcome ^ shifted[li] ^ bit[li] ^ bit[li + 1];
            parity_prefix[li] = parity;
        }
        if (!success) {
            continue;
        }
        ++tally.success;
        ++tally.pattern_counts[pattern];
        for (int l = 0; l < branches; ++l) {
            tally.pair_errors[static_cast<std::size_t>(l)] +=
                static_cast<std::uint64_t>(parity_prefix[static_cast<std::size_t>(l)]);
        }
    }
}

}  // namespace

std::string to_string(SimMode mode) {
    return mode == SimMode::full_random ? "full-random" : "forced-matching";
}

SimMode sim_mode_from_string(const std::string& name) {
    if (name == "full-random") {
        return SimMode::full_random;
    }
    if (name == "forced-matching") {
        return SimMode::forced_matching;
    }
    throw ConfigError("unknown simulation mode '" + name + "'");
}

void SimConfig::validate(int n_parties, int slice_count) const {
    if (rounds < 1) {
        throw ConfigError("rounds must be >= 1");
    }
    if (slice_count < 2) {
        throw ConfigError("slice count must be >= 2");
    }
    const auto branches = static_cast<std::size_t>(n_parties - 1);
    if (!reference_offsets.empty() && reference_offsets.size() != branches) {
        throw ConfigError("reference_offsets needs one entry per adjacent pair");
    }
    if (!slice_adjust.empty() && slice_adjust.size() != branches) {
        throw ConfigError("slice_adjust needs one entry per adjacent pair");
    }
    if (chunk_rounds < 1) {
        throw ConfigError("chunk size must be >= 1");
    }
}

int compensating_adjust(double reference_offset, int slice_count) {
    const long shift = std::lround(reference_offset * slice_count / kTwoPi);
    return wrap(static_cast<int>(-(shift % slice_count)), slice_count);
}

double residual_offset(double reference_offset, int adjust, int slice_count) {
    double r = reference_offset + kTwoPi * adjust / slice_count;
    r = std::fmod(r + std::numbers::pi, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r - std::numbers::pi;
}

SimTally::SimTally(int n_parties)
    : pattern_counts(std::size_t{1} << (n_parties - 1), 0), pair_errors(static_cast<std::size_t>(n_parties - 1), 0) {}

SimTally& SimTally::merge(const SimTally& other) {
    if (other.pair_errors.size() != pair_errors.size()) {
        throw DomainError("cannot merge tallies with different party counts");
    }
    if (other.forced_slices != forced_slices) {
        throw DomainError("cannot merge tallies drawn under different sifting conditions");
    }
    sent += other.sent;
    sifted += other.sifted;
    success += other.success;
    for (std::size_t i = 0; i < pattern_counts.size(); ++i) {
        pattern_counts[i] += other.pattern_counts[i];
    }
    for (std::size_t i = 0; i < pair_errors.size(); ++i) {
        pair_errors[i] += other.pair_errors[i];
    }
    return *this;
}

SimTally run_rounds(const ProtocolParams& pp, const ChannelParams& ch, const SimConfig& sc) {
    pp.validate();
    ch.validate();
    sc.validate(pp.n_parties, pp.slice_count);
    if (pp.n_parties > 20) {
        throw ConfigError("the simulator supports at most 20 parties");
    }
    const auto branches = static_cast<std::size_t>(pp.n_parties - 1);
    RoundModel model{pp.n_parties,
                     pp.slice_count,
                     kTwoPi / pp.slice_count,
                     transmittance(ch) * pp.signal_intensity,
                     ch.dark_count,
                     sc.mode,
                     pp.slice_count % 2 == 0,
                     sc.reference_offsets.empty() ? std::vector<double>(branches, 0.0) : sc.reference_offsets,
                     sc.slice_adjust.empty() ? std::vector<int>(branches, 0) : sc.slice_adjust};

    const std::uint64_t chunks = (sc.rounds + sc.chunk_rounds - 1) / sc.chunk_rounds;
    SimTally blank(pp.n_parties);
    blank.forced_slices = sc.mode == SimMode::forced_matching ? pp.slice_count : 0;
    std::vector<SimTally> partial(chunks, blank);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            const std::uint64_t begin = c * sc.chunk_rounds;
            const std::uint64_t count = std::min(sc.chunk_rounds, sc.rounds - begin);
            simulate_chunk(model, count, chunk_seed(sc.seed, c), partial[c]);
        }
    };
    unsigned workers = sc.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : sc.workers;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    SimTally total(pp.n_parties);
    total.forced_slices = sc.mode == SimMode::forced_matching ? pp.slice_count : 0;
    for (const auto& t : partial) {
        total.merge(t);
    }
    return total;
}

double matched_slice_fraction(int slice_count) {
    return (slice_count % 2 == 0 ? 2.0 : 1.0) / slice_count;
}

double wilson_half_width(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) {
        throw InsufficientDataError("wilson_half_width: no trials");
    }
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    return z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
}

EmpiricalEstimate estimate(const SimTally& tally, double z) {
    if (tally.success == 0) {
        throw InsufficientDataError("no successful detection events");
    }
    EmpiricalEstimate est;
    est.sifting_fraction = tally.forced_slices > 0
                               ? std::pow(matched_slice_fraction(tally.forced_slices), tally.n_parties() - 1)
                               : static_cast<double>(tally.sifted) / static_cast<double>(tally.sent);
    est.gain = static_cast<double>(tally.success) / static_cast<double>(tally.sifted);
    est.gain_half_width = wilson_half_width(tally.success, tally.sifted, z);
    for (const auto errors : tally.pair_errors) {
        est.pair_qbers.push_back(static_cast<double>(errors) / static_cast<double>(tally.success));
        est.pair_half_widths.push_back(wilson_half_width(errors, tally.success, z));
    }
    return est;
}

SimComparison compare_to_analytic(const ProtocolParams& pp, const ChannelParams& ch, const SimConfig& sc,
                                  const SimTally& tally) {
    const auto est = estimate(tally);
    const auto branches = static_cast<std::size_t>(pp.n_parties - 1);
    std::vector<double> residuals(branches, 0.0);
    for (std::size_t l = 0; l < branches; ++l) {
        const double offset = sc.reference_offsets.empty() ? 0.0 : sc.reference_offsets[l];
        const int adjust = sc.slice_adjust.empty() ? 0 : sc.slice_adjust[l];
        residuals[l] = residual_offset(offset, adjust, pp.slice_count);
    }
    const double arrival = transmittance(ch) * pp.signal_intensity;
    const auto exact = chain_average_exact(arrival, ch.dark_count, pp.slice_count, residuals);

    const double branch_gain = branch_gain_avg(arrival, ch.dark_count);
    const double branch_qber = branch_qber_avg(arrival, ch.dark_count, pp.slice_count);

    SimComparison out;
    auto add = [&](std::string name, double empirical, double analytic, double closed_form, std::uint64_t trials) {
        ComparisonEntry e;
        e.name = std::move(name);
        e.empirical = empirical;
        e.analytic = analytic;
        e.closed_form = closed_form;
        const double n = static_cast<double>(trials);
        e.sigma = std::sqrt(analytic * (1.0 - analytic) / n);
        e.sigma_distance = e.sigma > 0.0 ? std::abs(empirical - analytic) / e.sigma
                                         : (empirical == analytic ? 0.0 : INFINITY);
        const double closed_sigma = std::sqrt(closed_form * (1.0 - closed_form) / n);
        e.closed_form_sigma_distance = closed_sigma > 0.0 ? std::abs(empirical - closed_form) / closed_sigma
                                                          : (empirical == closed_form ? 0.0 : INFINITY);
        out.max_sigma_distance = std::max(out.max_sigma_distance, e.sigma_distance);
        out.entries.push_back(std::move(e));
    };
    add("gain", est.gain, exact.gain, std::pow(branch_gain, pp.n_parties - 1), tally.sifted);
    for (std::size_t l = 0; l < branches; ++l) {
        add("qber_P1P" + std::to_string(l + 2), est.pair_qbers[l], exact.pair_qbers[l],
            marginal_qber(branch_qber, static_cast<int>(l) + 2), tally.success);
    }
    return out;
}

}  // namespace pmqcc
