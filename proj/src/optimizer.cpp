#include "pmqcc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pmqcc/decoy.hpp"
#include "pmqcc/errors.hpp"
#include "pmqcc/interference.hpp"

namespace pmqcc {

std::string to_string(Objective objective) {
    switch (objective) {
        case Objective::pmqcc:
            return "pmqcc";
        case Objective::pmqcc_star:
            return "pmqcc-star";
        case Objective::reduced:
            return "reduced";
    }
    return "pmqcc";
}

Objective objective_from_string(const std::string& name) {
    if (name == "pmqcc") {
        return Objective::pmqcc;
    }
    if (name == "pmqcc-star" || name == "pmqcc_star") {
        return Objective::pmqcc_star;
    }
    if (name == "reduced") {
        return Objective::reduced;
    }
    throw ConfigError("unknown objective '" + name + "'");
}

namespace {

RateReport evaluate(const ProtocolParams& pp, const ChannelParams& ch, Objective objective, Boundaries boundaries) {
    switch (objective) {
        case Objective::pmqcc:
            return rate_pmqcc(pp, ch);
        case Objective::pmqcc_star:
            return rate_pmqcc_star(pp, ch);
        case Objective::reduced:
            return rate_reduced(pp, ch, boundaries);
    }
    throw DomainError("unknown objective");
}

// Rate as a function of (mu, M) with the M-independent terms cached per mu.
class SignalObjective {
public:
    SignalObjective(const ChannelParams& ch, const ProtocolParams& base, Objective objective, Boundaries boundaries)
        : ch_(ch), base_(base), objective_(objective), boundaries_(boundaries), eta_(transmittance(ch)) {}

    struct Point {
        double arrival = 0.0;
        double gain = 0.0;
        double phase_error = 0.0;
    };

    Point prepare(double mu) {
        ++evaluations;
        Point p;
        p.arrival = eta_ * mu;
        p.gain = branch_gain_avg(p.arrival, ch_.dark_count);
        if (p.gain > 0.0) {
            p.phase_error = signal_phase_error(base_.n_parties, mu, ch_,
                                               objective_ == Objective::reduced ? boundaries_ : Boundaries{});
        }
        return p;
    }

    double rate(const Point& p, int slices) const {
        if (!(p.gain > 0.0)) {
            return 0.0;
        }
        if (objective_ == Objective::pmqcc_star) {
            const double qber = qber_star(p.arrival, ch_.dark_count, base_.signal_phase_misalignment);
            return assemble_rate(base_.n_parties, 1.0, p.gain, qber, p.phase_error, base_.ec_efficiency).rate;
        }
        const double prefactor = std::pow(2.0 / slices, base_.n_parties - 1);
        const double qber = branch_qber_avg(p.arrival, ch_.dark_count, slices);
        return assemble_rate(base_.n_parties, prefactor, p.gain, qber, p.phase_error, base_.ec_efficiency).rate;
    }

    std::uint64_t evaluations = 0;

private:
    ChannelParams ch_;
    ProtocolParams base_;
    Objective objective_;
    Boundaries boundaries_;
    double eta_;
};

struct Best {
    double rate = 0.0;
    int slices = 0;
};

Best best_slices(const SignalObjective& objective, const SignalObjective::Point& p, const SignalSearch& search,
                 bool scan, int fixed) {
    if (!scan) {
        return {objective.rate(p, fixed), fixed};
    }
    Best best{-1.0, search.slices_min};
    for (int m = search.slices_min; m <= search.slices_max; ++m) {
        const double r = objective.rate(p, m);
        if (r > best.rate) {
            best = {r, m};
        }
    }
    return best;
}

}  // namespace

OptimizationResult optimize_signal(const ChannelParams& ch, const ProtocolParams& base, Objective objective,
                                   Boundaries boundaries, const SignalSearch& search) {
    ch.validate();
    base.validate();
    if (!(search.mu_min > 0.0 && search.mu_min < search.mu_max) || search.mu_grid_points < 3 ||
        search.slices_min < 2 || search.slices_min > search.slices_max) {
        throw ConfigError("invalid signal search settings");
    }
    const bool scan = objective != Objective::pmqcc_star;
    SignalObjective f(ch, base, objective, boundaries);
    OptimizationResult result;

    const int n = search.mu_grid_points;
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double log_lo = std::log(search.mu_min);
    const double log_hi = std::log(search.mu_max);
    for (int i = 0; i < n; ++i) {
        grid[static_cast<std::size_t>(i)] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
    }

    auto record = [&](double mu, int slices, double rate) {
        if (search.record_trace) {
            ProtocolParams pp = base;
            pp.signal_intensity = mu;
            pp.slice_count = slices;
            result.trace.push_back({pp, rate});
        }
    };

    int best_index = -1;
    Best best{0.0, base.slice_count};
    for (int i = 0; i < n; ++i) {
        const double mu = grid[static_cast<std::size_t>(i)];
        const auto b = best_slices(f, f.prepare(mu), search, scan, base.slice_count);
        record(mu, b.slices, b.rate);
        if (b.rate > best.rate) {
            best = b;
            best_index = i;
        }
    }

    if (best_index < 0) {
        result.best_params = base;
        result.best_report = evaluate(base, ch, objective, boundaries);
        result.best_rate = result.best_report.rate;
        result.zero_rate = true;
        result.evaluations = f.evaluations + 1;
        return result;
    }

    double lo = grid[static_cast<std::size_t>(std::max(best_index - 1, 0))];
    double hi = grid[static_cast<std::size_t>(std::min(best_index + 1, n - 1))];
    double mu_best = grid[static_cast<std::size_t>(best_index)];
    int slices = best.slices;
    double rate_best = best.rate;

    for (int round = 0; round < 16; ++round) {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo;
        double b = hi;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = f.rate(f.prepare(c), slices);
        double fd = f.rate(f.prepare(d), slices);
        while (b - a > search.mu_tolerance) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f.rate(f.prepare(c), slices);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f.rate(f.prepare(d), slices);
            }
        }
        const double mu = fc >= fd ? c : d;
        const auto b_new = best_slices(f, f.prepare(mu), search, scan, slices);
        record(mu, b_new.slices, b_new.rate);
        if (b_new.rate > rate_best) {
            rate_best = b_new.rate;
            mu_best = mu;
        }
        if (b_new.slices == slices) {
            break;
        }
        slices = b_new.slices;
    }

    result.best_params = base;
    result.best_params.signal_intensity = mu_best;
    if (scan) {
        result.best_params.slice_count = slices;
    }
    result.best_report = evaluate(result.best_params, ch, objective, boundaries);
    result.best_rate = result.best_report.rate;
    result.zero_rate = !(result.best_rate > 0.0);
    result.evaluations = f.evaluations + 1;
    return result;
}

namespace {

class DecoyObjective {
public:
    DecoyObjective(const ChannelParams& ch, const ProtocolParams& base) : ch_(ch), base_(base) {}

    double operator()(const std::vector<double>& decoys) {
        ++evaluations;
        ProtocolParams pp = params(decoys);
        try {
            return rate_lower(pp, ch_).rate;
        } catch (const ConfigError&) {
        } catch (const DegenerateGeometryError&) {
        } catch (const InsufficientDataError&) {
        } catch (const DomainError&) {
        }
        return 0.0;
    }

    ProtocolParams params(const std::vector<double>& decoys) const {
        ProtocolParams pp = base_;
        pp.decoy_intensities = decoys;
        pp.decoy_intensities.push_back(0.0);
        return pp;
    }

    std::uint64_t evaluations = 0;

private:
    ChannelParams ch_;
    ProtocolParams base_;
};

}  // namespace

OptimizationResult optimize_decoys(const ChannelParams& ch, const ProtocolParams& base, const DecoySearch& search) {
    ch.validate();
    ProtocolParams signal_only = base;
    signal_only.decoy_intensities.clear();
    signal_only.validate();
    const auto count = static_cast<std::size_t>(cut_order(base.n_parties) + 1);

    auto box = search.box;
    if (box.empty()) {
        box.assign(count, {1e-6, base.signal_intensity});
    }
    if (box.size() != count) {
        throw ConfigError("decoy search box needs one interval per decoy");
    }
    for (const auto& [lo, hi] : box) {
        if (!(lo > 0.0 && lo <= hi)) {
            throw ConfigError("decoy search box bounds must satisfy 0 < lower <= upper");
        }
    }
    if (!search.initial.empty() && search.initial.size() != count) {
        throw ConfigError("initial decoy point has the wrong length");
    }

    DecoyObjective f(ch, signal_only);
    OptimizationResult result;
    std::vector<double> best_point;
    double best_rate = -1.0;

    auto clamp_to_box = [&](std::vector<double> x) {
        for (std::size_t i = 0; i < count; ++i) {
            x[i] = std::clamp(x[i], box[i].first, box[i].second);
        }
        return x;
    };
    auto consider = [&](const std::vector<double>& x, double rate) {
        if (search.record_trace) {
            result.trace.push_back({f.params(x), rate});
        }
        if (rate > best_rate) {
            best_rate = rate;
            best_point = x;
        }
    };

    auto descend = [&](std::vector<double> x) {
        double fx = f(x);
        consider(x, fx);
        for (double step = search.initial_step; step >= search.step_tolerance; step *= 0.5) {
            bool improved = true;
            while (improved && f.evaluations < search.max_evaluations) {
                improved = false;
                for (std::size_t i = 0; i < count; ++i) {
                    for (const double dir : {1.0, -1.0}) {
                        auto trial = x;
                        trial[i] = std::clamp(x[i] * std::exp(dir * step), box[i].first, box[i].second);
                        if (trial[i] == x[i]) {
                            continue;
                        }
                        const double ft = f(trial);
                        if (ft > fx) {
                            x = std::move(trial);
                            fx = ft;
                            consider(x, fx);
                            improved = true;
                            break;
                        }
                    }
                }
            }
        }
    };

    if (!search.initial.empty()) {
        descend(clamp_to_box(search.initial));
    }
    for (const auto seed : search.restart_seeds) {
        std::mt19937_64 rng(seed);
        std::vector<double> x(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            x[i] = std::exp(std::log(box[i].first) + u * (std::log(box[i].second) - std::log(box[i].first)));
        }
        std::sort(x.begin(), x.end(), std::greater<>());
        descend(clamp_to_box(x));
    }

    result.best_params = f.params(best_point);
    result.evaluations = f.evaluations + 1;
    if (best_rate > 0.0) {
        result.best_report = rate_lower(result.best_params, ch);
        result.best_rate = result.best_report.rate;
    } else {
        result.best_report.protocol = "decoy-lower";
        result.best_report.clamped = true;
        result.best_rate = 0.0;
    }
    result.zero_rate = !(result.best_rate > 0.0);
    return result;
}

}  // namespace pmqcc
