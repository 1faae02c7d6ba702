#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "pmqcc/errors.hpp"
#include "pmqcc/interference.hpp"
#include "pmqcc/keyrate.hpp"
#include "pmqcc/yield_oracle.hpp"
#include "support.hpp"

using namespace pmqcc;
using pmqcc::testing::rel_diff;
using pmqcc::testing::table_channel;
using pmqcc::testing::table_protocol;

TEST_SUITE("keyrate") {
    TEST_CASE("marginal qber") {
        CHECK(marginal_qber(0.07, 2) == 0.07);
        CHECK(marginal_qber(0.1, 3) == doctest::Approx(0.18).epsilon(1e-14));
        for (int m = 2; m <= 8; ++m) {
            CHECK(marginal_qber(0.0, m) == 0.0);
        }
        // Odd number of errors over four links, enumerated by hand.
        const double e = 0.2;
        CHECK(marginal_qber(e, 5) ==
              doctest::Approx(4 * e * std::pow(1 - e, 3) + 4 * std::pow(e, 3) * (1 - e)).epsilon(1e-14));
        CHECK_THROWS_AS(marginal_qber(0.1, 1), DomainError);
        CHECK_THROWS_AS(marginal_qber(1.5, 3), DomainError);
    }

    TEST_CASE("rate at the reference configuration") {
        const auto r = rate_pmqcc(table_protocol(0.1333, 13), table_channel(50));
        CHECK(r.rate == doctest::Approx(2.6989199656742682e-7).epsilon(1e-9));
        CHECK(rel_diff(r.rate, 2.6989e-7) < 0.03);
        CHECK(r.sifting_prefactor == doctest::Approx(std::pow(2.0 / 13.0, 2)).epsilon(1e-15));
        CHECK(r.gain == doctest::Approx(std::pow(branch_gain_avg(0.065 * 0.1333, 7.2e-8), 2)).epsilon(1e-15));
        CHECK(r.phase_error == doctest::Approx(0.20152964345524807).epsilon(1e-10));
        CHECK(r.marginal_qbers.size() == 2);
        CHECK(r.protocol == "pmqcc");
        CHECK_FALSE(r.clamped);
    }

    TEST_CASE("rate at 150 km") {
        const auto r = rate_pmqcc(table_protocol(0.1263, 13), table_channel(150));
        CHECK(rel_diff(r.rate, 2.2928e-11) < 0.03);
    }

    TEST_CASE("dark channel gives zero rate") {
        ChannelParams ch{0.2, 1e5, 0.65, 0.0};
        const auto r = rate_pmqcc(table_protocol(0.1333, 13), ch);
        CHECK(r.rate == 0.0);
        CHECK(r.clamped);
        const auto star = rate_pmqcc_star(table_protocol(0.1333, 13), ch);
        CHECK(star.rate == 0.0);
    }

    TEST_CASE("negative raw rates are clamped") {
        ChannelParams ch = table_channel(300);
        const auto r = rate_pmqcc(table_protocol(0.13, 13), ch);
        CHECK(r.raw_rate < 0.0);
        CHECK(r.rate == 0.0);
        CHECK(r.clamped);
    }

    TEST_CASE("qber star") {
        CHECK(qber_star(0.3, 0.0, 0.0) == 0.0);
        const double a = 0.3;
        CHECK(qber_star(a, 0.0, 0.5) ==
              doctest::Approx(std::exp(-a / 2) * (1 - std::exp(-a / 2)) / branch_gain_avg(a, 0.0)).epsilon(1e-14));
        CHECK(qber_star(0.00866, 1e-7, 0.015) == doctest::Approx(0.014947266035609681).epsilon(1e-11));
        // Same quantity from the click model at sin^2(delta/2) = e*.
        const double delta = 2.0 * std::asin(std::sqrt(0.015));
        const auto cp = click_probabilities(0.00866, delta, 1e-7);
        CHECK(qber_star(0.00866, 1e-7, 0.015) ==
              doctest::Approx(cp.p_left_silent * cp.p_right_click / branch_gain_avg(0.00866, 1e-7)).epsilon(1e-12));
        CHECK_THROWS_AS(qber_star(0.1, 0.0, 0.6), DomainError);
        CHECK_THROWS_AS(qber_star(0.0, 0.0, 0.1), InsufficientDataError);
    }

    TEST_CASE("pmqcc star without errors") {
        ProtocolParams pp = table_protocol(0.2, 13, 2);
        ChannelParams ch{0.2, 0.0, 1.0, 0.0};
        const auto r = rate_pmqcc_star(pp, ch);
        CHECK(r.sifting_prefactor == 1.0);
        CHECK(r.protocol == "pmqcc-star");
        CHECK(r.rate == doctest::Approx(r.gain * (1.0 - binary_entropy(r.phase_error))).epsilon(1e-14));
    }

    TEST_CASE("reduced network") {
        const auto r50 = rate_reduced(table_protocol(0.1059, 13), table_channel(50), {true, false});
        CHECK(r50.rate == doctest::Approx(1.7059606097779909e-7).epsilon(1e-9));
        CHECK(rel_diff(r50.rate, 1.7060e-7) < 0.05);
        const auto r100 = rate_reduced(table_protocol(0.1032, 13), table_channel(100), {true, false});
        CHECK(rel_diff(r100.rate, 1.6152e-9) < 0.05);
        const auto plain = rate_pmqcc(table_protocol(0.1059, 13), table_channel(50));
        const auto same = rate_reduced(table_protocol(0.1059, 13), table_channel(50), {});
        CHECK(same.rate == plain.rate);
        CHECK(same.phase_error == plain.phase_error);
        CHECK(r50.gain == plain.gain);
    }

    TEST_CASE("two parties") {
        const auto r = rate_pmqcc(table_protocol(0.2, 10, 2), table_channel(0));
        CHECK(r.rate > 0.0);
        CHECK(r.marginal_qbers.size() == 1);
        CHECK(r.marginal_qbers[0] == r.branch_qber);
        CHECK(r.sifting_prefactor == doctest::Approx(0.2).epsilon(1e-15));
        const auto ideal = rate_pmqcc(table_protocol(0.2, 10, 2), ChannelParams{0.2, 0.0, 1.0, 0.0});
        CHECK(ideal.rate > 0.0);
    }

    TEST_CASE("worst marginal is the longest chain") {
        for (const int n : {3, 4, 5, 6}) {
            const auto r = rate_pmqcc(table_protocol(0.1, 13, n), table_channel(40));
            for (std::size_t i = 1; i < r.marginal_qbers.size(); ++i) {
                CHECK(r.marginal_qbers[i] >= r.marginal_qbers[i - 1]);
            }
        }
    }

    TEST_CASE("rate monotone in dark count and detector efficiency") {
        for (const double L : {20.0, 80.0, 140.0}) {
            double prev = INFINITY;
            for (const double pd : {0.0, 1e-9, 1e-8, 1e-7, 1e-6}) {
                const double r = rate_pmqcc(table_protocol(0.13, 13), {0.2, L, 0.65, pd}).rate;
                CHECK(r <= prev);
                prev = r;
            }
            prev = -1.0;
            for (const double eff : {0.2, 0.4, 0.65, 0.9, 1.0}) {
                const double r = rate_pmqcc(table_protocol(0.13, 13), {0.2, L, eff, 7.2e-8}).rate;
                CHECK(r >= prev);
                prev = r;
            }
        }
    }

    TEST_CASE("pipeline gain agrees with the yield oracle") {
        for (const double L : {0.0, 50.0, 100.0, 150.0}) {
            for (const double mu : {0.05, 0.13, 0.3}) {
                for (const int n : {2, 3, 4}) {
                    const auto ch = table_channel(L);
                    const auto r = rate_pmqcc(table_protocol(mu, 13, n), ch);
                    const auto top = symmetric_topology(n, mu, transmittance(ch), ch.dark_count);
                    CHECK(rel_diff(r.gain, gain_from_yields(yield_table(top), top)) < 5e-3);
                }
            }
        }
    }

    TEST_CASE("scaling exponent") {
        const std::vector<std::pair<double, double>> rows{{50.0, 2.6989e-7}, {100.0, 2.5332e-9}};
        CHECK(scaling_exponent(rows) == doctest::Approx((std::log10(2.5332e-9) - std::log10(2.6989e-7)) / 50.0));
        CHECK(scaling_exponent(rows) == doctest::Approx(-0.0406).epsilon(5e-3));
        const std::vector<std::pair<double, double>> flat{{0.0, 1e-3}, {10.0, 1e-3}, {20.0, 1e-3}};
        CHECK(scaling_exponent(flat) == doctest::Approx(0.0));
        const std::vector<std::pair<double, double>> one{{0.0, 1e-3}, {10.0, 0.0}};
        CHECK_THROWS_AS(scaling_exponent(one), InsufficientDataError);
    }

    TEST_CASE("four-party curve slope") {
        std::vector<std::pair<double, double>> rows;
        for (double L = 50.0; L <= 150.0; L += 10.0) {
            rows.emplace_back(L, rate_pmqcc(table_protocol(0.10, 15, 4), table_channel(L)).rate);
        }
        CHECK(std::abs(scaling_exponent(rows) + 0.060) < 0.003);
    }
}
