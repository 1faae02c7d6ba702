#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "pmqcc/core_model.hpp"
#include "pmqcc/errors.hpp"
#include "pmqcc/interference.hpp"

using namespace pmqcc;
constexpr double kPi = std::numbers::pi;

namespace {

// Average wrong-port probability of a slice pair, (1 - sinc^3(pi/M)) / 2.
double normalized_slice_misalignment(int m) {
    const double x = kPi / m;
    const double sinc = std::sin(x) / x;
    return 0.5 * (1.0 - sinc * sinc * sinc);
}

}  // namespace

TEST_SUITE("interference") {
    TEST_CASE("click probabilities") {
        const auto in_phase = click_probabilities(0.3, 0.0, 0.0);
        CHECK(in_phase.p_right_click == 0.0);
        const auto opposite = click_probabilities(0.3, kPi, 0.0);
        CHECK(std::abs(opposite.p_left_click) < 1e-15);
        const auto cp = click_probabilities(0.00866, 0.0, 0.0);
        CHECK(cp.p_left_click == doctest::Approx(0.0086226102097071373).epsilon(1e-13));
        CHECK_THROWS_AS(click_probabilities(-0.1, 0.0, 0.0), DomainError);
        CHECK_THROWS_AS(click_probabilities(0.1, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(click_probabilities(0.1, 0.0, -1e-9), DomainError);
    }

    TEST_CASE("click probabilities are complementary and periodic") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> phase(-20.0, 20.0);
        for (int i = 0; i < 200; ++i) {
            const double d = phase(rng);
            const auto cp = click_probabilities(0.7, d, 1e-3);
            CHECK(cp.p_left_click + cp.p_left_silent == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(cp.p_right_click + cp.p_right_silent == doctest::Approx(1.0).epsilon(1e-15));
            const auto wrapped = click_probabilities(0.7, d + 2.0 * kPi, 1e-3);
            CHECK(wrapped.p_left_click == doctest::Approx(cp.p_left_click).epsilon(1e-12));
        }
    }

    TEST_CASE("branch success") {
        CHECK(branch_success(click_probabilities(0.2, 0.0, 0.0)).qber == 0.0);
        CHECK(branch_success(click_probabilities(0.2, kPi / 2, 0.0)).qber == doctest::Approx(0.5).epsilon(1e-14));
        const auto b = branch_success(click_probabilities(0.00866, 0.0, 7.2e-8));
        CHECK(b.gain == doctest::Approx(0.0086227523472130534).epsilon(1e-12));
        const auto dark = branch_success(click_probabilities(0.0, 0.0, 0.0));
        CHECK(dark.gain == 0.0);
        CHECK(dark.qber == 0.0);
    }

    TEST_CASE("outcome partition sums to one") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 300; ++i) {
            const auto cp = click_probabilities(3.0 * u(rng), 7.0 * u(rng), 0.1 * u(rng));
            const double neither = cp.p_left_silent * cp.p_right_silent;
            CHECK(branch_success(cp).gain + branch_double_click(cp) + neither == doctest::Approx(1.0).epsilon(1e-14));
        }
    }

    TEST_CASE("slice-averaged gain") {
        CHECK(branch_gain_avg(0.0, 0.0) == 0.0);
        CHECK(branch_gain_avg(0.0086645, 7.2e-8) == doctest::Approx(0.0086272141556252313).epsilon(1e-13));
        CHECK(branch_gain_avg(0.01, 1e-7) == doctest::Approx(0.0099503642607986963).epsilon(1e-13));
    }

    TEST_CASE("slice-averaged qber") {
        CHECK(branch_qber_avg(0.0086645, 7.2e-8, 13) == doctest::Approx(0.0069458806733298151).epsilon(1e-12));
        CHECK(branch_qber_avg(0.01, 0.0, 1000000) < 1e-15);
        CHECK(branch_qber_avg(0.0086645, 1.44e-7, 13) > branch_qber_avg(0.0086645, 7.2e-8, 13));
        CHECK_THROWS_AS(branch_qber_avg(0.0, 0.0, 13), InsufficientDataError);
    }

    TEST_CASE("phase delta density") {
        for (const int m : {4, 13, 64}) {
            for (const double offset : {0.0, 0.5 * kPi / m, -0.9 * kPi / m}) {
                const double w = 2.0 * kPi / m;
                CHECK(phase_delta_density(offset, offset, m) == doctest::Approx(m / (2.0 * kPi)).epsilon(1e-12));
                CHECK(phase_delta_density(offset - w, offset, m) == doctest::Approx(0.0).epsilon(1e-12));
                CHECK(std::abs(phase_delta_density(offset - w, offset, m)) < 1e-9);
                CHECK(phase_delta_density(offset + w, offset, m) == 0.0);
                CHECK(phase_delta_density(offset + 2.0 * w, offset, m) == 0.0);
                // Piecewise linear: the trapezoid rule with nodes at the kinks is exact.
                double integral = 0.0;
                const int steps = 2000;
                for (int i = 0; i < steps; ++i) {
                    const double a = offset - w + 2.0 * w * i / steps;
                    const double b = offset - w + 2.0 * w * (i + 1) / steps;
                    const double fb = i + 1 == steps ? 0.0 : phase_delta_density(b, offset, m);
                    integral += 0.5 * (b - a) * (phase_delta_density(a, offset, m) + fb);
                }
                CHECK(std::abs(integral - 1.0) < 1e-9);
            }
        }
    }

    TEST_CASE("quadrature gain matches the slice-averaged gain") {
        const auto exact = branch_average_exact_over_offsets(0.00866, 7.2e-8, 13);
        CHECK(std::abs(exact.gain / branch_gain_avg(0.00866, 7.2e-8) - 1.0) < 5e-3);
        const auto fixed = branch_average_exact(0.00866, 7.2e-8, 13, 0.0);
        CHECK(std::abs(fixed.gain / branch_gain_avg(0.00866, 7.2e-8) - 1.0) < 5e-3);
    }

    TEST_CASE("misalignment closed form is 2pi/M times the normalized slice average") {
        for (int m = 4; m <= 200; ++m) {
            CHECK(intrinsic_misalignment(m) ==
                  doctest::Approx(2.0 * kPi / m * normalized_slice_misalignment(m)).epsilon(1e-10));
        }
        CHECK(normalized_slice_misalignment(13) == doctest::Approx(0.01441661148888112).epsilon(1e-12));
    }

    TEST_CASE("quadrature qber matches the closed form with the normalized average") {
        for (const double a : {1e-4, 0.00866, 0.05}) {
            for (const double pd : {0.0, 1e-7, 1e-6}) {
                for (const int m : {8, 13, 32}) {
                    const auto exact = branch_average_exact_over_offsets(a, pd, m);
                    const double model = (pd + a * normalized_slice_misalignment(m)) * std::exp(-a) /
                                         branch_gain_avg(a, pd);
                    CHECK(std::abs(exact.qber / model - 1.0) < 1e-2);
                    // The published closed form is smaller by exactly the 2pi/M factor in the
                    // misalignment term, so it under-states the quadrature QBER.
                    CHECK(branch_qber_avg(a, pd, m) < exact.qber);
                }
            }
        }
    }

    TEST_CASE("chain average reduces to the single-branch average") {
        for (const double r : {0.0, 0.1, -0.2}) {
            const std::vector<double> offsets{r};
            const auto chain = chain_average_exact(0.3, 1e-5, 13, offsets);
            const auto single = branch_average_exact(0.3, 1e-5, 13, r);
            CHECK(chain.gain == doctest::Approx(single.gain).epsilon(1e-10));
            CHECK(chain.pair_qbers.at(0) == doctest::Approx(single.qber).epsilon(1e-9));
        }
    }

    TEST_CASE("chain average of two branches matches nested quadrature") {
        using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
        const int m = 8;
        const double a = 0.4;
        const double pd = 1e-4;
        const double w = 2.0 * kPi / m;
        const std::vector<double> offsets{0.05, -0.1};
        auto rates = [&](double delta) {
            const auto cp = click_probabilities(a, delta, pd);
            const double right_only = cp.p_left_silent * cp.p_right_click;
            return std::array<double, 2>{cp.p_left_click * cp.p_right_silent, right_only};
        };
        // Sum over (error1, error2) of integrals; parity odd for P1P3 when exactly one errs.
        double total = 0.0;
        double odd13 = 0.0;
        double odd12 = 0.0;
        for (int e1 = 0; e1 < 2; ++e1) {
            for (int e2 = 0; e2 < 2; ++e2) {
                const double v = GK::integrate(
                    [&](double x1) {
                        return GK::integrate(
                            [&](double x2) {
                                return GK::integrate(
                                    [&](double x3) {
                                        return rates(x2 - x1 + offsets[0])[e1] * rates(x3 - x2 + offsets[1])[e2];
                                    },
                                    0.0, w, 0, 1e-14);
                            },
                            0.0, w, 0, 1e-14);
                    },
                    0.0, w, 0, 1e-14) / (w * w * w);
                total += v;
                if (e1 != e2) {
                    odd13 += v;
                }
                if (e1 == 1) {
                    odd12 += v;
                }
            }
        }
        const auto chain = chain_average_exact(a, pd, m, offsets);
        CHECK(chain.gain == doctest::Approx(total).epsilon(1e-9));
        CHECK(chain.pair_qbers.at(0) == doctest::Approx(odd12 / total).epsilon(1e-8));
        CHECK(chain.pair_qbers.at(1) == doctest::Approx(odd13 / total).epsilon(1e-8));
    }
}
