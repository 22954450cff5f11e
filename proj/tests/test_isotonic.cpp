#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sccp/isotonic.hpp"
#include "sccp/random.hpp"

using sccp::IsotonicFit;
using sccp::WeightedSample;
using sccp::fit_isotonic;

namespace {

std::vector<WeightedSample> make_samples(std::vector<double> pos,
                                         std::vector<double> out,
                                         std::vector<double> w = {}) {
    std::vector<WeightedSample> s;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        s.push_back({pos[i], out[i], w.empty() ? 1.0 : w[i]});
    }
    return s;
}

std::vector<WeightedSample> random_instance(std::uint64_t seed, std::size_t n,
                                            bool random_weights) {
    std::vector<WeightedSample> s;
    for (std::size_t i = 0; i < n; ++i) {
        WeightedSample w;
        w.position = sccp::rng::uniform(-2.0, 2.0, seed, 1, i);
        w.outcome = sccp::rng::uniform(-1.0, 1.0, seed, 2, i);
        w.weight = random_weights ? sccp::rng::uniform(0.1, 3.0, seed, 3, i) : 1.0;
        s.push_back(w);
    }
    return s;
}

}  // namespace

TEST_CASE("simple violation pools the upper pair") {
    const auto fit = fit_isotonic(make_samples({1, 2, 3}, {1, 3, 2}), 0.0);
    REQUIRE(fit.segment_count() == 2);
    CHECK(fit.segment_values()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.segment_values()[1] == doctest::Approx(2.5).epsilon(1e-12));
    REQUIRE(fit.breakpoints().size() == 1);
    CHECK(fit.breakpoints()[0] == doctest::Approx(1.5));
    CHECK(fit.evaluate(1.0) == doctest::Approx(1.0));
    CHECK(fit.evaluate(10.0) == doctest::Approx(2.5));
    CHECK(fit.evaluate(1.5) == doctest::Approx(2.5));  // breakpoint goes right
}

TEST_CASE("monotone data is reproduced") {
    const auto fit = fit_isotonic(make_samples({1, 2, 3}, {1, 2, 3}), 0.0);
    REQUIRE(fit.segment_count() == 3);
    CHECK(fit.segment_values()[0] == 1.0);
    CHECK(fit.segment_values()[1] == 2.0);
    CHECK(fit.segment_values()[2] == 3.0);
}

TEST_CASE("mass constraint forces one segment") {
    const auto fit = fit_isotonic(make_samples({1, 2, 3}, {1, 3, 2}), 3.0);
    REQUIRE(fit.segment_count() == 1);
    CHECK(fit.segment_values()[0] == doctest::Approx(2.0));
    CHECK(fit.segment_masses()[0] == doctest::Approx(3.0));
    CHECK(fit.evaluate(-100.0) == doctest::Approx(2.0));
}

TEST_CASE("ties in position always share a segment") {
    const auto fit = fit_isotonic(make_samples({1, 1, 2}, {5, 1, 0}), 0.0);
    // Position 1 pools to mean 3; violates against 0 at position 2 -> one segment.
    REQUIRE(fit.segment_count() == 1);
    CHECK(fit.segment_values()[0] == doctest::Approx(2.0));
}

TEST_CASE("input validation") {
    CHECK_THROWS_WITH_AS(fit_isotonic({}, 0.0), "empty sample", std::invalid_argument);
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(fit_isotonic(make_samples({1, nan}, {0, 0}), 0.0),
                         "non-finite input", std::invalid_argument);
    CHECK_THROWS_AS(fit_isotonic(make_samples({1}, {1}, {-1}), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_isotonic(make_samples({1}, {1}, {0}), 0.0),
                    std::invalid_argument);
    const auto fit = fit_isotonic(make_samples({1, 2}, {1, 2}), 0.0);
    CHECK_THROWS_AS(fit.evaluate(nan), std::invalid_argument);
}

TEST_CASE("min mass merging keeps remaining segments heavy enough") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto samples = random_instance(900 + seed, 40, false);
        const double min_mass = 5.0;
        const auto fit = fit_isotonic(samples, min_mass);
        double total = 0.0;
        for (const auto& s : samples) total += s.weight;
        if (total >= 2.0 * min_mass && fit.segment_count() > 1) {
            for (double m : fit.segment_masses()) CHECK(m >= min_mass);
        }
        for (std::size_t k = 1; k < fit.segment_count(); ++k) {
            CHECK(fit.segment_values()[k] >= fit.segment_values()[k - 1]);
        }
    }
}

TEST_CASE("matches brute-force enumeration on small instances") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + static_cast<std::size_t>(
                                      sccp::rng::uniform01(seed, 7, 0) * 7);
        const auto samples = random_instance(seed, n, false);
        const auto fit = fit_isotonic(samples, 0.0);
        const auto expected = oracle::brute_force_isotonic(samples);
        const auto sorted = oracle::sort_samples(samples);
        double sse = 0.0;
        for (std::size_t i = 0; i < sorted.pos.size(); ++i) {
            const double v = fit.evaluate(sorted.pos[i]);
            CHECK(std::abs(v - expected.fitted[i]) <= 1e-9);
            const double r = sorted.y[i] - v;
            sse += sorted.w[i] * r * r;
        }
        CHECK(std::abs(sse - expected.sse) <= 1e-9);
    }
}

TEST_CASE("first-order conditions: segment values are weighted means") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto samples = random_instance(300 + seed, 60, true);
        const double min_mass = seed % 2 == 0 ? 0.0 : 4.0;
        const auto fit = fit_isotonic(samples, min_mass);
        const auto sorted = oracle::sort_samples(samples);

        std::vector<double> sw(fit.segment_count(), 0.0);
        std::vector<double> swy(fit.segment_count(), 0.0);
        for (std::size_t i = 0; i < sorted.pos.size(); ++i) {
            const std::size_t seg = fit.segment_index(sorted.pos[i]);
            sw[seg] += sorted.w[i];
            swy[seg] += sorted.w[i] * sorted.y[i];
        }
        double total_w = 0.0, fitted_mean = 0.0, outcome_mean = 0.0;
        for (std::size_t k = 0; k < fit.segment_count(); ++k) {
            CHECK(std::abs(fit.segment_values()[k] - swy[k] / sw[k]) <= 1e-9);
            CHECK(std::abs(fit.segment_masses()[k] - sw[k]) <= 1e-9);
            total_w += sw[k];
            fitted_mean += sw[k] * fit.segment_values()[k];
            outcome_mean += swy[k];
        }
        // Grand-mean preservation and mass conservation.
        CHECK(std::abs(fitted_mean / total_w - outcome_mean / total_w) <= 1e-9);
        double input_w = 0.0;
        for (const auto& s : samples) input_w += s.weight;
        CHECK(total_w == doctest::Approx(input_w).epsilon(1e-12));
    }
}

TEST_CASE("projection idempotence") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto samples = random_instance(700 + seed, 25, true);
        const double min_mass = seed % 2 == 0 ? 0.0 : 3.0;
        const auto fit = fit_isotonic(samples, min_mass);
        std::vector<WeightedSample> refit_input;
        for (const auto& s : samples) {
            refit_input.push_back({s.position, fit.evaluate(s.position), s.weight});
        }
        const auto refit = fit_isotonic(refit_input, min_mass);
        for (const auto& s : samples) {
            CHECK(refit.evaluate(s.position) ==
                  doctest::Approx(fit.evaluate(s.position)).epsilon(1e-12));
        }
    }
}

TEST_CASE("monotonicity of evaluation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto samples = random_instance(500 + seed, 30, true);
        const auto fit = fit_isotonic(samples, 0.0);
        double prev = -std::numeric_limits<double>::infinity();
        for (double t = -3.0; t <= 3.0; t += 0.01) {
            const double v = fit.evaluate(t);
            CHECK(v >= prev);
            prev = v;
        }
    }
}
