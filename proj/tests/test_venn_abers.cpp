#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sccp/random.hpp"
#include "sccp/synth.hpp"
#include "sccp/venn_abers.hpp"

using sccp::CalibrationPoint;
using sccp::MultiPrediction;
using sccp::OutcomeGrid;
using sccp::VennAbersCalibrator;

namespace {

OutcomeGrid grid_of(std::vector<double> values, double y_min, double y_max) {
    return OutcomeGrid{std::move(values), y_min, y_max};
}

std::vector<CalibrationPoint> random_cal(std::uint64_t seed, std::size_t n) {
    std::vector<CalibrationPoint> cal(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = sccp::rng::uniform(0.0, 1.0, seed, 1, i);
        cal[i] = {f, f + sccp::rng::uniform(-0.3, 0.3, seed, 2, i)};
    }
    return cal;
}

}  // namespace

TEST_CASE("shared position pools all augmentations into one segment") {
    const std::vector<CalibrationPoint> cal = {{0.5, 0.4}, {0.5, 0.6}};
    const auto mp = multipredict(cal, 0.5, grid_of({0.25, 0.5, 0.75}, 0.0, 1.0), 0.0);
    CHECK(mp.range_low == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(mp.range_high == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (const auto& [y, pred] : mp.per_y) {
        CHECK(pred == doctest::Approx((1.0 + y) / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("degenerate grid collapses the range") {
    const std::vector<CalibrationPoint> cal = {{0.1, 0.3}, {0.7, 0.9}};
    const auto mp = multipredict(cal, 0.4, grid_of({0.5}, 0.5, 0.5), 0.0);
    REQUIRE(mp.per_y.size() == 1);
    CHECK(mp.range_low == mp.per_y[0].second);
    CHECK(mp.range_high == mp.per_y[0].second);
}

TEST_CASE("augmenting at the top keeps a monotone fit") {
    const std::vector<CalibrationPoint> cal = {{1.0, 0.0}, {2.0, 1.0}};
    const auto mp = multipredict(cal, 2.0, grid_of({0.25, 0.75}, 0.0, 1.0), 0.0);
    CHECK(mp.range_high == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mp.range_low == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("errors") {
    const std::vector<CalibrationPoint> cal = {{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(multipredict({}, 0.5, grid_of({0.2, 0.8}, 0.0, 1.0), 0.0),
                    std::invalid_argument);
    // One grid value without a collapsed range is rejected.
    CHECK_THROWS_AS(multipredict(cal, 0.5, grid_of({0.5}, 0.0, 1.0), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(multipredict(cal, 0.5, grid_of({0.8, 0.2}, 0.0, 1.0), 0.0),
                    std::invalid_argument);
}

TEST_CASE("derived point") {
    MultiPrediction mp;
    mp.range_low = 0.5;
    mp.range_high = 0.5;
    CHECK(sccp::derived_point(mp, 0.9, 0.0, 1.0) == doctest::Approx(0.5));

    mp.range_low = 0.0;
    mp.range_high = 1.0;
    CHECK(sccp::derived_point(mp, 0.7, 0.0, 1.0) == doctest::Approx(0.7));

    mp.range_low = 0.4;
    mp.range_high = 0.6;
    CHECK(sccp::derived_point(mp, 0.7, 0.0, 1.0) == doctest::Approx(0.54));

    CHECK_THROWS_WITH_AS(sccp::derived_point(mp, 0.7, 1.0, 1.0),
                         "degenerate outcome range", std::invalid_argument);
}

TEST_CASE("shrinkage stays inside the hull of midpoint and reference") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        MultiPrediction mp;
        const double a = sccp::rng::uniform(0.0, 1.0, seed, 11, 0);
        const double b = sccp::rng::uniform(0.0, 1.0, seed, 12, 0);
        mp.range_low = std::min(a, b);
        mp.range_high = std::max(a, b);
        const double y_bar = sccp::rng::uniform(0.0, 1.0, seed, 13, 0);
        const double p = sccp::derived_point(mp, y_bar, 0.0, 1.0);
        CHECK(p >= std::min(mp.midpoint(), y_bar) - 1e-12);
        CHECK(p <= std::max(mp.midpoint(), y_bar) + 1e-12);
    }
}

TEST_CASE("augmented fits equal one-shot isotonic fits exactly") {
    // Without the mass constraint the calibrator's incremental path must be
    // indistinguishable from refitting the augmented sample from scratch.
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto cal = random_cal(40 + seed, 2 + seed % 17);
        const VennAbersCalibrator calibrator(cal, 0.0);
        const double fx = sccp::rng::uniform(-0.2, 1.2, seed, 3, 0);
        const double y = sccp::rng::uniform(-0.5, 1.5, seed, 4, 0);

        std::vector<sccp::WeightedSample> augmented;
        for (const auto& c : cal) augmented.push_back({c.prediction, c.outcome, 1.0});
        augmented.push_back({fx, y, 1.0});
        const auto direct = fit_isotonic(augmented, 0.0);
        const auto via_calibrator = calibrator.fit_augmented(fx, y);

        REQUIRE(direct.segment_count() == via_calibrator.segment_count());
        for (std::size_t k = 0; k < direct.segment_count(); ++k) {
            CHECK(direct.segment_values()[k] == via_calibrator.segment_values()[k]);
            CHECK(direct.segment_masses()[k] == via_calibrator.segment_masses()[k]);
        }
        for (std::size_t k = 0; k + 1 < direct.segment_count(); ++k) {
            CHECK(direct.breakpoints()[k] == via_calibrator.breakpoints()[k]);
        }
        CHECK(calibrator.evaluate_augmented(fx, y).value == direct.evaluate(fx));
    }
}

TEST_CASE("constrained augmented fits keep every segment heavy enough") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto cal = random_cal(500 + seed, 60);
        const double min_mass = 8.0;
        const VennAbersCalibrator calibrator(cal, min_mass);
        const double fx = sccp::rng::uniform(0.0, 1.0, seed, 3, 0);
        const double y = sccp::rng::uniform(-0.5, 1.5, seed, 4, 0);
        const auto fit = calibrator.fit_augmented(fx, y);

        for (double m : fit.segment_masses()) CHECK(m >= min_mass);
        for (std::size_t k = 1; k < fit.segment_count(); ++k) {
            CHECK(fit.segment_values()[k] >= fit.segment_values()[k - 1]);
        }
        double total = 0.0;
        for (double m : fit.segment_masses()) total += m;
        CHECK(total == doctest::Approx(cal.size() + 1.0));
    }
}

TEST_CASE("evaluate_augmented reports exactly the level set of fx") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto cal = random_cal(140 + seed, 30);
        const VennAbersCalibrator calibrator(cal, seed % 2 == 0 ? 0.0 : 5.0);
        const double fx = sccp::rng::uniform(0.0, 1.0, seed, 5, 0);
        const double y = sccp::rng::uniform(0.0, 1.0, seed, 6, 0);
        const auto ev = calibrator.evaluate_augmented(fx, y);
        const auto fit = calibrator.fit_augmented(fx, y);
        const auto positions = calibrator.sorted_positions();
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const bool in_range = i >= ev.sample_begin && i < ev.sample_end;
            const bool same_value = fit.evaluate(positions[i]) == ev.value;
            CHECK(in_range == same_value);
        }
    }
}

TEST_CASE("range containment and monotonicity in the imputed outcome") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto cal = random_cal(200 + seed, 80);
        std::vector<double> outcomes;
        for (const auto& c : cal) outcomes.push_back(c.outcome);
        const OutcomeGrid grid = sccp::make_outcome_grid(outcomes, 25);
        const double min_mass = seed % 2 == 0 ? 0.0 : 10.0;
        const double fx = sccp::rng::uniform(0.0, 1.0, seed, 7, 0);
        const auto mp = multipredict(cal, fx, grid, min_mass);

        CHECK(mp.range_low <= mp.range_high);
        double prev = -std::numeric_limits<double>::infinity();
        for (const auto& [y, pred] : mp.per_y) {
            CHECK(pred >= mp.range_low - 1e-9);
            CHECK(pred <= mp.range_high + 1e-9);
            CHECK(pred >= prev - 1e-9);
            prev = pred;
        }
    }
}

TEST_CASE("the true-outcome fit lands inside the range") {
    // Augmenting with the actually observed outcome must produce a value
    // inside [range_low, range_high] once the range covers that outcome.
    sccp::SynthConfig cfg;
    cfg.d = 1;
    cfg.n = 120;
    cfg.b = 0.3;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        cfg.seed = 900 + seed;
        auto ds = sccp::generate(cfg);
        sccp::apply_predictor(ds, sccp::make_oracle_predictor());
        std::vector<CalibrationPoint> cal;
        for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
            cal.push_back({ds.predictions[i], ds.outcomes[i]});
        }
        const double fx = ds.predictions.back();
        const double y_true = ds.outcomes.back();
        std::vector<double> outcomes;
        for (const auto& c : cal) outcomes.push_back(c.outcome);
        OutcomeGrid grid = sccp::make_outcome_grid(outcomes, 40);
        grid.y_min = std::min(grid.y_min, y_true);
        grid.y_max = std::max(grid.y_max, y_true);

        const VennAbersCalibrator calibrator(cal, 20.0);
        const auto mp = calibrator.multipredict(fx, grid);
        const double oracle_value = calibrator.evaluate_augmented(fx, y_true).value;
        CHECK(oracle_value >= mp.range_low - 1e-9);
        CHECK(oracle_value <= mp.range_high + 1e-9);
    }
}

TEST_CASE("outcome grid uses equal-frequency medians and observed range") {
    std::vector<double> outcomes;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        outcomes.push_back(sccp::rng::normal(42, 0, i));
    }
    const OutcomeGrid grid = sccp::make_outcome_grid(outcomes, 200);
    CHECK(grid.values.size() == 200);
    const auto [mn, mx] = std::minmax_element(outcomes.begin(), outcomes.end());
    CHECK(grid.y_min == *mn);
    CHECK(grid.y_max == *mx);
    for (std::size_t i = 1; i < grid.values.size(); ++i) {
        CHECK(grid.values[i] > grid.values[i - 1]);
    }
    CHECK(grid.values.front() >= grid.y_min);
    CHECK(grid.values.back() <= grid.y_max);

    // 10 values into 5 bins: medians of consecutive pairs.
    const std::vector<double> small = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const OutcomeGrid g5 = sccp::make_outcome_grid(small, 5);
    CHECK(g5.values == std::vector<double>{1.5, 3.5, 5.5, 7.5, 9.5});
}
