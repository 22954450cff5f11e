#include "sccp/self_calibrating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sccp/binning.hpp"
#include "sccp/parallel.hpp"
#include "sccp/random.hpp"

namespace sccp {

void validate_config(const SccpConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1)");
    }
    if (cfg.y_grid_bins < 2 || cfg.pred_grid_bins < 1) {
        throw std::invalid_argument("grid bins must be at least 2");
    }
    if (cfg.min_segment_mass < 0.0) {
        throw std::invalid_argument("min_segment_mass must be nonnegative");
    }
    if (cfg.jitter < 0.0 || !std::isfinite(cfg.jitter)) {
        throw std::invalid_argument("jitter must be nonnegative");
    }
}

double level_set_quantile(std::span<const double> scores, double augmented_score,
                          double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1)");
    }
    if (!std::isfinite(augmented_score)) {
        throw std::invalid_argument("non-finite input");
    }
    std::vector<double> multiset;
    multiset.reserve(scores.size() + 1);
    for (double s : scores) {
        if (!std::isfinite(s)) throw std::invalid_argument("non-finite input");
        multiset.push_back(s);
    }
    multiset.push_back(augmented_score);
    const double m = static_cast<double>(multiset.size());
    std::size_t k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * m));
    if (k < 1) k = 1;
    if (k > multiset.size()) k = multiset.size();
    std::nth_element(multiset.begin(),
                     multiset.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     multiset.end());
    return multiset[k - 1];
}

namespace {

struct GridRow {
    double prediction = 0.0;  // f_n^{(x,y)}(fx)
    double score = 0.0;       // |y - prediction|
    double rho = 0.0;
    bool accepted = false;
};

GridRow evaluate_grid_y(const VennAbersCalibrator& cal,
                        const VennAbersCalibrator::AugmentedContext& ctx, double y,
                        double alpha) {
    const auto ev = cal.evaluate_augmented(ctx, y);
    GridRow row;
    row.prediction = ev.value;
    row.score = std::abs(y - ev.value);

    const auto outcomes = cal.sorted_outcomes();
    std::vector<double> level_scores;
    level_scores.reserve(ev.sample_end - ev.sample_begin);
    for (std::size_t i = ev.sample_begin; i < ev.sample_end; ++i) {
        level_scores.push_back(std::abs(outcomes[i] - ev.value));
    }
    row.rho = level_set_quantile(level_scores, row.score, alpha);
    row.accepted = row.score <= row.rho;
    return row;
}

// Hull and measure of {y : rho(y) - score(y) >= 0} under linear interpolation
// of both rho and score between grid nodes.
void interpolate_acceptance(const std::vector<double>& ys,
                            const std::vector<GridRow>& rows, SccpOutput* out) {
    const std::size_t k = ys.size();
    std::vector<double> g(k);
    for (std::size_t i = 0; i < k; ++i) g[i] = rows[i].rho - rows[i].score;

    double lower = std::numeric_limits<double>::quiet_NaN();
    double upper = std::numeric_limits<double>::quiet_NaN();
    double measure = 0.0;
    bool any = false;
    auto note = [&](double y) {
        if (!any || y < lower) lower = y;
        if (!any || y > upper) upper = y;
        any = true;
    };
    for (std::size_t i = 0; i < k; ++i) {
        if (g[i] >= 0.0) note(ys[i]);
        if (i + 1 >= k) continue;
        const double span = ys[i + 1] - ys[i];
        const bool a = g[i] >= 0.0, b = g[i + 1] >= 0.0;
        if (a && b) {
            measure += span;
        } else if (a != b) {
            const double root = ys[i] + span * (0.0 - g[i]) / (g[i + 1] - g[i]);
            note(root);
            measure += a ? (root - ys[i]) : (ys[i + 1] - root);
        }
    }
    out->interval_empty = !any;
    out->lower = lower;
    out->upper = upper;
    out->set_measure = measure;
}

}  // namespace

SccpOutput predict(const VennAbersCalibrator& cal, double fx, double alpha,
                   const OutcomeGrid& y_grid, unsigned threads) {
    if (!std::isfinite(fx)) throw std::invalid_argument("non-finite input");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1)");
    }
    validate_grid(y_grid);

    const VennAbersCalibrator::AugmentedContext ctx = cal.make_context(fx);
    const std::vector<double>& ys = y_grid.values;
    std::vector<GridRow> rows(ys.size());
    parallel_for(ys.size(), threads, [&](std::size_t i) {
        rows[i] = evaluate_grid_y(cal, ctx, ys[i], alpha);
    });

    SccpOutput out;
    out.segment_id = cal.base_fit().segment_index(fx);
    out.multi.per_y.reserve(ys.size());
    out.per_y_quantile.reserve(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        out.multi.per_y.emplace_back(ys[i], rows[i].prediction);
        out.per_y_quantile.emplace_back(ys[i], rows[i].rho);
        if (rows[i].accepted) out.accepted_y.push_back(ys[i]);
    }
    out.multi.range_low = cal.evaluate_augmented(ctx, y_grid.y_min).value;
    out.multi.range_high = cal.evaluate_augmented(ctx, y_grid.y_max).value;
    out.point = y_grid.y_max > y_grid.y_min
                    ? derived_point(out.multi, cal.outcome_mean(), y_grid.y_min,
                                    y_grid.y_max)
                    : out.multi.midpoint();
    interpolate_acceptance(ys, rows, &out);
    return out;
}

std::vector<CalibrationPoint> apply_jitter(std::span<const CalibrationPoint> cal,
                                           const SccpConfig& cfg) {
    std::vector<CalibrationPoint> jittered(cal.begin(), cal.end());
    if (cfg.jitter > 0.0) {
        for (std::size_t i = 0; i < jittered.size(); ++i) {
            jittered[i].outcome +=
                rng::uniform(-cfg.jitter, cfg.jitter, cfg.jitter_seed, 0, i);
        }
    }
    return jittered;
}

SccpOutput predict(std::span<const CalibrationPoint> cal, double fx,
                   const SccpConfig& cfg, const OutcomeGrid& y_grid) {
    validate_config(cfg);
    const std::vector<CalibrationPoint> prepared = apply_jitter(cal, cfg);
    const VennAbersCalibrator calibrator(prepared, cfg.min_segment_mass);
    return predict(calibrator, fx, cfg.alpha, y_grid);
}

std::size_t PredictionBand::lookup_index(double fx) const {
    if (!std::isfinite(fx)) throw std::invalid_argument("non-finite input");
    if (grid_fx.empty()) throw std::logic_error("empty band");
    const auto it = std::lower_bound(grid_fx.begin(), grid_fx.end(), fx);
    if (it == grid_fx.begin()) return 0;
    if (it == grid_fx.end()) return grid_fx.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - grid_fx.begin());
    const std::size_t lo = hi - 1;
    return (fx - grid_fx[lo]) <= (grid_fx[hi] - fx) ? lo : hi;
}

PredictionBand band(std::span<const CalibrationPoint> cal, const SccpConfig& cfg,
                    unsigned threads) {
    validate_config(cfg);
    if (cal.size() < 2) {
        throw std::invalid_argument("need at least 2 calibration points");
    }
    const std::vector<CalibrationPoint> prepared = apply_jitter(cal, cfg);

    std::vector<double> outcomes, predictions;
    outcomes.reserve(prepared.size());
    predictions.reserve(prepared.size());
    for (const auto& c : prepared) {
        outcomes.push_back(c.outcome);
        predictions.push_back(c.prediction);
    }
    std::sort(predictions.begin(), predictions.end());

    PredictionBand out;
    out.alpha = cfg.alpha;
    out.min_segment_mass = cfg.min_segment_mass;
    out.y_grid = make_outcome_grid(outcomes, cfg.y_grid_bins);
    out.grid_fx = equal_frequency_representatives(predictions, cfg.pred_grid_bins);

    const VennAbersCalibrator calibrator(prepared, cfg.min_segment_mass);
    out.rows.resize(out.grid_fx.size());
    parallel_for(out.grid_fx.size(), threads, [&](std::size_t i) {
        out.rows[i] = predict(calibrator, out.grid_fx[i], cfg.alpha, out.y_grid);
    });
    return out;
}

}  // namespace sccp
