#include "sccp/venn_abers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sccp/binning.hpp"

namespace sccp {

namespace {

std::vector<WeightedSample> to_samples(std::span<const CalibrationPoint> cal) {
    if (cal.empty()) throw std::invalid_argument("empty calibration set");
    std::vector<WeightedSample> samples;
    samples.reserve(cal.size());
    for (const auto& c : cal) {
        samples.push_back({c.prediction, c.outcome, 1.0});
    }
    return samples;
}

}  // namespace

OutcomeGrid make_outcome_grid(std::span<const double> outcomes, std::size_t bins) {
    if (outcomes.empty()) throw std::invalid_argument("empty sample");
    if (bins < 2) throw std::invalid_argument("grid must have at least 2 bins");
    std::vector<double> sorted(outcomes.begin(), outcomes.end());
    std::sort(sorted.begin(), sorted.end());
    OutcomeGrid grid;
    grid.values = equal_frequency_representatives(sorted, bins);
    grid.y_min = sorted.front();
    grid.y_max = sorted.back();
    return grid;
}

void validate_grid(const OutcomeGrid& grid) {
    if (grid.values.empty()) throw std::invalid_argument("empty grid");
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        if (!std::isfinite(grid.values[i])) {
            throw std::invalid_argument("non-finite input");
        }
        if (i > 0 && grid.values[i] <= grid.values[i - 1]) {
            throw std::invalid_argument("grid values must be strictly increasing");
        }
    }
    if (!std::isfinite(grid.y_min) || !std::isfinite(grid.y_max)) {
        throw std::invalid_argument("non-finite input");
    }
    if (grid.y_min > grid.values.front() || grid.y_max < grid.values.back()) {
        throw std::invalid_argument("grid range does not cover grid values");
    }
    // A single-value grid is only meaningful when the whole outcome range has
    // collapsed onto it; otherwise require at least two values.
    if (grid.values.size() < 2 &&
        !(grid.y_min == grid.y_max && grid.y_min == grid.values.front())) {
        throw std::invalid_argument("grid must have at least 2 values");
    }
}

VennAbersCalibrator::VennAbersCalibrator(std::span<const CalibrationPoint> cal,
                                         double min_segment_mass)
    : pooled_(detail::PooledProblem::build(to_samples(cal))),
      min_segment_mass_(min_segment_mass),
      outcome_mean_(0.0),
      base_fit_(detail::build_fit(
          detail::plain_view(pooled_),
          detail::solve_monotone(detail::plain_view(pooled_), min_segment_mass))) {
    if (min_segment_mass < 0.0) {
        throw std::invalid_argument("min_segment_mass must be nonnegative");
    }
    double sum = 0.0;
    for (double y : pooled_.sorted_y) sum += y;
    outcome_mean_ = sum / static_cast<double>(pooled_.sorted_y.size());
}

VennAbersCalibrator::AugmentedContext VennAbersCalibrator::make_context(
    double fx) const {
    AugmentedContext ctx;
    ctx.view = detail::augmented_view(pooled_, fx, 0.0, 1.0);
    ctx.atoms = detail::mass_atoms(ctx.view, min_segment_mass_);
    return ctx;
}

VennAbersCalibrator::AugmentedValue VennAbersCalibrator::evaluate_augmented(
    const AugmentedContext& ctx, double y) const {
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite input");
    detail::BlockSums bs = ctx.view;
    bs.aug_y = y;
    const detail::SegmentEnds ends = detail::pava_pass(bs, ctx.atoms);
    // fx's block index in the augmented sequence.
    const std::size_t fx_block = bs.slot;
    const auto seg_it = std::upper_bound(ends.begin(), ends.end(), fx_block);
    const std::size_t seg = static_cast<std::size_t>(seg_it - ends.begin());
    const std::size_t block_lo = seg == 0 ? 0 : ends[seg - 1];
    const std::size_t block_hi = ends[seg];
    const detail::SegmentStats st = detail::segment_stats(bs, block_lo, block_hi);

    AugmentedValue out;
    out.value = st.value();
    // Calibration samples covered by fx's segment, in sorted-sample indices.
    std::size_t base_lo = block_lo, base_hi = block_hi;
    if (!bs.tie) {
        if (base_lo > bs.slot) base_lo -= 1;
        if (base_hi > bs.slot) base_hi -= 1;
    }
    out.sample_begin = pooled_.block_start[base_lo];
    out.sample_end = pooled_.block_start[base_hi];
    return out;
}

VennAbersCalibrator::AugmentedValue VennAbersCalibrator::evaluate_augmented(
    double fx, double y) const {
    return evaluate_augmented(make_context(fx), y);
}

IsotonicFit VennAbersCalibrator::fit_augmented(double fx, double y) const {
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite input");
    const AugmentedContext ctx = make_context(fx);
    detail::BlockSums bs = ctx.view;
    bs.aug_y = y;
    return detail::build_fit(bs, detail::pava_pass(bs, ctx.atoms));
}

MultiPrediction VennAbersCalibrator::multipredict(double fx,
                                                  const OutcomeGrid& grid) const {
    if (!std::isfinite(fx)) throw std::invalid_argument("non-finite input");
    validate_grid(grid);
    const AugmentedContext ctx = make_context(fx);
    MultiPrediction mp;
    mp.per_y.reserve(grid.values.size());
    for (double y : grid.values) {
        mp.per_y.emplace_back(y, evaluate_augmented(ctx, y).value);
    }
    mp.range_low = evaluate_augmented(ctx, grid.y_min).value;
    mp.range_high = evaluate_augmented(ctx, grid.y_max).value;
    return mp;
}

MultiPrediction multipredict(std::span<const CalibrationPoint> cal, double fx,
                             const OutcomeGrid& grid, double min_segment_mass) {
    return VennAbersCalibrator(cal, min_segment_mass).multipredict(fx, grid);
}

double derived_point(const MultiPrediction& mp, double y_bar, double y_min,
                     double y_max) {
    if (!(y_max > y_min)) throw std::invalid_argument("degenerate outcome range");
    const double mid = mp.midpoint();
    const double ratio = (mp.range_high - mp.range_low) / (y_max - y_min);
    return mid + ratio * (y_bar - mid);
}

}  // namespace sccp
