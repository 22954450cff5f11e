#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sccp/isotonic.hpp"

namespace sccp {

struct CalibrationPoint {
    double prediction = 0.0;  // f(x)
    double outcome = 0.0;     // y
};

// Grid of imputed outcomes used by the multi-prediction loop, plus the
// outcome-range endpoints used for the exact range computation.
struct OutcomeGrid {
    std::vector<double> values;  // strictly increasing
    double y_min = 0.0;
    double y_max = 0.0;
};

// Equal-frequency bin medians of `outcomes` with the observed min/max as the
// range endpoints.
OutcomeGrid make_outcome_grid(std::span<const double> outcomes, std::size_t bins);

struct MultiPrediction {
    std::vector<std::pair<double, double>> per_y;  // (imputed y, prediction at fx)
    double range_low = 0.0;                        // augmented fit with y_min
    double range_high = 0.0;                       // augmented fit with y_max
    double midpoint() const { return 0.5 * (range_low + range_high); }
};

// Reusable calibration state: pools the calibration pairs once and serves
// augmented isotonic fits for any (fx, y). All methods are const and
// thread-safe.
class VennAbersCalibrator {
public:
    VennAbersCalibrator(std::span<const CalibrationPoint> cal, double min_segment_mass);

    std::size_t size() const { return pooled_.sorted_pos.size(); }
    double min_segment_mass() const { return min_segment_mass_; }
    double outcome_mean() const { return outcome_mean_; }
    const IsotonicFit& base_fit() const { return base_fit_; }

    // Fitted value at fx of the isotonic fit on cal plus one (fx, y) point.
    struct AugmentedValue {
        double value = 0.0;          // f_n^{(x,y)}(fx)
        std::size_t sample_begin = 0;  // calibration samples sharing fx's segment,
        std::size_t sample_end = 0;    // as a range into sorted_outcomes()
    };
    AugmentedValue evaluate_augmented(double fx, double y) const;

    // Solver state reusable across imputed outcomes at a fixed fx: the mass
    // atoms depend on positions and weights only, never on y.
    struct AugmentedContext {
        detail::BlockSums view;
        detail::SegmentEnds atoms;
    };
    AugmentedContext make_context(double fx) const;
    AugmentedValue evaluate_augmented(const AugmentedContext& ctx, double y) const;

    // Full fit object on cal plus one (fx, y) point; equals
    // fit_isotonic(cal + {(fx, y)}, min_segment_mass) exactly.
    IsotonicFit fit_augmented(double fx, double y) const;

    MultiPrediction multipredict(double fx, const OutcomeGrid& grid) const;

    std::span<const double> sorted_outcomes() const { return pooled_.sorted_y; }
    std::span<const double> sorted_positions() const { return pooled_.sorted_pos; }

private:
    detail::PooledProblem pooled_;
    double min_segment_mass_;
    double outcome_mean_;
    IsotonicFit base_fit_;
};

// One-shot form of VennAbersCalibrator::multipredict.
MultiPrediction multipredict(std::span<const CalibrationPoint> cal, double fx,
                             const OutcomeGrid& grid, double min_segment_mass);

// Shrinks the multi-prediction midpoint towards the reference value y_bar in
// proportion to the range width relative to the outcome range.
double derived_point(const MultiPrediction& mp, double y_bar, double y_min,
                     double y_max);

void validate_grid(const OutcomeGrid& grid);

}  // namespace sccp
