#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sccp/venn_abers.hpp"

namespace sccp {

struct SccpConfig {
    double alpha = 0.1;                // miscoverage level
    std::size_t y_grid_bins = 200;
    std::size_t pred_grid_bins = 200;
    double min_segment_mass = 20.0;
    double jitter = 0.0;               // uniform outcome noise half-width
    std::uint64_t jitter_seed = 0;
};

void validate_config(const SccpConfig& cfg);

struct SccpOutput {
    MultiPrediction multi;
    double point = 0.0;            // shrunk point prediction
    std::vector<double> accepted_y;
    bool interval_empty = false;   // nothing accepted; hull left as NaN
    double lower = 0.0;
    double upper = 0.0;
    double set_measure = 0.0;      // total accepted length under interpolation
    std::vector<std::pair<double, double>> per_y_quantile;  // (y, rho)
    std::size_t segment_id = 0;    // fx's segment in the unaugmented fit
};

struct PredictionBand {
    double alpha = 0.1;
    double min_segment_mass = 0.0;
    OutcomeGrid y_grid;
    std::vector<double> grid_fx;   // strictly increasing
    std::vector<SccpOutput> rows;  // one per grid point

    // Nearest grid row to fx; exact distance ties resolve to the left.
    std::size_t lookup_index(double fx) const;
    const SccpOutput& lookup(double fx) const { return rows[lookup_index(fx)]; }
};

// Smallest minimizer of the summed pinball loss over the multiset
// scores + {augmented_score}: the ceil((1-alpha)*m)-th smallest of the m
// values.
double level_set_quantile(std::span<const double> scores, double augmented_score,
                          double alpha);

SccpOutput predict(const VennAbersCalibrator& cal, double fx, double alpha,
                   const OutcomeGrid& y_grid, unsigned threads = 1);

SccpOutput predict(std::span<const CalibrationPoint> cal, double fx,
                   const SccpConfig& cfg, const OutcomeGrid& y_grid);

PredictionBand band(std::span<const CalibrationPoint> cal, const SccpConfig& cfg,
                    unsigned threads = 1);

// Applies the configured jitter to calibration outcomes (no-op when zero).
std::vector<CalibrationPoint> apply_jitter(std::span<const CalibrationPoint> cal,
                                           const SccpConfig& cfg);

}  // namespace sccp
