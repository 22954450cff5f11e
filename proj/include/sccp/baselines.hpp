#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sccp {

// Marginal split conformal prediction with absolute-residual scores. An
// infinite radius means the (n+1)-st order statistic fell past the sample.
struct SplitCpModel {
    double radius = 0.0;
    std::size_t n_cal = 0;
    double alpha = 0.1;
};

SplitCpModel fit_split_cp(std::span<const double> cal_scores, double alpha);
std::pair<double, double> interval_at(const SplitCpModel& model, double fx);

// Split-CP applied within equal-frequency bins of the model predictions.
struct MondrianCpModel {
    std::vector<double> bin_edges;        // ascending; queries at an edge go right
    std::vector<double> per_bin_radius;   // bin_edges.size() + 1 entries
    double alpha = 0.1;

    std::size_t bin_index(double fx) const;
};

MondrianCpModel fit_mondrian(std::span<const double> predictions,
                             std::span<const double> scores, std::size_t n_bins,
                             double alpha);
std::pair<double, double> interval_at(const MondrianCpModel& model, double fx);

}  // namespace sccp
