#include "sccp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sccp/binning.hpp"

namespace sccp {

namespace {

void validate_scores(std::span<const double> scores) {
    for (double s : scores) {
        if (!std::isfinite(s)) throw std::invalid_argument("non-finite input");
        if (s < 0.0) throw std::invalid_argument("negative score");
    }
}

double split_radius(std::span<const double> scores, double alpha) {
    const std::size_t n = scores.size();
    const double target = (1.0 - alpha) * static_cast<double>(n + 1);
    const std::size_t k = static_cast<std::size_t>(std::ceil(target));
    if (k > n) return std::numeric_limits<double>::infinity();
    std::vector<double> tmp(scores.begin(), scores.end());
    std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     tmp.end());
    return tmp[k - 1];
}

}  // namespace

SplitCpModel fit_split_cp(std::span<const double> cal_scores, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1)");
    }
    validate_scores(cal_scores);
    SplitCpModel model;
    model.alpha = alpha;
    model.n_cal = cal_scores.size();
    model.radius = split_radius(cal_scores, alpha);
    return model;
}

std::pair<double, double> interval_at(const SplitCpModel& model, double fx) {
    return {fx - model.radius, fx + model.radius};
}

std::size_t MondrianCpModel::bin_index(double fx) const {
    return static_cast<std::size_t>(
        std::upper_bound(bin_edges.begin(), bin_edges.end(), fx) -
        bin_edges.begin());
}

MondrianCpModel fit_mondrian(std::span<const double> predictions,
                             std::span<const double> scores, std::size_t n_bins,
                             double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1)");
    }
    if (n_bins < 1) throw std::invalid_argument("n_bins must be at least 1");
    if (predictions.size() != scores.size()) {
        throw std::invalid_argument("length mismatch");
    }
    if (predictions.empty()) throw std::invalid_argument("empty sample");
    validate_scores(scores);
    for (double p : predictions) {
        if (!std::isfinite(p)) throw std::invalid_argument("non-finite input");
    }

    std::vector<double> sorted(predictions.begin(), predictions.end());
    std::sort(sorted.begin(), sorted.end());

    MondrianCpModel model;
    model.alpha = alpha;
    model.bin_edges = n_bins > 1 ? equal_frequency_edges(sorted, n_bins)
                                 : std::vector<double>{};

    std::vector<std::vector<double>> per_bin(n_bins);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        per_bin[model.bin_index(predictions[i])].push_back(scores[i]);
    }
    model.per_bin_radius.reserve(n_bins);
    for (const auto& bin_scores : per_bin) {
        model.per_bin_radius.push_back(
            bin_scores.empty() ? std::numeric_limits<double>::infinity()
                               : split_radius(bin_scores, alpha));
    }
    return model;
}

std::pair<double, double> interval_at(const MondrianCpModel& model, double fx) {
    const double r = model.per_bin_radius[model.bin_index(fx)];
    return {fx - r, fx + r};
}

}  // namespace sccp
