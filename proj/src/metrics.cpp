#include "sccp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sccp {

namespace {

struct Accumulator {
    std::size_t covered = 0;
    std::size_t count = 0;
    std::size_t finite_widths = 0;
    std::size_t infinite_widths = 0;
    double width_sum = 0.0;
    double error_sum = 0.0;

    void add(const std::pair<double, double>& iv, double point, double outcome) {
        count += 1;
        if (outcome >= iv.first && outcome <= iv.second) covered += 1;
        const double width = iv.second - iv.first;
        if (std::isinf(width)) {
            infinite_widths += 1;
        } else {
            finite_widths += 1;
            width_sum += width;
        }
        error_sum += point - outcome;
    }

    // An empty prediction set covers nothing and has zero width.
    void add_empty(double point, double outcome) {
        count += 1;
        finite_widths += 1;
        error_sum += point - outcome;
    }

    GroupMetrics finish() const {
        GroupMetrics g;
        g.count = count;
        g.infinite_widths = infinite_widths;
        g.coverage = count ? static_cast<double>(covered) / static_cast<double>(count)
                           : 0.0;
        g.avg_width = finite_widths
                          ? width_sum / static_cast<double>(finite_widths)
                          : 0.0;
        g.cal_error = count ? error_sum / static_cast<double>(count) : 0.0;
        return g;
    }
};

}  // namespace

MetricsReport score(std::span<const std::pair<double, double>> intervals,
                    std::span<const double> points,
                    std::span<const double> outcomes,
                    std::span<const std::string> group,
                    std::span<const int> bins) {
    const std::size_t n = intervals.size();
    if (n == 0) throw std::invalid_argument("empty sample");
    if (points.size() != n || outcomes.size() != n ||
        (!group.empty() && group.size() != n) ||
        (!bins.empty() && bins.size() != n)) {
        throw std::invalid_argument("length mismatch");
    }

    Accumulator overall;
    std::map<std::string, Accumulator> by_group;
    std::map<int, Accumulator> by_bin;
    for (std::size_t i = 0; i < n; ++i) {
        overall.add(intervals[i], points[i], outcomes[i]);
        if (!group.empty()) by_group[group[i]].add(intervals[i], points[i], outcomes[i]);
        if (!bins.empty()) by_bin[bins[i]].add(intervals[i], points[i], outcomes[i]);
    }

    MetricsReport report;
    const GroupMetrics total = overall.finish();
    report.coverage = total.coverage;
    report.avg_width = total.avg_width;
    report.cal_error = total.cal_error;
    report.count = total.count;
    report.infinite_widths = total.infinite_widths;
    for (const auto& [label, acc] : by_group) report.by_group[label] = acc.finish();
    for (const auto& [bin, acc] : by_bin) report.by_bin.emplace_back(bin, acc.finish());
    return report;
}

std::vector<int> bin_by_quintile(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 5) throw std::invalid_argument("need at least 5 values");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<int> labels(n);
    for (std::size_t rank = 0; rank < n; ++rank) {
        labels[order[rank]] = static_cast<int>(rank * 5 / n) + 1;
    }
    return labels;
}

std::vector<std::pair<std::size_t, GroupMetrics>> conditional_coverage_by_prediction(
    std::span<const SccpOutput> outputs, std::span<const double> outcomes) {
    if (outputs.size() != outcomes.size()) {
        throw std::invalid_argument("length mismatch");
    }
    std::map<std::size_t, Accumulator> by_segment;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const SccpOutput& out = outputs[i];
        if (out.interval_empty) {
            by_segment[out.segment_id].add_empty(out.point, outcomes[i]);
        } else {
            by_segment[out.segment_id].add({out.lower, out.upper}, out.point,
                                           outcomes[i]);
        }
    }
    std::vector<std::pair<std::size_t, GroupMetrics>> rows;
    rows.reserve(by_segment.size());
    for (const auto& [seg, acc] : by_segment) rows.emplace_back(seg, acc.finish());
    return rows;
}

}  // namespace sccp
