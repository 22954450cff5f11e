#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sccp/self_calibrating.hpp"

namespace sccp {

struct GroupMetrics {
    double coverage = 0.0;
    double avg_width = 0.0;   // over finite widths only
    double cal_error = 0.0;   // mean(point - outcome)
    std::size_t count = 0;
    std::size_t infinite_widths = 0;
};

struct MetricsReport {
    double coverage = 0.0;
    double avg_width = 0.0;
    double cal_error = 0.0;
    std::size_t count = 0;
    std::size_t infinite_widths = 0;
    std::map<std::string, GroupMetrics> by_group;
    std::vector<std::pair<int, GroupMetrics>> by_bin;  // sorted by bin id
};

// Coverage uses closed intervals; infinite widths are counted and excluded
// from the width mean. `group` and `bins`, when nonempty, must match the
// interval count and populate by_group / by_bin.
MetricsReport score(std::span<const std::pair<double, double>> intervals,
                    std::span<const double> points,
                    std::span<const double> outcomes,
                    std::span<const std::string> group = {},
                    std::span<const int> bins = {});

// Equal-frequency quintile labels 1..5; ties resolve by stable input order.
std::vector<int> bin_by_quintile(std::span<const double> values);

// Per-segment coverage of SC-CP outputs, keyed by segment id. Segments with
// no test points simply do not appear.
std::vector<std::pair<std::size_t, GroupMetrics>> conditional_coverage_by_prediction(
    std::span<const SccpOutput> outputs, std::span<const double> outcomes);

}  // namespace sccp
