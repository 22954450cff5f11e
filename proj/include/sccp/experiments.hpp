#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sccp/self_calibrating.hpp"
#include "sccp/synth.hpp"

namespace sccp::experiments {

struct ExperimentParams {
    std::uint64_t seed = 1;
    std::size_t replicates = 20;
    std::size_t n_cal = 1000;
    std::size_t n_test = 500;
    std::size_t d = 5;
    double kappa = 1.0;
    double a = 0.0;
    double b = 0.6;
    std::size_t mondrian_bins = 20;
    SccpConfig sccp;
    unsigned threads = 1;
};

// One metrics row per (method, distortion): SC-CP against split-CP and
// Mondrian-CP as the predictor's miscalibration grows.
struct CalibrationEfficiencyRow {
    std::string method;
    double distortion = 0.0;
    double coverage = 0.0;
    double avg_width = 0.0;
    double cal_error = 0.0;
    std::size_t count = 0;
};

std::vector<CalibrationEfficiencyRow> run_calibration_efficiency(
    const ExperimentParams& params, std::span<const double> distortions);

// Coverage and width within conditional-variance quintiles (quintile 0 is the
// marginal slice) for SC-CP, split-CP, Mondrian-CP, and the oracle.
struct ConditionalCoverageRow {
    std::string method;
    int quintile = 0;
    double coverage = 0.0;
    double avg_width = 0.0;
    std::size_t count = 0;
};

std::vector<ConditionalCoverageRow> run_conditional_coverage(
    const ExperimentParams& params);

std::string calibration_efficiency_csv(std::span<const CalibrationEfficiencyRow> rows);
std::string conditional_coverage_csv(std::span<const ConditionalCoverageRow> rows);

}  // namespace sccp::experiments
