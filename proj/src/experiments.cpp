#include "sccp/experiments.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "sccp/baselines.hpp"
#include "sccp/io.hpp"
#include "sccp/metrics.hpp"
#include "sccp/parallel.hpp"
#include "sccp/random.hpp"

namespace sccp::experiments {

namespace {

constexpr std::array<const char*, 4> kMethods = {"sccp", "split", "mondrian",
                                                 "oracle"};

struct Tally {
    std::size_t covered = 0;
    std::size_t count = 0;
    double width_sum = 0.0;
    double error_sum = 0.0;

    void add(double lower, double upper, double point, double outcome) {
        count += 1;
        if (outcome >= lower && outcome <= upper) covered += 1;
        if (std::isfinite(upper - lower)) width_sum += upper - lower;
        error_sum += point - outcome;
    }
    void merge(const Tally& other) {
        covered += other.covered;
        count += other.count;
        width_sum += other.width_sum;
        error_sum += other.error_sum;
    }
    double coverage() const {
        return count ? static_cast<double>(covered) / static_cast<double>(count) : 0.0;
    }
    double avg_width() const {
        return count ? width_sum / static_cast<double>(count) : 0.0;
    }
    double cal_error() const {
        return count ? error_sum / static_cast<double>(count) : 0.0;
    }
};

struct ReplicateData {
    Dataset cal;
    Dataset test;
    std::vector<CalibrationPoint> cal_pairs;
};

ReplicateData make_replicate(const ExperimentParams& params, std::uint64_t rep,
                             const Predictor& predictor) {
    SynthConfig cfg;
    cfg.d = params.d;
    cfg.kappa = params.kappa;
    cfg.a = params.a;
    cfg.b = params.b;

    ReplicateData data;
    cfg.n = params.n_cal;
    cfg.seed = rng::substream(params.seed, 101, rep);
    data.cal = generate(cfg);
    apply_predictor(data.cal, predictor);

    cfg.n = params.n_test;
    cfg.seed = rng::substream(params.seed, 202, rep);
    data.test = generate(cfg);
    apply_predictor(data.test, predictor);

    data.cal_pairs.reserve(params.n_cal);
    for (std::size_t i = 0; i < data.cal.size(); ++i) {
        data.cal_pairs.push_back({data.cal.predictions[i], data.cal.outcomes[i]});
    }
    return data;
}

// Per-method tallies for one replicate, sliced by quintile label (0 marginal).
using MethodTallies = std::array<std::vector<Tally>, 4>;

MethodTallies evaluate_replicate(const ExperimentParams& params,
                                 const ReplicateData& data,
                                 std::span<const int> quintiles) {
    const double alpha = params.sccp.alpha;
    const std::size_t slices = quintiles.empty() ? 1 : 6;
    MethodTallies tallies;
    for (auto& t : tallies) t.assign(slices, Tally{});

    const PredictionBand sccp_band = band(data.cal_pairs, params.sccp, 1);

    std::vector<double> abs_scores(data.cal.size());
    for (std::size_t i = 0; i < data.cal.size(); ++i) {
        abs_scores[i] = std::abs(data.cal.outcomes[i] - data.cal.predictions[i]);
    }
    const SplitCpModel split = fit_split_cp(abs_scores, alpha);
    const MondrianCpModel mondrian = fit_mondrian(
        data.cal.predictions, abs_scores, params.mondrian_bins, alpha);

    for (std::size_t i = 0; i < data.test.size(); ++i) {
        const double fx = data.test.predictions[i];
        const double y = data.test.outcomes[i];
        const auto x = data.test.row(i);
        const int q = quintiles.empty() ? 0 : quintiles[i];

        const SccpOutput& row = sccp_band.lookup(fx);
        const double lo = row.interval_empty ? row.point : row.lower;
        const double hi = row.interval_empty ? row.point : row.upper;
        const auto split_iv = interval_at(split, fx);
        const auto mond_iv = interval_at(mondrian, fx);
        const auto oracle_iv = oracle_interval(x, params.a, params.b, alpha);
        const double mu = oracle_mu(x);

        auto add_slice = [&](std::size_t slice) {
            tallies[0][slice].add(lo, hi, row.point, y);
            tallies[1][slice].add(split_iv.first, split_iv.second, fx, y);
            tallies[2][slice].add(mond_iv.first, mond_iv.second, fx, y);
            tallies[3][slice].add(oracle_iv.first, oracle_iv.second, mu, y);
        };
        add_slice(0);
        if (q > 0) add_slice(static_cast<std::size_t>(q));
    }
    return tallies;
}

}  // namespace

std::vector<CalibrationEfficiencyRow> run_calibration_efficiency(
    const ExperimentParams& params, std::span<const double> distortions) {
    struct Cell {
        MethodTallies tallies;
    };
    std::vector<Cell> cells(params.replicates * distortions.size());

    parallel_for(cells.size(), params.threads, [&](std::size_t idx) {
        const std::size_t rep = idx / distortions.size();
        const std::size_t ci = idx % distortions.size();
        const Predictor predictor = make_distorted_predictor(distortions[ci]);
        const ReplicateData data = make_replicate(params, rep, predictor);
        cells[idx].tallies = evaluate_replicate(params, data, {});
    });

    std::vector<CalibrationEfficiencyRow> rows;
    for (std::size_t ci = 0; ci < distortions.size(); ++ci) {
        for (std::size_t m = 0; m < 3; ++m) {  // oracle is flat across distortions
            Tally total;
            for (std::size_t rep = 0; rep < params.replicates; ++rep) {
                total.merge(cells[rep * distortions.size() + ci].tallies[m][0]);
            }
            rows.push_back({kMethods[m], distortions[ci], total.coverage(),
                            total.avg_width(), total.cal_error(), total.count});
        }
    }
    return rows;
}

std::vector<ConditionalCoverageRow> run_conditional_coverage(
    const ExperimentParams& params) {
    std::vector<MethodTallies> per_rep(params.replicates);

    parallel_for(params.replicates, params.threads, [&](std::size_t rep) {
        const Predictor predictor = make_oracle_predictor();
        const ReplicateData data = make_replicate(params, rep, predictor);
        std::vector<double> variances(data.test.size());
        for (std::size_t i = 0; i < data.test.size(); ++i) {
            variances[i] = oracle_sigma2(data.test.row(i), params.a, params.b);
        }
        const std::vector<int> quintiles = bin_by_quintile(variances);
        per_rep[rep] = evaluate_replicate(params, data, quintiles);
    });

    std::vector<ConditionalCoverageRow> rows;
    for (std::size_t m = 0; m < kMethods.size(); ++m) {
        for (int q = 0; q <= 5; ++q) {
            Tally total;
            for (const auto& tallies : per_rep) {
                total.merge(tallies[m][static_cast<std::size_t>(q)]);
            }
            rows.push_back({kMethods[m], q, total.coverage(), total.avg_width(),
                            total.count});
        }
    }
    return rows;
}

std::string calibration_efficiency_csv(
    std::span<const CalibrationEfficiencyRow> rows) {
    std::ostringstream out;
    out << "method,distortion,coverage,avg_width,cal_error,count\n";
    for (const auto& r : rows) {
        out << r.method << "," << format_double(r.distortion) << ","
            << format_double(r.coverage) << "," << format_double(r.avg_width) << ","
            << format_double(r.cal_error) << "," << r.count << "\n";
    }
    return out.str();
}

std::string conditional_coverage_csv(std::span<const ConditionalCoverageRow> rows) {
    std::ostringstream out;
    out << "method,quintile,coverage,avg_width,count\n";
    for (const auto& r : rows) {
        out << r.method << "," << r.quintile << "," << format_double(r.coverage)
            << "," << format_double(r.avg_width) << "," << r.count << "\n";
    }
    return out.str();
}

}  // namespace sccp::experiments
