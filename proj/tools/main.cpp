#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sccp/experiments.hpp"
#include "sccp/io.hpp"
#include "sccp/metrics.hpp"
#include "sccp/parallel.hpp"
#include "sccp/random.hpp"
#include "sccp/self_calibrating.hpp"
#include "sccp/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SimulateArgs {
    std::string preset;
    std::size_t d = 5;
    double kappa = 1.0;
    double a = 0.0;
    double b = 0.6;
    std::size_t n_train = 1000;
    std::size_t n_cal = 1000;
    std::size_t n_test = 1000;
    std::uint64_t seed = 1;
    std::string predictor = "oracle";
    std::string out_dir = ".";
};

struct BandArgs {
    std::string cal_path;
    std::string out_path = "band.json";
    sccp::SccpConfig cfg;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct PredictArgs {
    std::string band_path;
    std::string test_path;
    std::string out_path = "predictions.csv";
};

struct EvaluateArgs {
    std::string pred_path;
    std::string truth_path;
    std::string out_json = "metrics.json";
    std::string out_csv;
};

struct ExperimentArgs {
    std::string name;
    std::string preset = "setup-a";
    std::string out_dir = ".";
    sccp::experiments::ExperimentParams params;
    std::vector<double> distortions = {0.0, 0.2, 0.4};
    int threads = 0;
};

// Presets fill in the data-generating parameters; explicitly passed flags
// still win.
void apply_preset(CLI::App* cmd, const std::string& preset, std::size_t* d,
                  double* kappa, double* a, double* b) {
    if (preset.empty()) return;
    double preset_a = 0.0, preset_b = 0.0;
    if (preset == "setup-a") {
        preset_a = 0.0;
        preset_b = 0.6;
    } else if (preset == "setup-c") {
        preset_a = 0.6;
        preset_b = 0.0;
    } else {
        throw std::invalid_argument("unknown preset: " + preset);
    }
    auto unset = [&](const char* name) {
        CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt == nullptr || opt->count() == 0;
    };
    if (unset("--d")) *d = 5;
    if (unset("--kappa")) *kappa = 1.0;
    if (unset("--a")) *a = preset_a;
    if (unset("--b")) *b = preset_b;
}

sccp::Predictor parse_predictor(const std::string& text, const SimulateArgs& args) {
    if (text == "oracle") return sccp::make_oracle_predictor();
    if (text.rfind("distorted=", 0) == 0) {
        return sccp::make_distorted_predictor(
            sccp::parse_double(text.substr(10)));
    }
    if (text.rfind("knn=", 0) == 0) {
        const std::string spec = text.substr(4);
        const auto comma = spec.find(',');
        sccp::SynthConfig train_cfg;
        train_cfg.d = args.d;
        train_cfg.a = args.a;
        train_cfg.b = args.b;
        train_cfg.n = args.n_train;
        train_cfg.kappa = comma == std::string::npos
                              ? args.kappa
                              : sccp::parse_double(spec.substr(comma + 1));
        train_cfg.seed = sccp::rng::substream(args.seed, 10, 0);
        const auto k = static_cast<std::size_t>(
            sccp::parse_double(spec.substr(0, comma)));
        return sccp::make_knn_predictor(train_cfg, k);
    }
    throw std::invalid_argument("unknown predictor: " + text);
}

// Applies values from a JSON config file to options the command line did not
// set explicitly. Unknown keys are rejected.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw std::invalid_argument("bad config file: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw std::invalid_argument("unknown config key: " + key);
        }
        if (opt->count() > 0) continue;  // flags override file values
        const std::string text =
            value.is_string() ? value.get<std::string>() : value.dump();
        opt->add_result(text);
        opt->run_callback();
    }
}

int cmd_simulate(const SimulateArgs& args) {
    sccp::SynthConfig cfg;
    cfg.d = args.d;
    cfg.kappa = args.kappa;
    cfg.a = args.a;
    cfg.b = args.b;
    const sccp::Predictor predictor = parse_predictor(args.predictor, args);

    fs::create_directories(args.out_dir);
    const struct {
        const char* name;
        std::size_t n;
        std::uint64_t stream;
    } splits[] = {{"train", args.n_train, 11},
                  {"cal", args.n_cal, 12},
                  {"test", args.n_test, 13}};
    for (const auto& split : splits) {
        sccp::SynthConfig part = cfg;
        part.n = split.n;
        part.seed = sccp::rng::substream(args.seed, split.stream, 0);
        sccp::Dataset ds = sccp::generate(part);
        sccp::apply_predictor(ds, predictor);
        const fs::path base = fs::path(args.out_dir) / split.name;
        sccp::write_dataset_csv(base.string() + ".csv", ds);
        sccp::write_synth_sidecar(base.string() + ".json", part);
    }
    return 0;
}

int cmd_band(const BandArgs& args) {
    sccp::validate_config(args.cfg);
    const sccp::Table table = sccp::read_csv(args.cal_path);
    const auto preds = table.numeric_column("f_pred");
    const auto outcomes = table.numeric_column("y");
    std::vector<sccp::CalibrationPoint> cal(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) cal[i] = {preds[i], outcomes[i]};

    sccp::SccpConfig cfg = args.cfg;
    cfg.jitter_seed = args.seed;
    const sccp::PredictionBand band =
        sccp::band(cal, cfg, sccp::resolve_threads(args.threads));
    sccp::write_text_file(args.out_path, sccp::band_to_json(band));
    return 0;
}

int cmd_predict(const PredictArgs& args) {
    std::ifstream in(args.band_path);
    if (!in) throw std::runtime_error("cannot open " + args.band_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const sccp::PredictionBand band = sccp::band_from_json(buffer.str());

    const sccp::Table table = sccp::read_csv(args.test_path);
    const auto preds = table.numeric_column("f_pred");

    std::ostringstream out;
    out << "id,f_pred,point,lower,upper,range_low,range_high\n";
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const sccp::SccpOutput& row = band.lookup(preds[i]);
        out << i << "," << sccp::format_double(preds[i]) << ","
            << sccp::format_double(row.point) << ","
            << sccp::format_double(row.lower) << ","
            << sccp::format_double(row.upper) << ","
            << sccp::format_double(row.multi.range_low) << ","
            << sccp::format_double(row.multi.range_high) << "\n";
    }
    sccp::write_text_file(args.out_path, out.str());
    return 0;
}

int cmd_evaluate(const EvaluateArgs& args) {
    const sccp::Table pred = sccp::read_csv(args.pred_path);
    const auto lower = pred.numeric_column("lower");
    const auto upper = pred.numeric_column("upper");
    const auto point = pred.numeric_column("point");

    std::vector<double> outcomes;
    std::vector<std::string> group;
    if (pred.column("y")) {
        outcomes = pred.numeric_column("y");
        if (pred.column("group")) group = pred.string_column("group");
    } else if (!args.truth_path.empty()) {
        const sccp::Table truth = sccp::read_csv(args.truth_path);
        outcomes = truth.numeric_column("y");
        if (truth.column("group")) group = truth.string_column("group");
    } else {
        throw std::invalid_argument(
            "no outcomes: prediction file lacks a y column and no --truth given");
    }
    if (outcomes.size() != lower.size()) {
        throw std::invalid_argument("length mismatch between predictions and outcomes");
    }

    std::vector<std::pair<double, double>> intervals(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) {
        intervals[i] = {lower[i], upper[i]};
    }
    const sccp::MetricsReport report =
        sccp::score(intervals, point, outcomes, group);
    sccp::write_text_file(args.out_json, sccp::metrics_to_json(report));
    if (!args.out_csv.empty()) {
        sccp::write_text_file(args.out_csv, sccp::metrics_to_csv(report));
    }
    return 0;
}

int cmd_experiment(ExperimentArgs args) {
    sccp::validate_config(args.params.sccp);
    args.params.threads = sccp::resolve_threads(args.threads);
    fs::create_directories(args.out_dir);

    json echo;
    echo["name"] = args.name;
    echo["preset"] = args.preset;
    echo["seed"] = args.params.seed;
    echo["replicates"] = args.params.replicates;
    echo["n_cal"] = args.params.n_cal;
    echo["n_test"] = args.params.n_test;
    echo["alpha"] = args.params.sccp.alpha;
    echo["mondrian_bins"] = args.params.mondrian_bins;

    if (args.name == "calibration-efficiency") {
        const auto rows = sccp::experiments::run_calibration_efficiency(
            args.params, args.distortions);
        sccp::write_text_file(
            (fs::path(args.out_dir) / "calibration_efficiency.csv").string(),
            sccp::experiments::calibration_efficiency_csv(rows));
        echo["distortions"] = args.distortions;
    } else if (args.name == "conditional-coverage") {
        const auto rows = sccp::experiments::run_conditional_coverage(args.params);
        sccp::write_text_file(
            (fs::path(args.out_dir) / "conditional_coverage.csv").string(),
            sccp::experiments::conditional_coverage_csv(rows));
    } else {
        throw std::invalid_argument("unknown experiment: " + args.name);
    }
    sccp::write_text_file((fs::path(args.out_dir) / "params.json").string(),
                          echo.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Model-agnostic calibrated point predictions and prediction intervals "
        "with coverage conditional on the calibrated prediction"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Generate synthetic train/cal/test CSV files");
    std::string sim_config;
    simulate->add_option("--preset", sim.preset, "setup-a or setup-c");
    simulate->add_option("--d", sim.d, "feature dimension");
    simulate->add_option("--kappa", sim.kappa, "Beta(1,kappa) shape");
    simulate->add_option("--a", sim.a, "feature-driven noise scale");
    simulate->add_option("--b", sim.b, "mean-driven noise scale");
    simulate->add_option("--n-train", sim.n_train, "training rows");
    simulate->add_option("--n-cal", sim.n_cal, "calibration rows");
    simulate->add_option("--n-test", sim.n_test, "test rows");
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--predictor", sim.predictor,
                         "oracle, distorted=C, or knn=K[,KAPPA_TRAIN]");
    simulate->add_option("--out-dir", sim.out_dir, "output directory");
    simulate->add_option("--config", sim_config, "JSON config file");

    BandArgs bnd;
    CLI::App* band_cmd = app.add_subcommand(
        "band", "Fit a prediction band over a grid of raw predictions");
    std::string band_config;
    band_cmd->add_option("--cal", bnd.cal_path, "calibration CSV (f_pred,y)")
        ->required();
    band_cmd->add_option("--out", bnd.out_path, "output band JSON");
    band_cmd->add_option("--alpha", bnd.cfg.alpha, "miscoverage level");
    band_cmd->add_option("--y-grid-bins", bnd.cfg.y_grid_bins, "outcome grid bins");
    band_cmd->add_option("--pred-grid-bins", bnd.cfg.pred_grid_bins,
                         "prediction grid bins");
    band_cmd->add_option("--min-segment", bnd.cfg.min_segment_mass,
                         "minimum segment mass");
    band_cmd->add_option("--jitter", bnd.cfg.jitter, "outcome jitter half-width");
    band_cmd->add_option("--seed", bnd.seed, "jitter seed");
    band_cmd->add_option("--threads", bnd.threads, "worker threads (0 = auto)");
    band_cmd->add_option("--config", band_config, "JSON config file");

    PredictArgs prd;
    CLI::App* predict_cmd = app.add_subcommand(
        "predict", "Evaluate a band at test predictions (nearest grid point)");
    predict_cmd->add_option("--band", prd.band_path, "band JSON")->required();
    predict_cmd->add_option("--test", prd.test_path, "test CSV (f_pred)")
        ->required();
    predict_cmd->add_option("--out", prd.out_path, "output CSV");

    EvaluateArgs evl;
    CLI::App* evaluate_cmd = app.add_subcommand(
        "evaluate", "Score predictions against outcomes");
    evaluate_cmd->add_option("--pred", evl.pred_path, "prediction CSV")->required();
    evaluate_cmd->add_option("--truth", evl.truth_path,
                             "CSV providing y (and group) by row order");
    evaluate_cmd->add_option("--out", evl.out_json, "metrics JSON path");
    evaluate_cmd->add_option("--csv", evl.out_csv, "metrics CSV path");

    ExperimentArgs exp;
    CLI::App* experiment_cmd = app.add_subcommand(
        "experiment", "Run a packaged synthetic experiment");
    std::string exp_config;
    experiment_cmd
        ->add_option("--name", exp.name,
                     "calibration-efficiency or conditional-coverage")
        ->required();
    experiment_cmd->add_option("--preset", exp.preset, "setup-a or setup-c");
    experiment_cmd->add_option("--out-dir", exp.out_dir, "output directory");
    experiment_cmd->add_option("--seed", exp.params.seed, "RNG seed");
    experiment_cmd->add_option("--replicates", exp.params.replicates,
                               "simulation replicates");
    experiment_cmd->add_option("--n-cal", exp.params.n_cal, "calibration rows");
    experiment_cmd->add_option("--n-test", exp.params.n_test, "test rows");
    experiment_cmd->add_option("--alpha", exp.params.sccp.alpha, "miscoverage level");
    experiment_cmd->add_option("--y-grid-bins", exp.params.sccp.y_grid_bins,
                               "outcome grid bins");
    experiment_cmd->add_option("--pred-grid-bins", exp.params.sccp.pred_grid_bins,
                               "prediction grid bins");
    experiment_cmd->add_option("--min-segment", exp.params.sccp.min_segment_mass,
                               "minimum segment mass");
    experiment_cmd->add_option("--mondrian-bins", exp.params.mondrian_bins,
                               "Mondrian prediction bins");
    experiment_cmd->add_option("--distortions", exp.distortions,
                               "distortion sweep values");
    experiment_cmd->add_option("--threads", exp.threads, "worker threads (0 = auto)");
    experiment_cmd->add_option("--config", exp_config, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) {
            apply_config_file(simulate, sim_config);
            apply_preset(simulate, sim.preset, &sim.d, &sim.kappa, &sim.a, &sim.b);
            return cmd_simulate(sim);
        }
        if (band_cmd->parsed()) {
            apply_config_file(band_cmd, band_config);
            return cmd_band(bnd);
        }
        if (predict_cmd->parsed()) return cmd_predict(prd);
        if (evaluate_cmd->parsed()) return cmd_evaluate(evl);
        if (experiment_cmd->parsed()) {
            apply_config_file(experiment_cmd, exp_config);
            apply_preset(experiment_cmd, exp.preset, &exp.params.d,
                         &exp.params.kappa, &exp.params.a, &exp.params.b);
            return cmd_experiment(exp);
        }
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "sccp: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sccp: error: " << e.what() << "\n";
        return 1;
    }
}
