#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sccp {

// Heteroscedastic synthetic regression process. Features are coordinate-wise
// Beta(1, kappa) on [0,1]; the outcome is Gaussian around mu(x) with standard
// deviation controlled by a (feature-driven) and b (mean-driven).
struct SynthConfig {
    std::size_t d = 1;
    double kappa = 1.0;
    double a = 0.0;
    double b = 0.0;
    std::size_t n = 1;
    std::uint64_t seed = 0;
};

void validate_config(const SynthConfig& cfg);

struct Dataset {
    std::size_t d = 0;
    std::vector<double> features;       // row-major n x d
    std::vector<double> outcomes;       // n
    std::vector<double> predictions;    // n or empty
    std::vector<std::string> group;     // n or empty

    std::size_t size() const { return outcomes.size(); }
    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * d, d};
    }
};

// Feature stream j in [0, d) draws column j; stream d draws the outcome noise.
Dataset generate(const SynthConfig& cfg);

double oracle_mu(std::span<const double> x);
double oracle_sigma2(std::span<const double> x, double a, double b);

// mu(x) +/- z_{1-alpha/2} * sigma(x): the context-conditional gold standard.
std::pair<double, double> oracle_interval(std::span<const double> x, double a,
                                          double b, double alpha);

using Predictor = std::function<double(std::span<const double>)>;

Predictor make_oracle_predictor();
// mu(x) + c * mu(x)^2: a deterministic, monotone-on-range miscalibration knob.
Predictor make_distorted_predictor(double c);
// k-nearest-neighbor regressor trained on a fresh dataset drawn from train_cfg.
Predictor make_knn_predictor(const SynthConfig& train_cfg, std::size_t k);

// Fills ds.predictions by applying the predictor to every row.
void apply_predictor(Dataset& ds, const Predictor& f);

}  // namespace sccp
