#include "sccp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "sccp/random.hpp"

namespace sccp {

void validate_config(const SynthConfig& cfg) {
    if (cfg.d < 1) throw std::invalid_argument("d must be at least 1");
    if (cfg.n < 1) throw std::invalid_argument("n must be at least 1");
    if (!(cfg.kappa > 0.0) || !std::isfinite(cfg.kappa)) {
        throw std::invalid_argument("kappa must be positive");
    }
    if (cfg.a < 0.0 || cfg.b < 0.0 || !std::isfinite(cfg.a) || !std::isfinite(cfg.b)) {
        throw std::invalid_argument("a and b must be nonnegative");
    }
}

namespace {

void check_domain(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("empty context");
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("context outside [0,1]^d");
        }
    }
}

double sigma_raw(std::span<const double> x, double a, double b) {
    const double mu = oracle_mu(x);
    return 0.035 - a * std::log(0.5 + 0.5 * x[0]) / 8.0 +
           b * (std::pow(std::abs(mu), 6.0) / 20.0 - 0.02) / 2.0;
}

}  // namespace

double oracle_mu(std::span<const double> x) {
    check_domain(x);
    double sum = 0.0;
    for (double v : x) sum += v + std::sin(4.0 * v);
    return sum / std::sqrt(static_cast<double>(x.size()));
}

double oracle_sigma2(std::span<const double> x, double a, double b) {
    const double s = sigma_raw(x, a, b);
    return s * s;
}

std::pair<double, double> oracle_interval(std::span<const double> x, double a,
                                          double b, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1)");
    }
    const double mu = oracle_mu(x);
    const double sigma = std::sqrt(oracle_sigma2(x, a, b));
    const double z = normal_quantile(1.0 - alpha / 2.0);
    return {mu - z * sigma, mu + z * sigma};
}

Dataset generate(const SynthConfig& cfg) {
    validate_config(cfg);
    Dataset ds;
    ds.d = cfg.d;
    ds.features.resize(cfg.n * cfg.d);
    ds.outcomes.resize(cfg.n);
    const double inv_kappa = 1.0 / cfg.kappa;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        for (std::size_t j = 0; j < cfg.d; ++j) {
            const double u = rng::uniform01(cfg.seed, j, i);
            ds.features[i * cfg.d + j] = 1.0 - std::pow(u, inv_kappa);
        }
        const auto x = ds.row(i);
        const double mu = oracle_mu(x);
        const double sigma = std::sqrt(oracle_sigma2(x, cfg.a, cfg.b));
        ds.outcomes[i] = mu + sigma * rng::normal(cfg.seed, cfg.d, i);
    }
    return ds;
}

Predictor make_oracle_predictor() {
    return [](std::span<const double> x) { return oracle_mu(x); };
}

Predictor make_distorted_predictor(double c) {
    return [c](std::span<const double> x) {
        const double mu = oracle_mu(x);
        return mu + c * mu * mu;
    };
}

Predictor make_knn_predictor(const SynthConfig& train_cfg, std::size_t k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (k > train_cfg.n) throw std::invalid_argument("k exceeds training size");
    auto train = std::make_shared<Dataset>(generate(train_cfg));
    return [train, k](std::span<const double> x) {
        check_domain(x);
        if (x.size() != train->d) throw std::invalid_argument("dimension mismatch");
        const std::size_t n = train->size();
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = train->row(i);
            double d2 = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double diff = row[j] - x[j];
                d2 += diff * diff;
            }
            dist[i] = {d2, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                          dist.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += train->outcomes[dist[i].second];
        return sum / static_cast<double>(k);
    };
}

void apply_predictor(Dataset& ds, const Predictor& f) {
    ds.predictions.resize(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        ds.predictions[i] = f(ds.row(i));
    }
}

}  // namespace sccp
