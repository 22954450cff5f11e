#include "sccp/binning.hpp"

#include <stdexcept>

namespace sccp {

std::vector<double> equal_frequency_representatives(std::span<const double> sorted,
                                                    std::size_t nbins) {
    if (sorted.empty()) throw std::invalid_argument("empty sample");
    if (nbins == 0) throw std::invalid_argument("nbins must be positive");
    const std::size_t n = sorted.size();
    std::vector<double> reps;
    reps.reserve(nbins);
    for (std::size_t b = 0; b < nbins; ++b) {
        const std::size_t lo = equal_frequency_cut(n, nbins, b);
        const std::size_t hi = equal_frequency_cut(n, nbins, b + 1);
        if (lo >= hi) continue;  // more bins than samples
        const std::size_t len = hi - lo;
        const double med = (len % 2 == 1)
                               ? sorted[lo + len / 2]
                               : 0.5 * (sorted[lo + len / 2 - 1] + sorted[lo + len / 2]);
        if (reps.empty() || med > reps.back()) reps.push_back(med);
    }
    return reps;
}

std::vector<double> equal_frequency_edges(std::span<const double> sorted,
                                          std::size_t nbins) {
    if (sorted.empty()) throw std::invalid_argument("empty sample");
    if (nbins == 0) throw std::invalid_argument("nbins must be positive");
    const std::size_t n = sorted.size();
    std::vector<double> edges;
    edges.reserve(nbins - 1);
    for (std::size_t b = 1; b < nbins; ++b) {
        std::size_t cut = equal_frequency_cut(n, nbins, b);
        if (cut == 0) cut = 1;
        if (cut >= n) cut = n - 1;
        edges.push_back(0.5 * (sorted[cut - 1] + sorted[cut]));
    }
    return edges;
}

}  // namespace sccp
