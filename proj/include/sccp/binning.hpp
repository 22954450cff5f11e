#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sccp {

// Boundary index of bin b when n items are split into nbins equal-frequency
// bins: bin b covers [cut(b), cut(b+1)).
inline std::size_t equal_frequency_cut(std::size_t n, std::size_t nbins,
                                       std::size_t b) {
    return n * b / nbins;
}

// Medians of equal-frequency bins of `sorted`, deduplicated so the result is
// strictly increasing. `sorted` must be ascending.
std::vector<double> equal_frequency_representatives(std::span<const double> sorted,
                                                    std::size_t nbins);

// Interior cut values (midpoints between the order statistics straddling each
// equal-frequency boundary). Returns nbins-1 nondecreasing edges.
std::vector<double> equal_frequency_edges(std::span<const double> sorted,
                                          std::size_t nbins);

}  // namespace sccp
