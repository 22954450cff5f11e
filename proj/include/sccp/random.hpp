#pragma once

#include <cstdint>

namespace sccp {

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so parallel generation is order-independent
// and reruns with the same seed are bit-identical.
namespace rng {

constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
    return mix64(h ^ (counter + 0xD1B54A32D192ED03ULL));
}

// Uniform on the open interval (0,1); never returns an endpoint.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter) {
    const std::uint64_t bits = substream(seed, stream, counter) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

inline double uniform(double lo, double hi, std::uint64_t seed,
                      std::uint64_t stream, std::uint64_t counter) {
    return lo + (hi - lo) * uniform01(seed, stream, counter);
}

double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

}  // namespace rng

// Standard normal quantile (inverse CDF), accurate to ~1e-15 over (0,1).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace sccp
