#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qslprobe::rng {

// Deterministic across platforms: mt19937_64 output is pinned by the
// standard, the std::*_distribution adapters are not, so draws are derived
// from raw bits here.

inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Box-Muller, no cached spare (call sequence stays position-independent).
double gaussian(std::mt19937_64& gen);

// n draws against the cumulative distribution of probs (renormalized).
std::vector<std::uint64_t> multinomial(std::mt19937_64& gen, const std::vector<double>& probs,
                                       std::uint64_t n);

}  // namespace qslprobe::rng
