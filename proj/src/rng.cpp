#include "qslprobe/rng.hpp"

#include <cmath>
#include <numbers>

namespace qslprobe::rng {

double gaussian(std::mt19937_64& gen) {
    // avoid log(0)
    double u1 = 0.0;
    do {
        u1 = uniform01(gen);
    } while (u1 <= 0.0);
    const double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::uint64_t> multinomial(std::mt19937_64& gen, const std::vector<double>& probs,
                                       std::uint64_t n) {
    std::vector<double> cdf(probs.size());
    double total = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        total += probs[k] > 0.0 ? probs[k] : 0.0;
        cdf[k] = total;
    }
    std::vector<std::uint64_t> counts(probs.size(), 0);
    if (total <= 0.0 || probs.empty()) return counts;
    for (std::uint64_t shot = 0; shot < n; ++shot) {
        const double u = uniform01(gen) * total;
        std::size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (u < cdf[mid])
                hi = mid;
            else
                lo = mid + 1;
        }
        ++counts[lo];
    }
    return counts;
}

}  // namespace qslprobe::rng
