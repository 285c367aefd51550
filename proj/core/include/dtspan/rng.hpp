#pragma once

#include <cstdint>
#include <random>

namespace dtspan {

// Seeded generator with fixed value mappings. std::uniform_*_distribution is
// implementation-defined, so all draws go through the helpers below to keep
// seeded runs reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, k). k must be positive.
    std::uint64_t below(std::uint64_t k) {
        // Rejection sampling over the largest multiple of k.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % k);
        std::uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return v % k;
    }

    int coin() { return static_cast<int>(below(2)); }

private:
    std::mt19937_64 eng_;
};

}  // namespace dtspan
