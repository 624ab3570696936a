#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gpreli {

// splitmix64 step: the standard finalizer-based generator used for seed mixing.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Collapses a key tuple (master seed, alpha index, n index, replicate, ...)
// into one stream seed. Chaining through splitmix64 keeps distinct tuples on
// distinct streams, which is what makes per-cell parallelism reproducible.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t state = 0x8f1bbcdcbfa53e0bULL;
    for (std::uint64_t k : keys) {
        state ^= splitmix64(state) ^ k;
        (void)splitmix64(state);
    }
    return splitmix64(state);
}

double normal_quantile(double prob); // special.cpp

// Deterministic stream: mt19937_64 for uniforms, inverse-CDF for normals.
// std::normal_distribution is implementation-defined across standard
// libraries, so it must never appear in output-affecting paths.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on (0,1): 53-bit mantissa draw, zero remapped to the smallest
    // representable step so inverse-CDF transforms never see an endpoint.
    double uniform01() {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal() { return normal_quantile(uniform01()); }

    std::uint64_t next_u64() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

} // namespace gpreli
