#ifndef KSUB_RNG_HPP
#define KSUB_RNG_HPP

#include <cstdint>
#include <random>

namespace ksub {

/// Deterministic 64-bit generator. Same seed, same sequence, everywhere.
/// random(0,1) draws are in [0,1) and used with strict-less-than tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    double uniform01() {
        // 53 random mantissa bits; avoids distribution-implementation drift.
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n > 0. Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = -n % n;
        for (;;) {
            std::uint64_t r = eng_();
            if (r >= threshold)
                return r % n;
        }
    }

private:
    std::mt19937_64 eng_;
};

/// Stable per-stream seed derivation (splitmix64 over seed ^ f(stream)).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace ksub

#endif
