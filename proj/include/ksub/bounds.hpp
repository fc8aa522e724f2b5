#ifndef KSUB_BOUNDS_HPP
#define KSUB_BOUNDS_HPP

#include <cstdint>

namespace ksub {

/// Arguments of the closed-form mixing-time bounds.
struct BoundInputs {
    std::uint32_t k = 0;       // subgraph size
    std::uint32_t delta = 0;   // max degree of G
    std::uint32_t diam = 1;    // diameter of G (or a user upper bound)
    std::uint64_t n = 0;       // |V|
    double epsilon = 0.05;     // total-variation target

    void validate() const;
};

/// Bound value, evaluated in log space. `value` is +inf when the real
/// value exceeds double range; `steps` is ceil(value) and only valid when
/// `overflow` is false (steps representable below 2^62).
struct BoundResult {
    double log_value = 0.0; // natural log of the bound
    double value = 0.0;
    std::uint64_t steps = 0;
    bool overflow = false;
};

/// (1/2) k! Δ^k (D+k-1) |V| (k ln|V| + ln ε⁻¹)
BoundResult bound_mcmc(const BoundInputs& b);

/// 2kΔ (ln k + ln Δ + k ln|V| + ln ε⁻¹); diam unused
BoundResult bound_degree_prop(const BoundInputs& b);

/// 2kΔ (k ln|V| + 3 ln k + ln Δ + ln ε⁻¹); diam unused
BoundResult bound_rss_plus(const BoundInputs& b);

/// (1/2) (k-2)! (k-1) Δ^k (D+k-2) |V| ((k-1)ln|V| + ln(k-1) + ln Δ + ln ε⁻¹)
/// Requires k >= 3 (the walk runs on G^(k-1)).
BoundResult bound_psrw(const BoundInputs& b);

} // namespace ksub

#endif
