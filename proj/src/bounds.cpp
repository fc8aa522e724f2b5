#include "ksub/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ksub {

void BoundInputs::validate() const {
    if (k < 2)
        throw std::invalid_argument("bound inputs require k >= 2");
    if (delta < 1)
        throw std::invalid_argument("bound inputs require delta >= 1");
    if (diam < 1)
        throw std::invalid_argument("bound inputs require diam >= 1");
    if (n <= k)
        throw std::invalid_argument("bound inputs require n > k");
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("bound inputs require epsilon in (0,1]");
}

namespace {

constexpr double kMaxRepresentableSteps = 4.611686018427387904e18; // 2^62

double ln_factorial(std::uint64_t x) {
    return std::lgamma(static_cast<double>(x) + 1.0);
}

BoundResult finish(double log_coeff, double log_term) {
    BoundResult r;
    r.log_value = log_coeff + std::log(log_term);
    r.value = std::exp(r.log_value);
    if (!std::isfinite(r.value) || r.value > kMaxRepresentableSteps) {
        r.overflow = true;
        r.value = std::isfinite(r.value)
                      ? r.value
                      : std::numeric_limits<double>::infinity();
        r.steps = 0;
    } else {
        r.steps = static_cast<std::uint64_t>(std::ceil(r.value));
    }
    return r;
}

} // namespace

BoundResult bound_mcmc(const BoundInputs& b) {
    b.validate();
    const double log_coeff = std::log(0.5) + ln_factorial(b.k) +
                             b.k * std::log(static_cast<double>(b.delta)) +
                             std::log(static_cast<double>(b.diam) + b.k - 1.0) +
                             std::log(static_cast<double>(b.n));
    const double log_term =
        b.k * std::log(static_cast<double>(b.n)) + std::log(1.0 / b.epsilon);
    return finish(log_coeff, log_term);
}

BoundResult bound_degree_prop(const BoundInputs& b) {
    b.validate();
    const double log_coeff = std::log(2.0 * b.k * b.delta);
    const double log_term = std::log(static_cast<double>(b.k)) +
                            std::log(static_cast<double>(b.delta)) +
                            b.k * std::log(static_cast<double>(b.n)) +
                            std::log(1.0 / b.epsilon);
    return finish(log_coeff, log_term);
}

BoundResult bound_rss_plus(const BoundInputs& b) {
    b.validate();
    const double log_coeff = std::log(2.0 * b.k * b.delta);
    const double log_term = b.k * std::log(static_cast<double>(b.n)) +
                            3.0 * std::log(static_cast<double>(b.k)) +
                            std::log(static_cast<double>(b.delta)) +
                            std::log(1.0 / b.epsilon);
    return finish(log_coeff, log_term);
}

BoundResult bound_psrw(const BoundInputs& b) {
    b.validate();
    if (b.k < 3)
        throw std::invalid_argument("psrw bound requires k >= 3");
    const double log_coeff = std::log(0.5) + ln_factorial(b.k - 2) +
                             std::log(static_cast<double>(b.k) - 1.0) +
                             b.k * std::log(static_cast<double>(b.delta)) +
                             std::log(static_cast<double>(b.diam) + b.k - 2.0) +
                             std::log(static_cast<double>(b.n));
    const double log_term = (b.k - 1.0) * std::log(static_cast<double>(b.n)) +
                            std::log(static_cast<double>(b.k) - 1.0) +
                            std::log(static_cast<double>(b.delta)) +
                            std::log(1.0 / b.epsilon);
    return finish(log_coeff, log_term);
}

} // namespace ksub
