#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ksub/bounds.hpp"

using ksub::BoundInputs;
using ksub::BoundResult;

namespace {

BoundInputs inputs(std::uint32_t k, std::uint32_t delta, std::uint32_t diam,
                   std::uint64_t n, double eps) {
    BoundInputs b;
    b.k = k;
    b.delta = delta;
    b.diam = diam;
    b.n = n;
    b.epsilon = eps;
    return b;
}

// Long-double direct-product oracles: an independent evaluation path
// (plain multiplication, no lgamma or log-space accumulation).
long double fact_ld(std::uint32_t x) {
    long double f = 1.0L;
    for (std::uint32_t i = 2; i <= x; ++i)
        f *= i;
    return f;
}

long double pow_ld(long double b, std::uint32_t e) {
    long double r = 1.0L;
    for (std::uint32_t i = 0; i < e; ++i)
        r *= b;
    return r;
}

long double oracle_mcmc(const BoundInputs& b) {
    return 0.5L * fact_ld(b.k) * pow_ld(b.delta, b.k) *
           (static_cast<long double>(b.diam) + b.k - 1) * b.n *
           (b.k * std::log(static_cast<long double>(b.n)) +
            std::log(1.0L / b.epsilon));
}

long double oracle_degree_prop(const BoundInputs& b) {
    return 2.0L * b.k * b.delta *
           (std::log(static_cast<long double>(b.k)) +
            std::log(static_cast<long double>(b.delta)) +
            b.k * std::log(static_cast<long double>(b.n)) +
            std::log(1.0L / b.epsilon));
}

long double oracle_rss_plus(const BoundInputs& b) {
    return 2.0L * b.k * b.delta *
           (b.k * std::log(static_cast<long double>(b.n)) +
            3.0L * std::log(static_cast<long double>(b.k)) +
            std::log(static_cast<long double>(b.delta)) +
            std::log(1.0L / b.epsilon));
}

long double oracle_psrw(const BoundInputs& b) {
    return 0.5L * fact_ld(b.k - 2) * (b.k - 1) * pow_ld(b.delta, b.k) *
           (static_cast<long double>(b.diam) + b.k - 2) * b.n *
           ((b.k - 1) * std::log(static_cast<long double>(b.n)) +
            std::log(static_cast<long double>(b.k) - 1) +
            std::log(static_cast<long double>(b.delta)) +
            std::log(1.0L / b.epsilon));
}

void check_rel(const BoundResult& got, long double want, double tol = 1e-10) {
    REQUIRE_FALSE(got.overflow);
    CHECK(std::abs(got.value - static_cast<double>(want)) <=
          tol * static_cast<double>(want));
}

} // namespace

TEST_CASE("frozen spot values") {
    const BoundInputs b = inputs(3, 2, 3, 4, 0.05);
    CHECK(ksub::bound_mcmc(b).value == doctest::Approx(3434.2).epsilon(1e-4));
    CHECK(ksub::bound_degree_prop(b).value == doctest::Approx(107.4).epsilon(1e-3));
    CHECK(ksub::bound_psrw(b).value == doctest::Approx(915.8).epsilon(1e-4));
    // 12 * (3 ln 4 + 3 ln 3 + ln 2 + ln 20)
    CHECK(ksub::bound_rss_plus(b).value ==
          doctest::Approx(12.0 * (3 * std::log(4.0) + 3 * std::log(3.0) +
                                  std::log(2.0) + std::log(20.0))));
    CHECK(ksub::bound_rss_plus(inputs(4, 3, 5, 10, 0.05)).value ==
          doctest::Approx(419.1).epsilon(1e-3));
    // eps = 1 makes the ln(1/eps) term vanish.
    CHECK(ksub::bound_mcmc(inputs(3, 2, 3, 4, 1.0)).value ==
          doctest::Approx(1996.4).epsilon(1e-3));
}

TEST_CASE("20-point grid matches the direct-product oracle at 1e-10") {
    std::vector<BoundInputs> grid;
    for (std::uint32_t k : {3u, 4u, 5u, 6u, 8u})
        for (std::uint32_t delta : {2u, 7u})
            for (double eps : {0.05, 0.5})
                grid.push_back(inputs(k, delta, 3 + k, 50 * delta, eps));
    REQUIRE(grid.size() == 20);
    for (const BoundInputs& b : grid) {
        check_rel(ksub::bound_mcmc(b), oracle_mcmc(b));
        check_rel(ksub::bound_degree_prop(b), oracle_degree_prop(b));
        check_rel(ksub::bound_rss_plus(b), oracle_rss_plus(b));
        check_rel(ksub::bound_psrw(b), oracle_psrw(b));
        // The walk bounds dwarf the recursive ones, and rss_plus adds
        // 2 ln k over degree_prop.
        CHECK(ksub::bound_rss_plus(b).value >= ksub::bound_degree_prop(b).value);
        CHECK(ksub::bound_psrw(b).value < ksub::bound_mcmc(b).value);
    }
}

TEST_CASE("monotonicity in |V|") {
    for (std::uint32_t k : {3u, 5u}) {
        const BoundInputs lo = inputs(k, 4, 6, 100, 0.05);
        const BoundInputs hi = inputs(k, 4, 6, 200, 0.05);
        CHECK(ksub::bound_mcmc(hi).value > ksub::bound_mcmc(lo).value);
        CHECK(ksub::bound_degree_prop(hi).value > ksub::bound_degree_prop(lo).value);
        CHECK(ksub::bound_rss_plus(hi).value > ksub::bound_rss_plus(lo).value);
        CHECK(ksub::bound_psrw(hi).value > ksub::bound_psrw(lo).value);
    }
}

TEST_CASE("step-count overflow is flagged, log value stays finite") {
    const BoundResult r = ksub::bound_mcmc(inputs(16, 1000, 10, 1'000'000'000, 0.05));
    CHECK(r.overflow);
    CHECK(std::isfinite(r.log_value));
    const BoundResult small = ksub::bound_degree_prop(inputs(3, 2, 3, 4, 0.05));
    CHECK_FALSE(small.overflow);
    CHECK(small.steps == static_cast<std::uint64_t>(std::ceil(small.value)));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(ksub::bound_mcmc(inputs(1, 2, 3, 4, 0.05)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ksub::bound_mcmc(inputs(3, 0, 3, 4, 0.05)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ksub::bound_mcmc(inputs(3, 2, 0, 4, 0.05)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ksub::bound_mcmc(inputs(3, 2, 3, 3, 0.05)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ksub::bound_mcmc(inputs(3, 2, 3, 4, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ksub::bound_mcmc(inputs(3, 2, 3, 4, 1.5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ksub::bound_psrw(inputs(2, 2, 3, 4, 0.05)),
                    std::invalid_argument);
    // degree_prop is defined at k=2 even though sampling there is closed-form.
    CHECK(ksub::bound_degree_prop(inputs(2, 2, 3, 4, 0.05)).value > 0.0);
}
