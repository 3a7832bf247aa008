#include <doctest.h>

#include "oracles.hpp"
#include "quadprime/arith.hpp"
#include "quadprime/errors.hpp"
#include "quadprime/sieve.hpp"
#include "quadprime/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace singular = quadprime::singular;

namespace {

constexpr double kSingularOne = 1.3728134628;

// Mean of the truncated Euler product over the primes in (P/2, P].
double averaged_euler(std::uint64_t k, std::uint64_t P) {
    long double log_prod = 0;
    long double acc = 0;
    std::uint64_t count = 0;
    oracle::primes_in(3, P, [&](std::uint64_t p) {
        log_prod += std::log1p(-static_cast<long double>(oracle::legendre(-static_cast<std::int64_t>(k), p)) /
                               static_cast<long double>(p - 1));
        if (2 * p > P) {
            acc += std::exp(log_prod);
            ++count;
        }
    });
    return static_cast<double>(acc / count);
}

}  // namespace

TEST_CASE("quadratic character") {
    for (std::uint64_t k = 1; k <= 60; ++k) {
        const singular::QuadraticCharacter chi(k);
        CHECK(chi.period() == 4 * k);
        for (std::uint64_t n = 0; n < 12 * k; ++n) {
            const int expected = n % 2 == 0 ? 0 : oracle::jacobi(-static_cast<std::int64_t>(k), n);
            REQUIRE(chi(n) == expected);
        }
    }
    CHECK_THROWS(singular::QuadraticCharacter(0));
}

TEST_CASE("sigma_q examples") {
    for (std::uint64_t k = 1; k <= 30; ++k)
        CHECK(singular::sigma_q(2, k) == 0);
    CHECK(singular::sigma_q(3, 1) == -3);
    CHECK(singular::sigma_q(15, 1) == -15);
    CHECK(singular::sigma_q(9, 1) == oracle::sigma(9, 1));
    CHECK(singular::sigma_q(1, 5) == 1);
}

TEST_CASE("sigma_q against the double sum, including non-squarefree q") {
    for (std::uint64_t q = 1; q <= 64; ++q)
        for (std::uint64_t k = 1; k <= 20; ++k)
            REQUIRE(singular::sigma_q(q, k) == oracle::sigma(q, k));
}

TEST_CASE("sigma_q at primes") {
    for (std::uint64_t p = 3; p <= 199; p += 2) {
        if (!oracle::is_prime(p))
            continue;
        for (std::uint64_t k = 1; k <= 50; ++k)
            REQUIRE(singular::sigma_q(p, k) ==
                    static_cast<std::int64_t>(p) * oracle::legendre(-static_cast<std::int64_t>(k), p));
    }
}

TEST_CASE("Euler product hand values") {
    CHECK(singular::singular_series_euler(1, 5) == doctest::Approx(1.125).epsilon(1e-15));
    for (std::uint64_t k = 1; k <= 30; ++k) {
        const double v = singular::singular_series_euler(k, 3);
        CHECK(v == doctest::Approx(1.0 - oracle::legendre(-static_cast<std::int64_t>(k), 3) / 2.0));
    }
    CHECK(std::fabs(singular::singular_series_euler(1, 1'000'000) - singular::singular_series_lmethod(1, 1e-8)) <
          5e-3);
    CHECK_THROWS(singular::singular_series_euler(1, 2));
}

TEST_CASE("Euler range is bit-identical to the per-k product") {
    const auto one = singular::singular_series_euler_range(1, 3000, 20000, 1);
    const auto four = singular::singular_series_euler_range(1, 3000, 20000, 4);
    REQUIRE(one.size() == 3000);
    CHECK(one == four);
    for (std::uint64_t k = 1; k <= 3000; k += 37)
        REQUIRE(one[k - 1] == singular::singular_series_euler(k, 20000));
    const auto shifted = singular::singular_series_euler_range(70000, 70100, 50000, 3);
    for (std::uint64_t k = 70000; k <= 70100; ++k)
        REQUIRE(shifted[k - 70000] == singular::singular_series_euler(k, 50000));
}

TEST_CASE("L values: closed forms") {
    CHECK(std::fabs(singular::l_value(1, 1e-9) - std::numbers::pi / 4) < 1e-9);
    CHECK(std::fabs(singular::l_value(2, 1e-9) - std::numbers::pi / (2 * std::numbers::sqrt2)) < 1e-9);
    CHECK(std::fabs(singular::l_value(3, 1e-9) - std::numbers::pi / (2 * std::sqrt(3.0))) < 1e-9);  // odd n only: (1 + 1/2) pi / (3 sqrt 3)
}

TEST_CASE("L values: digamma oracle and the error bound") {
    for (std::uint64_t k = 1; k <= 80; ++k) {
        const auto est = singular::l_value_estimate(k, 1e-6);
        CHECK(est.error_bound <= 1e-6);
        REQUIRE(std::fabs(est.value - oracle::l_value(k)) <= 1e-6);
    }
}

TEST_CASE("L value for k = 3 against direct summation") {
    int period[12];
    for (int r = 0; r < 12; ++r)
        period[r] = r % 2 == 0 ? 0 : oracle::jacobi(-3, r);
    long double s = 0, prev = 0;
    const std::uint64_t N = 100'000'000;
    for (std::uint64_t n = 1; n <= N; n += 2) {
        prev = s;
        s += period[n % 12] / static_cast<long double>(n);
    }
    const double direct = static_cast<double>((s + prev) / 2);
    CHECK(std::fabs(singular::l_value(3, 1e-6) - direct) < 1e-6);
}

TEST_CASE("L value degenerate tolerance and term ceiling") {
    const double v = singular::l_value(5, 10.0);
    CHECK(std::isfinite(v));
    CHECK(v != 0.0);
    CHECK(std::fabs(v - oracle::l_value(5)) <= 10.0);
    CHECK_THROWS_AS(singular::l_value(1000, 1e-12, 1000), quadprime::ConvergenceError);
    CHECK_THROWS_AS(singular::l_value(1, 0.0), std::invalid_argument);
}

TEST_CASE("product tail bound and cutoff search") {
    CHECK(singular::product_tail_bound(1000) > singular::product_tail_bound(2000));
    for (const double delta : {1e-2, 1e-4, 1e-6}) {
        const auto P = singular::product_cutoff_for(delta);
        CHECK(singular::product_tail_bound(P) <= delta);
        CHECK(singular::product_tail_bound(P - 1) > delta);
    }
    // The bound must dominate the true tail of sum 1/(p(p-2)).
    long double tail = 0;
    oracle::primes_in(10'001, 20'000'000, [&](std::uint64_t p) {
        tail += 1.0L / (static_cast<long double>(p) * static_cast<long double>(p - 2));
    });
    CHECK(static_cast<double>(tail) <= singular::product_tail_bound(10'000));
}

TEST_CASE("singular series by the L method") {
    CHECK(std::fabs(singular::singular_series_lmethod(1, 1e-6) - kSingularOne) < 1e-6);
    CHECK(std::fabs(singular::singular_series_lmethod(2, 1e-6) - averaged_euler(2, 100'000'000)) < 5e-5);
    singular::SingularCfg cfg;
    cfg.method = singular::Method::lmethod;
    CHECK(singular::singular_series(7, cfg) == singular::singular_series_lmethod(7, 1e-6));
    cfg.tol = -1;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("L method agrees with the long Euler product") {
    for (std::uint64_t k = 1; k <= 40; ++k) {
        if (!oracle::squarefree(k))
            continue;
        REQUIRE(std::fabs(singular::singular_series_lmethod(k, 1e-6) - singular::singular_series_euler(k, 10'000'000)) <
                1e-2);
    }
}

TEST_CASE("singular series stays above 0.1 / log(k + 2)") {
    const auto values = singular::singular_series_euler_range(1, 10000, 10000, 4);
    const auto sf = quadprime::sieve::build_squarefree_table(10000);
    for (std::uint64_t k = 1; k <= 10000; ++k)
        if (sf[k])
            REQUIRE(values[k - 1] > 0.1 / std::log(static_cast<double>(k + 2)));
}

TEST_CASE("Dirichlet partial sums") {
    for (std::uint64_t k = 1; k <= 20; ++k)
        CHECK(singular::dirichlet_partial(k, 1) == 1.0);
    CHECK(singular::dirichlet_partial(1, 3) == doctest::Approx(1.5));
    CHECK(singular::dirichlet_partial(1, 5) == doctest::Approx(1.25));
    for (std::uint64_t k = 1; k <= 30; ++k) {
        double brute = 0;
        for (std::uint64_t q = 1; q <= 300; q += 2)
            brute += oracle::mobius(q) / static_cast<double>(oracle::phi(q)) *
                     oracle::jacobi(-static_cast<std::int64_t>(k), q);
        REQUIRE(singular::dirichlet_partial(k, 300) == doctest::Approx(brute).epsilon(1e-12));
    }
    const auto tables = quadprime::sieve::build_mobius_phi_tables(500);
    CHECK(singular::dirichlet_partial(11, 500, tables) == singular::dirichlet_partial(11, 500));
}

TEST_CASE("Dirichlet partial sums approach S(k) in median") {
    std::vector<std::uint64_t> ks;
    for (std::uint64_t k = 1; k <= 1000; ++k)
        if (oracle::squarefree(k))
            ks.push_back(k);
    std::vector<double> s;
    for (const auto k : ks)
        s.push_back(singular::singular_series_lmethod(k, 1e-7));
    double previous = INFINITY;
    const auto tables = quadprime::sieve::build_mobius_phi_tables(10000);
    for (const std::uint64_t Q : {10, 100, 1000, 10000}) {
        std::vector<double> dev;
        for (std::size_t i = 0; i < ks.size(); ++i)
            dev.push_back(std::fabs(singular::dirichlet_partial(ks[i], Q, tables) - s[i]));
        std::nth_element(dev.begin(), dev.begin() + dev.size() / 2, dev.end());
        const double median = dev[dev.size() / 2];
        CHECK(median < previous);
        previous = median;
    }
}

TEST_CASE("tail of the Dirichlet series") {
    CHECK(singular::tail_phi(1, 1, 1e-6) == doctest::Approx(kSingularOne - 1.0).epsilon(1e-5));
    for (std::uint64_t k : {1, 2, 3, 5, 101}) {
        const double total = singular::tail_phi(k, 77, 1e-7) + singular::dirichlet_partial(k, 77);
        CHECK(std::fabs(total - singular::singular_series_lmethod(k, 1e-7)) < 1e-12);
    }
    double small_q = 0, big_q = 0;
    const auto tables = quadprime::sieve::build_mobius_phi_tables(10000);
    for (std::uint64_t k = 1; k <= 1000; ++k) {
        if (!oracle::squarefree(k))
            continue;
        small_q += std::fabs(singular::tail_phi(k, 10, 1e-6, tables));
        big_q += std::fabs(singular::tail_phi(k, 10000, 1e-6, tables));
    }
    CHECK(big_q < small_q);
}

TEST_CASE("sandwich bounds") {
    long double lower = 0, upper = 0;
    oracle::primes_in(3, 10'000'000, [&](std::uint64_t p) {
        const long double pd = static_cast<long double>(p);
        lower += std::log1p(-1.0L / ((pd - 1) * (pd - 1)));
        upper -= std::log1p(-1.0L / (pd * pd));
    });
    const auto small = singular::compute_sandwich_bounds(10'000'000);
    CHECK(small.lower == doctest::Approx(static_cast<double>(std::exp(lower))).epsilon(1e-13));
    CHECK(small.upper == doctest::Approx(static_cast<double>(std::exp(upper))).epsilon(1e-13));

    const auto& b = singular::sandwich_bounds();
    CHECK(std::fabs(b.lower - 0.6601618158) < 1e-8);
    CHECK(std::fabs(b.upper - std::numbers::pi * std::numbers::pi / 8) < 1e-8);
    CHECK(b.tail_bound < 1e-9);

    for (std::uint64_t k = 1; k <= 300; ++k) {
        const auto r = singular::sandwich_check(k, 1e-4);
        CHECK(r.pass);
        const double direct = singular::singular_series_lmethod(k, 1e-7) * oracle::l_value(k);
        CHECK(std::fabs(r.product - direct) < 2e-5);
    }
}
