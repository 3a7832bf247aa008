#include <doctest.h>

#include "oracles.hpp"
#include "quadprime/arith.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace arith = quadprime::arith;

TEST_CASE("jacobi small values") {
    CHECK(arith::jacobi(5, 1) == 1);
    CHECK(arith::jacobi(3, 9) == 0);
    CHECK(arith::jacobi(2, 15) == oracle::jacobi(2, 15));
    CHECK(arith::jacobi(2, 15) == 1);
    CHECK(arith::jacobi(-1, 5) == 1);
    CHECK(arith::jacobi(-1, 3) == -1);
    CHECK(arith::jacobi(0, 1) == 1);
    CHECK(arith::jacobi(0, 3) == 0);
}

TEST_CASE("jacobi rejects even or non-positive modulus") {
    CHECK_THROWS_AS(arith::jacobi(3, 8), std::invalid_argument);
    CHECK_THROWS_AS(arith::jacobi(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(arith::jacobi(3, -5), std::invalid_argument);
}

TEST_CASE("jacobi extreme top arguments") {
    CHECK(arith::jacobi(INT64_MIN, 3) == oracle::jacobi(INT64_MIN % 3, 3));
    CHECK(arith::jacobi(INT64_MAX, 7) == oracle::jacobi(INT64_MAX % 7, 7));
}

TEST_CASE("jacobi agrees with the Legendre product oracle") {
    for (std::int64_t n = 1; n <= 199; n += 2)
        for (std::int64_t a = -300; a <= 300; ++a)
            REQUIRE(arith::jacobi(a, n) == oracle::jacobi(a, static_cast<std::uint64_t>(n)));
}

TEST_CASE("jacobi is multiplicative in the top argument") {
    for (std::int64_t n = 1; n <= 199; n += 2)
        for (std::int64_t a = -200; a <= 200; a += 3)
            for (std::int64_t b = -200; b <= 200; b += 7)
                REQUIRE(arith::jacobi(a * b, n) == arith::jacobi(a, n) * arith::jacobi(b, n));
}

TEST_CASE("jacobi is multiplicative in the bottom argument") {
    for (std::int64_t n1 = 1; n1 <= 99; n1 += 2)
        for (std::int64_t n2 = 1; n2 <= 99; n2 += 2)
            for (std::int64_t a = -40; a <= 40; ++a)
                REQUIRE(arith::jacobi(a, n1 * n2) == arith::jacobi(a, n1) * arith::jacobi(a, n2));
}

TEST_CASE("jacobi matches Euler's criterion at primes") {
    for (std::uint64_t p = 3; p <= 199; p += 2) {
        if (!oracle::is_prime(p))
            continue;
        for (std::uint64_t a = 1; a < p; ++a) {
            const std::uint64_t r = oracle::pow_mod(a, (p - 1) / 2, p);
            const int expected = r == 1 ? 1 : -1;
            REQUIRE(arith::jacobi(static_cast<std::int64_t>(a), static_cast<std::int64_t>(p)) == expected);
        }
    }
}

TEST_CASE("is_prime") {
    CHECK_FALSE(arith::is_prime(0));
    CHECK_FALSE(arith::is_prime(1));
    CHECK(arith::is_prime(2));
    CHECK(arith::is_prime((std::uint64_t{1} << 32) + 15));
    CHECK(oracle::is_prime((std::uint64_t{1} << 32) + 15));
    CHECK(arith::is_prime(18446744073709551557ULL));
    CHECK_FALSE(arith::is_prime(18446744073709551615ULL));
    CHECK_FALSE(arith::is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK_FALSE(arith::is_prime(4294967297ULL));  // 641 * 6700417
    for (std::uint64_t n = 0; n <= 20000; ++n)
        REQUIRE(arith::is_prime(n) == oracle::is_prime(n));
}

TEST_CASE("factorize reassembles and matches trial division") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 400; ++i) {
        const std::uint64_t n = 2 + rng() % 1'000'000'000'000ULL;
        const auto f = arith::factorize(n);
        const auto g = oracle::factor(n);
        REQUIRE(f.size() == g.size());
        for (std::size_t j = 0; j < f.size(); ++j) {
            CHECK(f[j].prime == g[j].first);
            CHECK(f[j].exponent == g[j].second);
        }
    }
    const std::uint64_t semiprime = 4294967291ULL * 4294967279ULL;
    const auto f = arith::factorize(semiprime);
    REQUIRE(f.size() == 2);
    CHECK(f[0].prime == 4294967279ULL);
    CHECK(f[1].prime == 4294967291ULL);
    CHECK(arith::factorize(1).empty());
}

TEST_CASE("integer_root and perfect_power") {
    CHECK(arith::integer_root(0, 2) == 0);
    CHECK(arith::integer_root(15, 2) == 3);
    CHECK(arith::integer_root(16, 2) == 4);
    CHECK(arith::integer_root(18446744073709551615ULL, 2) == 4294967295ULL);
    CHECK(arith::integer_root(18446744073709551615ULL, 64) == 1);
    CHECK(arith::perfect_power(64) == std::pair<std::uint64_t, unsigned>{2, 6});
    CHECK(arith::perfect_power(36) == std::pair<std::uint64_t, unsigned>{6, 2});
    CHECK(arith::perfect_power(7) == std::pair<std::uint64_t, unsigned>{7, 1});
    CHECK(arith::perfect_power(std::uint64_t{1} << 63) == std::pair<std::uint64_t, unsigned>{2, 63});
}

TEST_CASE("von_mangoldt") {
    CHECK(arith::von_mangoldt(1) == 0.0);
    CHECK(arith::von_mangoldt(8) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(arith::von_mangoldt(10) == 0.0);
    CHECK_THROWS(arith::von_mangoldt(0));
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        const double expected = oracle::lambda(n);
        const double got = arith::von_mangoldt(n);
        REQUIRE((expected == 0.0) == (got == 0.0));
        REQUIRE(std::fabs(expected - got) <= 1e-12);
    }
}

TEST_CASE("mobius_phi") {
    CHECK(arith::mobius_phi(1).mu == 1);
    CHECK(arith::mobius_phi(1).phi == 1);
    CHECK(arith::mobius_phi(12).mu == 0);
    CHECK(arith::mobius_phi(12).phi == 4);
    CHECK(arith::mobius_phi(15).mu == 1);
    CHECK(arith::mobius_phi(15).phi == 8);
    CHECK_THROWS(arith::mobius_phi(0));
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        const auto mp = arith::mobius_phi(n);
        REQUIRE(mp.mu == oracle::mobius(n));
        REQUIRE(mp.phi == oracle::phi(n));
    }
}

TEST_CASE("divisor sums of mu and phi") {
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        int mu_sum = 0;
        std::uint64_t phi_sum = 0;
        for (const auto d : arith::divisors(n)) {
            REQUIRE(n % d == 0);
            const auto mp = arith::mobius_phi(d);
            mu_sum += mp.mu;
            phi_sum += mp.phi;
        }
        REQUIRE(mu_sum == (n == 1 ? 1 : 0));
        REQUIRE(phi_sum == n);
    }
}

TEST_CASE("divisors are ascending and complete") {
    const auto d = arith::divisors(360);
    CHECK(d.size() == 24);
    CHECK(std::is_sorted(d.begin(), d.end()));
    CHECK(d.front() == 1);
    CHECK(d.back() == 360);
    CHECK(arith::divisors(1) == std::vector<std::uint64_t>{1});
}

TEST_CASE("is_squarefree") {
    for (std::uint64_t n = 1; n <= 5000; ++n)
        REQUIRE(arith::is_squarefree(n) == oracle::squarefree(n));
}
