#include <doctest.h>

#include "oracles.hpp"
#include "quadprime/arith.hpp"
#include "quadprime/errors.hpp"
#include "quadprime/sieve.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

namespace sieve = quadprime::sieve;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("prime table") {
    const auto t10 = sieve::build_prime_table(10);
    CHECK(std::vector<std::uint64_t>(t10.begin(), t10.end()) == std::vector<std::uint64_t>{2, 3, 5, 7});
    const auto t2 = sieve::build_prime_table(2);
    CHECK(t2.size() == 1);
    CHECK(t2[0] == 2);
    std::size_t count = 0;
    for (std::uint64_t n = 2; n <= 10000; ++n)
        count += oracle::is_prime(n);
    CHECK(sieve::build_prime_table(10000).size() == count);
    CHECK(count == 1229);
    CHECK_THROWS_AS(sieve::build_prime_table(1), std::invalid_argument);
    CHECK(t10.up_to(6).size() == 3);
}

TEST_CASE("prime table across segment sizes") {
    sieve::SieveConfig small;
    small.segment_size = 1000;
    small.workers = 3;
    const auto a = sieve::build_prime_table(300000);
    const auto b = sieve::build_prime_table(300000, small);
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
}

TEST_CASE("shared prime table grows") {
    const auto a = sieve::shared_primes(100);
    CHECK(a->limit() >= 100);
    const auto b = sieve::shared_primes(2'000'000);
    CHECK(b->limit() >= 2'000'000);
    CHECK(b->up_to(100).size() == 25);
}

TEST_CASE("prime segments stream in order") {
    std::vector<std::uint64_t> seen;
    sieve::SieveConfig cfg;
    cfg.segment_size = 64;
    sieve::for_each_prime_segment(1000, 5000, [&](std::span<const std::uint64_t> ps) {
        seen.insert(seen.end(), ps.begin(), ps.end());
    }, cfg);
    std::vector<std::uint64_t> expected;
    oracle::primes_in(1000, 5000, [&](std::uint64_t p) { expected.push_back(p); });
    CHECK(seen == expected);
}

TEST_CASE("lambda table small cases") {
    const auto t = sieve::build_lambda_table(1, 10);
    const double l2 = std::log(2.0), l3 = std::log(3.0), l5 = std::log(5.0), l7 = std::log(7.0);
    const std::vector<double> expected{0, l2, l3, l2, l5, 0, l7, l2, l3, 0};
    REQUIRE(t.size() == 10);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(t.values()[i] == doctest::Approx(expected[i]).epsilon(1e-15));
    const auto one = sieve::build_lambda_table(100, 100);
    CHECK(one.size() == 1);
    CHECK(one(100) == 0.0);
    CHECK_THROWS_AS(sieve::build_lambda_table(10, 5), std::invalid_argument);
    CHECK_THROWS_AS(t.require_coverage(1, 11), quadprime::CoverageError);
}

TEST_CASE("lambda table agrees with pointwise von Mangoldt on random large m") {
    const std::uint64_t lo = 100'000'000 - 2'000'000, hi = 100'000'000;
    const auto t = sieve::build_lambda_table(lo, hi);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t m = lo + rng() % (hi - lo + 1);
        REQUIRE(t(m) == quadprime::arith::von_mangoldt(m));
    }
    for (std::uint64_t m = lo; m < lo + 3000; ++m)
        REQUIRE(std::fabs(t(m) - oracle::lambda(m)) <= 1e-12);
}

TEST_CASE("lambda table prime positions are exactly the primes") {
    const std::uint64_t lo = 500'000, hi = 700'000;
    const auto t = sieve::build_lambda_table(lo, hi);
    std::vector<std::uint64_t> primes;
    oracle::primes_in(lo, hi, [&](std::uint64_t p) { primes.push_back(p); });
    std::size_t j = 0;
    for (std::uint64_t m = lo; m <= hi; ++m) {
        const bool is_p = j < primes.size() && primes[j] == m;
        if (is_p) {
            REQUIRE(t(m) == std::log(static_cast<double>(m)));
            ++j;
        } else if (t(m) != 0.0) {
            REQUIRE(quadprime::arith::perfect_power(m).second >= 2);
        }
    }
}

TEST_CASE("segmentation invisibility") {
    const std::uint64_t lo = 1, hi = 250'000;
    const auto whole = sieve::build_lambda_table(lo, hi);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> joined;
        std::uint64_t start = lo;
        while (start <= hi) {
            const std::uint64_t end = std::min(hi, start + rng() % 40'000);
            const auto part = sieve::build_lambda_table(start, end);
            joined.insert(joined.end(), part.values().begin(), part.values().end());
            start = end + 1;
        }
        REQUIRE(joined.size() == whole.size());
        CHECK(std::equal(joined.begin(), joined.end(), whole.values().begin()));
    }
    for (const unsigned workers : {1u, 2u, 5u}) {
        for (const std::size_t seg : {std::size_t{777}, std::size_t{1} << 16}) {
            sieve::SieveConfig cfg;
            cfg.workers = workers;
            cfg.segment_size = seg;
            CHECK(sieve::build_lambda_table(lo, hi, cfg) == whole);
        }
    }
}

TEST_CASE("lambda table budget") {
    sieve::SieveConfig cfg;
    cfg.memory_budget = 1000;
    CHECK_THROWS_AS(sieve::build_lambda_table(1, 1000, cfg), quadprime::BudgetError);
    CHECK_NOTHROW(sieve::build_lambda_table(1, 100, cfg));
}

TEST_CASE("squarefree table") {
    const auto t = sieve::build_squarefree_table(12);
    std::vector<std::uint64_t> set;
    for (std::uint64_t k = 1; k <= 12; ++k)
        if (t[k])
            set.push_back(k);
    CHECK(set == std::vector<std::uint64_t>{1, 2, 3, 5, 6, 7, 10, 11});
    CHECK_FALSE(t[4]);
    CHECK(t.count() == 8);

    const auto big = sieve::build_squarefree_table(1'000'000);
    std::uint64_t brute = 0;
    for (std::uint64_t k = 1; k <= 100'000; ++k)
        brute += oracle::squarefree(k);
    const auto mid = sieve::build_squarefree_table(100'000);
    CHECK(mid.count() == brute);
    const double expected = 6.0 / (M_PI * M_PI) * 1e6;
    CHECK(std::fabs(static_cast<double>(big.count()) - expected) <= 1e-3 * expected);
}

TEST_CASE("mobius and phi tables") {
    const auto t = sieve::build_mobius_phi_tables(100'000);
    CHECK(t.limit() == 100'000);
    CHECK(t.mu[1] == 1);
    CHECK(t.phi[1] == 1);
    CHECK(t.mu[30] == -1);
    CHECK(t.phi[30] == 8);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t n = 1 + rng() % 100'000;
        const auto mp = quadprime::arith::mobius_phi(n);
        REQUIRE(t.mu[n] == mp.mu);
        REQUIRE(t.phi[n] == mp.phi);
    }
    const auto sf = sieve::build_squarefree_table(100'000);
    for (std::uint64_t n = 1; n <= 100'000; ++n)
        REQUIRE(sf[n] == (t.mu[n] != 0));
}

TEST_CASE("lambda cache round trip") {
    const auto path = temp_file("quadprime_test_cache.bin");
    const auto t = sieve::build_lambda_table(17, 5000);
    sieve::save_lambda_table(path, t);
    CHECK(std::filesystem::file_size(path) == 24 + 8 * t.size());
    CHECK(sieve::load_lambda_table(path) == t);

    sieve::SieveConfig tight;
    tight.memory_budget = 100;
    CHECK_THROWS_AS(sieve::load_lambda_table(path, tight), quadprime::BudgetError);

    std::filesystem::resize_file(path, 24 + 8 * t.size() - 3);
    CHECK_THROWS_AS(sieve::load_lambda_table(path), quadprime::CacheFormatError);
    {
        std::ofstream bad(path, std::ios::binary);
        bad << "XXXX0000000000000000000000000000";
    }
    CHECK_THROWS_AS(sieve::load_lambda_table(path), quadprime::CacheFormatError);
    std::filesystem::remove(path);
    CHECK_THROWS(sieve::load_lambda_table(path));
}
