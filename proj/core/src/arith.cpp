#include "quadprime/arith.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace quadprime::arith {

namespace {

constexpr std::array<std::uint64_t, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                       43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

bool strong_probable_prime(std::uint64_t n, std::uint64_t base) noexcept {
    base %= n;
    if (base == 0)
        return true;
    std::uint64_t d = n - 1;
    const int s = std::countr_zero(d);
    d >>= s;
    std::uint64_t x = pow_mod(base, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (int r = 1; r < s; ++r) {
        x = mul_mod(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

// Pollard-Brent rho; n is composite, odd, and has no factor below 100.
std::uint64_t find_factor(std::uint64_t n) {
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        const std::uint64_t m = 128;
        std::uint64_t r = 1;
        auto f = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i)
                y = f(y);
            std::uint64_t k = 0;
            do {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const std::uint64_t d = find_factor(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

// base^exp, capped at 2^64 (one past the largest uint64).
unsigned __int128 checked_pow(std::uint64_t base, unsigned exp) noexcept {
    constexpr unsigned __int128 cap = static_cast<unsigned __int128>(1) << 64;
    unsigned __int128 result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        result *= base;
        if (result >= cap)
            return cap;
    }
    return result;
}

}  // namespace

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept {
    while (b != 0) {
        const std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1)
            result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

SymbolValue jacobi(std::int64_t a, std::int64_t n) {
    if (n <= 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi: modulus must be odd and positive, got " + std::to_string(n));
    const auto un = static_cast<std::uint64_t>(n);
    std::uint64_t ua;
    if (a >= 0) {
        ua = static_cast<std::uint64_t>(a) % un;
    } else {
        // -(a) computed in unsigned arithmetic to survive INT64_MIN.
        const std::uint64_t neg = (~static_cast<std::uint64_t>(a) + 1) % un;
        ua = neg == 0 ? 0 : un - neg;
    }
    std::uint64_t m = un;
    int result = 1;
    while (ua != 0) {
        const int twos = std::countr_zero(ua);
        ua >>= twos;
        if ((twos & 1) && (m % 8 == 3 || m % 8 == 5))
            result = -result;
        if (ua % 4 == 3 && m % 4 == 3)
            result = -result;
        std::swap(ua, m);
        ua %= m;
    }
    return SymbolValue(m == 1 ? result : 0);
}

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2)
        return false;
    for (const std::uint64_t p : kSmallPrimes) {
        if (n % p == 0)
            return n == p;
    }
    if (n < 97 * 97)
        return true;
    // Bases proven sufficient for all n < 2^64 (Jim Sinclair).
    for (const std::uint64_t base : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        if (!strong_probable_prime(n, base))
            return false;
    }
    return true;
}

std::uint64_t integer_root(std::uint64_t n, unsigned k) noexcept {
    if (k <= 1 || n <= 1)
        return n;
    if (k >= 64)
        return 1;
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
    while (r > 0 && checked_pow(r, k) > n)
        --r;
    while (checked_pow(r + 1, k) <= n)
        ++r;
    return r;
}

std::pair<std::uint64_t, unsigned> perfect_power(std::uint64_t n) noexcept {
    for (unsigned k = 63; k >= 2; --k) {
        const std::uint64_t r = integer_root(n, k);
        if (r >= 2 && checked_pow(r, k) == n)
            return {r, k};
    }
    return {n, 1};
}

std::vector<PrimePower> factorize(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::uint64_t> primes;
    for (const std::uint64_t p : kSmallPrimes) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    factor_into(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<PrimePower> out;
    for (const std::uint64_t p : primes) {
        if (!out.empty() && out.back().prime == p)
            ++out.back().exponent;
        else
            out.push_back({p, 1});
    }
    return out;
}

double von_mangoldt(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("von_mangoldt: n must be positive");
    if (n == 1)
        return 0.0;
    const auto [base, exp] = perfect_power(n);
    (void)exp;
    return is_prime(base) ? std::log(static_cast<double>(base)) : 0.0;
}

MobiusPhi mobius_phi(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("mobius_phi: n must be positive");
    int mu = 1;
    std::uint64_t phi = 1;
    for (const auto& [p, e] : factorize(n)) {
        mu = e > 1 ? 0 : -mu;
        phi *= (p - 1) * static_cast<std::uint64_t>(checked_pow(p, e - 1));
    }
    return {mu, phi};
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out{1};
    for (const auto& [p, e] : factorize(n)) {
        const std::size_t count = out.size();
        std::uint64_t pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < count; ++j)
                out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_squarefree(std::uint64_t n) {
    if (n == 0)
        return false;
    for (const auto& pe : factorize(n)) {
        if (pe.exponent > 1)
            return false;
    }
    return true;
}

}  // namespace quadprime::arith
