#pragma once

// Exact 64-bit integer arithmetic: quadratic residue symbols, primality,
// factorization and the pointwise multiplicative functions built on it.

#include <cstdint>
#include <utility>
#include <vector>

namespace quadprime::arith {

/// Value of a Legendre/Jacobi symbol; always -1, 0 or +1.
class SymbolValue {
public:
    constexpr SymbolValue() noexcept = default;
    constexpr explicit SymbolValue(int v) noexcept : value_(static_cast<std::int8_t>(v > 0 ? 1 : (v < 0 ? -1 : 0))) {}

    constexpr int value() const noexcept { return value_; }
    constexpr operator int() const noexcept { return value_; }

    friend constexpr SymbolValue operator*(SymbolValue a, SymbolValue b) noexcept {
        return SymbolValue(a.value_ * b.value_);
    }

private:
    std::int8_t value_ = 0;
};

/// Jacobi symbol (a/n) for odd n >= 1. Throws std::invalid_argument on even
/// or non-positive n; the Kronecker extension is deliberately not provided.
SymbolValue jacobi(std::int64_t a, std::int64_t n);

/// Deterministic for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept;
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept;

/// floor(n^(1/k)) computed exactly, k >= 1.
std::uint64_t integer_root(std::uint64_t n, unsigned k) noexcept;

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
};

/// Prime factorization in ascending prime order; empty for n = 1.
/// Trial division by small primes, Pollard-Brent rho for the rest.
std::vector<PrimePower> factorize(std::uint64_t n);

/// Writes n = base^exp with the largest possible exp (so base is not itself
/// a perfect power). n >= 2.
std::pair<std::uint64_t, unsigned> perfect_power(std::uint64_t n) noexcept;

/// Lambda(n) on the natural-log scale. Throws on n = 0.
double von_mangoldt(std::uint64_t n);

struct MobiusPhi {
    int mu;
    std::uint64_t phi;
};

/// (mu(n), phi(n)) by factorization. Throws on n = 0.
MobiusPhi mobius_phi(std::uint64_t n);

/// Positive divisors in ascending order.
std::vector<std::uint64_t> divisors(std::uint64_t n);

bool is_squarefree(std::uint64_t n);

}  // namespace quadprime::arith
