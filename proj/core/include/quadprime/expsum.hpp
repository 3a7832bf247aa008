#pragma once

// Exponential sums on the circle: S1 over von Mangoldt weights, the
// quadratic Weyl sum S2, their exact major-arc decompositions, the finite
// circle integral for psi(x; k), and empirical Weyl / Polya-Vinogradov checks.

#include "quadprime/characters.hpp"
#include "quadprime/sieve.hpp"

#include <complex>
#include <cstdint>

namespace quadprime::expsum {

using Complex = std::complex<double>;

/// exp(2 pi i theta), with theta reduced mod 1 first. Multiples of 1/8 are exact.
Complex e_of(double theta);

/// e(num / den) with the reduction done in integers.
Complex e_rational(std::int64_t num, std::uint64_t den);

/// alpha = a/q + beta with gcd(a, q) = 1 and 0 <= a < q (a = 0 only for q = 1).
struct ArcPoint {
    std::uint64_t a = 0;
    std::uint64_t q = 1;
    double beta = 0.0;

    /// Validating constructor; throws std::invalid_argument.
    static ArcPoint make(std::uint64_t a, std::uint64_t q, double beta);
    void validate() const;
    double alpha() const noexcept { return static_cast<double>(a) / static_cast<double>(q) + beta; }
};

/// S1(theta) = sum_{m<=z} Lambda(m) e(theta m).
Complex s1(double theta, std::uint64_t z, const sieve::LambdaTable& lambda);
/// Same sum with the rational part of the phase reduced exactly.
Complex s1(const ArcPoint& arc, std::uint64_t z, const sieve::LambdaTable& lambda);

/// S2(theta) = sum_{n<=x} e(-theta n^2). Note the minus sign.
Complex s2(double theta, std::uint64_t x);
Complex s2(const ArcPoint& arc, std::uint64_t x);

/// G(a, q) = sum_{l<=q, (l,q)=1} e(-a l^2 / q); requires gcd(a, q) = 1.
Complex g_quadratic(std::int64_t a, std::uint64_t q);

struct S2Decomposition {
    Complex t2;  // real-character (chi^2 = chi_0) part, in closed quadratic-sum form
    Complex e2;  // chi^2 != chi_0 part
};

/// T2 + E2 reassembles S2(a/q + beta) over n <= x.
S2Decomposition decompose_s2(const ArcPoint& arc, std::uint64_t x,
                             std::uint64_t ceiling = characters::kDefaultModulusCeiling);

struct S1Decomposition {
    Complex t1;  // mu(q)/phi(q) sum_{m<=z} e(beta m)
    Complex e1;  // character expansion with the principal term recentred
    Complex r;   // sum over gcd(m, q) > 1, the only part not seen by the characters
};

/// T1 + E1 + R reassembles S1(a/q + beta) over m <= z.
S1Decomposition decompose_s1(const ArcPoint& arc, std::uint64_t z, const sieve::LambdaTable& lambda,
                             std::uint64_t ceiling = characters::kDefaultModulusCeiling);

inline constexpr std::uint64_t kDefaultCircleSamples = std::uint64_t{1} << 22;

/// psi(x; k) = sum_{n<=x} Lambda(n^2 + k) recovered from the circle integral
/// of S1 S2 e(-alpha k), sampled on N equally spaced points. N exceeds the
/// frequency span, so the quadrature is exact. Requires k <= y.
double circle_psi_oracle(std::uint64_t x, std::uint64_t k, std::uint64_t y, const sieve::LambdaTable& lambda,
                         std::uint64_t max_samples = kDefaultCircleSamples);

/// |S2(alpha)| / (log x (x q^{-1/2} + (q x)^{1/2})) for |beta| <= 1/q^2.
double weyl_ratio(const ArcPoint& arc, std::uint64_t x);

/// Maximum weyl_ratio over the seeded grid: x in {1e2, 1e3, 1e4}, 50 random
/// (a, q, beta) per x with q <= x and |beta| <= 1/q^2.
double weyl_grid_max(std::uint64_t seed = 0);

/// Recorded value of weyl_grid_max(0).
inline constexpr double kWeylCalibrationConstant = 0.086802719466705744;

struct PvReport {
    double max_sum;  // max over non-principal chi and windows of |sum chi(n)|
    double bound;    // 6 sqrt(q) log q
    bool pass;
};

/// Exhaustive window check of the Polya-Vinogradov bound for one modulus q >= 2.
PvReport pv_check(std::uint64_t q, std::uint64_t ceiling = characters::kDefaultModulusCeiling);

}  // namespace quadprime::expsum
