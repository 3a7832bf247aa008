#pragma once

// The singular series of n^2 + k and its relatives: the complete quadratic
// sum Sigma(q), truncated Euler products, the L-accelerated evaluation, the
// Dirichlet-series partial sums and tail, and the product sandwich bounds.

#include "quadprime/sieve.hpp"

#include <cstdint>
#include <vector>

namespace quadprime::singular {

enum class Method { euler, lmethod };

struct SingularCfg {
    Method method = Method::euler;
    std::uint64_t euler_cutoff = 10'000;  // P: primes 2 < p <= P enter the product
    double tol = 1e-6;                    // absolute accuracy for Method::lmethod

    /// Throws std::invalid_argument unless P >= 3 and tol > 0.
    void validate() const;
};

/// Default ceiling on the number of terms l_value may sum.
inline constexpr std::uint64_t kDefaultLTermCeiling = 100'000'000;

/// n -> (-k/n) on odd n and 0 on even n, stored over one period 4k.
/// This is the character behind L(k) and every (-k/p) in the Euler products.
class QuadraticCharacter {
public:
    explicit QuadraticCharacter(std::uint64_t k);

    std::uint64_t k() const noexcept { return k_; }
    std::uint64_t period() const noexcept { return values_.size(); }
    int operator()(std::uint64_t n) const noexcept { return values_[n % values_.size()]; }
    const std::vector<std::int8_t>& values() const noexcept { return values_; }

private:
    std::uint64_t k_;
    std::vector<std::int8_t> values_;
};

/// Sigma(q) = sum_{r mod q} sum_{a mod q, (a,q)=1} e(-a (k + r^2) / q), exactly.
std::int64_t sigma_q(std::uint64_t q, std::uint64_t k);

/// The Euler factor 1 - chi/(p-1); shared by every product routine so that
/// per-k and bulk evaluations agree bit for bit.
inline double euler_factor(int chi, std::uint64_t p) noexcept {
    return 1.0 - static_cast<double>(chi) / (static_cast<double>(p) - 1.0);
}

/// prod_{2<p<=P} (1 - (-k/p)/(p-1)).
double singular_series_euler(std::uint64_t k, std::uint64_t P);

/// singular_series_euler(k, P) for every k in [k_first, k_last], using
/// per-prime quadratic-residue tables. Bit-identical to the per-k routine and
/// independent of `workers`.
std::vector<double> singular_series_euler_range(std::uint64_t k_first, std::uint64_t k_last, std::uint64_t P,
                                                unsigned workers = 1);

struct LValueEstimate {
    double value;
    double error_bound;   // rigorous truncation bound
    std::uint64_t terms;  // N
};

/// L(k) = prod_{p>2} (1 - (-k/p)/p)^{-1} = sum_{n odd} (-k/n)/n, to absolute
/// accuracy tol. Throws ConvergenceError when more than `max_terms` terms
/// would be needed.
LValueEstimate l_value_estimate(std::uint64_t k, double tol, std::uint64_t max_terms = kDefaultLTermCeiling);

double l_value(std::uint64_t k, double tol, std::uint64_t max_terms = kDefaultLTermCeiling);

/// prod_{2<p<=P} (p^2 - p - p chi(p)) / (p^2 - p - (p-1) chi(p)), i.e. the
/// truncated S(k) L(k).
double singular_l_product(std::uint64_t k, std::uint64_t P);

/// Rigorous bound on sum_{p>P} 1/(p(p-2)), which dominates |log| of every
/// product tail used here (Rosser-Schoenfeld bound on pi(x)).
double product_tail_bound(std::uint64_t P);

/// Smallest cutoff P (>= 3) with product_tail_bound(P) <= delta.
std::uint64_t product_cutoff_for(double delta);

/// S(k) = singular_l_product / L(k) to absolute accuracy tol.
double singular_series_lmethod(std::uint64_t k, double tol);

/// S(k) according to cfg.
double singular_series(std::uint64_t k, const SingularCfg& cfg);

/// sum_{q<=Q, q odd} mu(q)/phi(q) (-k/q).
double dirichlet_partial(std::uint64_t k, std::uint64_t Q);
double dirichlet_partial(std::uint64_t k, std::uint64_t Q, const sieve::MobiusPhiTables& tables);

/// Phi(k) = S(k) - dirichlet_partial(k, Q1), with S(k) from the L method.
double tail_phi(std::uint64_t k, std::uint64_t Q1, double tol);
double tail_phi(std::uint64_t k, std::uint64_t Q1, double tol, const sieve::MobiusPhiTables& tables);

struct SandwichBounds {
    double lower;  // prod_{2<p<=cutoff} (1 - 1/(p-1)^2)
    double upper;  // prod_{2<p<=cutoff} p^2/(p^2-1)
    double tail_bound;  // |log| of either omitted tail is at most this
    std::uint64_t cutoff;
};

SandwichBounds compute_sandwich_bounds(std::uint64_t cutoff);

/// Bounds at cutoff 2e8, computed once per process (|error| < 1e-9).
const SandwichBounds& sandwich_bounds();

struct SandwichReport {
    double product;
    double lower;
    double upper;
    bool pass;
};

SandwichReport sandwich_check(std::uint64_t k, double tol);

}  // namespace quadprime::singular
