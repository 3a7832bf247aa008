#include "quadprime/singular.hpp"

#include "parallel.hpp"
#include "quadprime/arith.hpp"
#include "quadprime/errors.hpp"
#include "quadprime/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

namespace quadprime::singular {

namespace {

// Upper end of the sandwich, with margin; used for error budgeting only.
constexpr double kProductCeiling = 1.2338;

constexpr std::uint64_t kMaxCharacterPeriod = std::uint64_t{1} << 28;
constexpr std::uint64_t kMaxProductCutoff = 4'000'000'000ULL;

void require_positive(std::uint64_t v, const char* what) {
    if (v == 0)
        throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_tolerance(double tol, const char* what) {
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw std::invalid_argument(std::string(what) + ": tolerance must be positive and finite");
}

// (-k/p) for the primes of `primes`, through the periodic table when it is
// small enough to be worth building.
template <class Visit>
void for_each_symbol(std::uint64_t k, std::span<const std::uint64_t> primes, Visit&& visit) {
    if (4 * k <= kMaxCharacterPeriod && 4 * k <= 8 * primes.size() + 64) {
        const QuadraticCharacter chi(k);
        for (const std::uint64_t p : primes)
            visit(p, chi(p));
    } else {
        const auto minus_k = -static_cast<std::int64_t>(k);
        for (const std::uint64_t p : primes)
            visit(p, arith::jacobi(minus_k, static_cast<std::int64_t>(p)).value());
    }
}

std::span<const std::uint64_t> odd_primes_up_to(const sieve::PrimeTable& table, std::uint64_t P) {
    auto all = table.up_to(P);
    return all.empty() ? all : all.subspan(1);
}

}  // namespace

void SingularCfg::validate() const {
    if (euler_cutoff < 3)
        throw std::invalid_argument("SingularCfg: Euler cutoff P must be at least 3");
    require_tolerance(tol, "SingularCfg");
}

QuadraticCharacter::QuadraticCharacter(std::uint64_t k) : k_(k) {
    require_positive(k, "QuadraticCharacter: k");
    if (k > kMaxCharacterPeriod / 4)
        throw std::invalid_argument("QuadraticCharacter: k too large for a period table");
    const std::uint64_t period = 4 * k;
    values_.assign(period, 0);
    const auto minus_k = -static_cast<std::int64_t>(k);
    for (std::uint64_t r = 1; r < period; r += 2)
        values_[r] = static_cast<std::int8_t>(arith::jacobi(minus_k, static_cast<std::int64_t>(r)).value());
}

std::int64_t sigma_q(std::uint64_t q, std::uint64_t k) {
    require_positive(q, "sigma_q: q");
    require_positive(k, "sigma_q: k");
    // Inner sum over a is the Ramanujan sum c_q(k + r^2) = sum_{d | (q, k+r^2)} mu(q/d) d,
    // so Sigma(q) = q * sum_{d | q} mu(q/d) #{r mod d : r^2 = -k mod d}.
    std::int64_t total = 0;
    for (const std::uint64_t d : arith::divisors(q)) {
        const int mu = arith::mobius_phi(q / d).mu;
        if (mu == 0)
            continue;
        const std::uint64_t target = (d - k % d) % d;
        std::int64_t roots = 0;
        for (std::uint64_t r = 0; r < d; ++r) {
            if (arith::mul_mod(r, r, d) == target)
                ++roots;
        }
        total += mu * roots;
    }
    return static_cast<std::int64_t>(q) * total;
}

double singular_series_euler(std::uint64_t k, std::uint64_t P) {
    require_positive(k, "singular_series_euler: k");
    if (P < 3)
        throw std::invalid_argument("singular_series_euler: P must be at least 3");
    const auto table = sieve::shared_primes(P);
    double product = 1.0;
    for_each_symbol(k, odd_primes_up_to(*table, P), [&](std::uint64_t p, int chi) { product *= euler_factor(chi, p); });
    return product;
}

std::vector<double> singular_series_euler_range(std::uint64_t k_first, std::uint64_t k_last, std::uint64_t P,
                                                unsigned workers) {
    require_positive(k_first, "singular_series_euler_range: k");
    if (k_first > k_last)
        throw std::invalid_argument("singular_series_euler_range: inverted k range");
    if (P < 3)
        throw std::invalid_argument("singular_series_euler_range: P must be at least 3");

    constexpr std::size_t kBlock = std::size_t{1} << 15;
    const std::uint64_t count = k_last - k_first + 1;
    const auto table = sieve::shared_primes(P);
    const auto primes = odd_primes_up_to(*table, P);

    // Per-prime residue tables: symbol[r] = (-k/p) for every k = r mod p.
    const std::uint64_t table_limit = std::min<std::uint64_t>(kBlock, 1 << 14);
    std::vector<std::vector<std::int8_t>> symbol_by_residue;
    for (const std::uint64_t p : primes) {
        if (p > table_limit)
            break;
        std::vector<std::uint8_t> is_square(p, 0);
        for (std::uint64_t s = 1; s <= p / 2; ++s)
            is_square[s * s % p] = 1;
        std::vector<std::int8_t> symbol(p, 0);
        for (std::uint64_t r = 1; r < p; ++r)
            symbol[r] = is_square[p - r] ? 1 : -1;
        symbol_by_residue.push_back(std::move(symbol));
    }

    std::vector<double> out(count, 1.0);
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    detail::parallel_for(blocks, workers, [&](std::size_t b) {
        const std::uint64_t first = k_first + b * kBlock;
        const std::uint64_t len = std::min<std::uint64_t>(kBlock, k_last - first + 1);
        double* prod = out.data() + b * kBlock;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const std::uint64_t p = primes[i];
            const double factors[3] = {euler_factor(-1, p), euler_factor(0, p), euler_factor(1, p)};
            if (i < symbol_by_residue.size()) {
                const std::int8_t* symbol = symbol_by_residue[i].data();
                std::uint64_t r = first % p;
                for (std::uint64_t j = 0; j < len; ++j) {
                    prod[j] *= factors[symbol[r] + 1];
                    if (++r == p)
                        r = 0;
                }
            } else {
                for (std::uint64_t j = 0; j < len; ++j) {
                    const auto k = static_cast<std::int64_t>(first + j);
                    prod[j] *= factors[arith::jacobi(-k, static_cast<std::int64_t>(p)).value() + 1];
                }
            }
        }
    });
    return out;
}

LValueEstimate l_value_estimate(std::uint64_t k, double tol, std::uint64_t max_terms) {
    require_positive(k, "l_value: k");
    require_tolerance(tol, "l_value");
    const QuadraticCharacter chi(k);
    const std::uint64_t m = chi.period();

    // Partial sums A(n) over one period; A(m) = 0 because chi is non-principal.
    std::vector<double> partial(m + 1, 0.0);
    std::int64_t running = 0;
    for (std::uint64_t n = 1; n <= m; ++n) {
        running += chi(n);
        partial[n] = static_cast<double>(running);
    }
    if (running != 0)
        throw std::logic_error("l_value: character sum over a period is not zero");

    // Tail after N = J m, by partial summation twice:
    //   sum_{n>N} a_n/n = mean(A)/(N+1) + R,  |R| <= max_t |C(t)| / ((N+1)(N+2)),
    // where C(t) sums A(j) - mean(A) over j = 1..t.
    CompensatedSum mean_acc;
    for (std::uint64_t n = 1; n <= m; ++n)
        mean_acc += partial[n];
    const double mean = mean_acc.value() / static_cast<double>(m);
    double c = 0.0, c_max = 0.0;
    for (std::uint64_t n = 1; n <= m; ++n) {
        c += partial[n] - mean;
        c_max = std::max(c_max, std::fabs(c));
    }
    c_max += 1e-9 * static_cast<double>(m);  // rounding in the running sum above

    const double budget = 0.5 * tol;  // the other half covers floating-point summation
    const double needed = std::sqrt(c_max / budget);
    const double periods = std::max(1.0, std::ceil(needed / static_cast<double>(m)));
    if (periods * static_cast<double>(m) > static_cast<double>(max_terms))
        throw ConvergenceError("l_value: k = " + std::to_string(k) + " at tol " + std::to_string(tol) + " needs " +
                               std::to_string(periods * static_cast<double>(m)) + " terms, ceiling is " +
                               std::to_string(max_terms));
    const std::uint64_t N = static_cast<std::uint64_t>(periods) * m;

    CompensatedSum sum;
    const auto& a = chi.values();
    std::uint64_t r = 1;
    for (std::uint64_t n = 1; n <= N; n += 2) {
        if (a[r] != 0)
            sum += a[r] / static_cast<double>(n);
        r += 2;
        if (r >= m)
            r -= m;
    }
    const double Nd = static_cast<double>(N);
    const double value = sum.value() + mean / (Nd + 1.0);
    const double bound = c_max / ((Nd + 1.0) * (Nd + 2.0));
    if (!std::isfinite(value) || value == 0.0)
        throw ConvergenceError("l_value: degenerate value for k = " + std::to_string(k));
    return {value, bound, N};
}

double l_value(std::uint64_t k, double tol, std::uint64_t max_terms) {
    return l_value_estimate(k, tol, max_terms).value;
}

double product_tail_bound(std::uint64_t P) {
    if (P < 3)
        throw std::invalid_argument("product_tail_bound: P must be at least 3");
    // pi(t) < 1.25506 t / log t gives sum_{p>P} p^{-2} <= 2.51012 / (P log P);
    // 1/(p(p-2)) <= P/(P-2) * p^{-2} for p > P.
    const double Pd = static_cast<double>(P);
    return 2.51012 / (Pd * std::log(Pd)) * Pd / (Pd - 2.0);
}

std::uint64_t product_cutoff_for(double delta) {
    require_tolerance(delta, "product_cutoff_for");
    std::uint64_t hi = 4;
    while (product_tail_bound(hi) > delta) {
        if (hi > kMaxProductCutoff)
            throw ConvergenceError("product cutoff for tail " + std::to_string(delta) + " exceeds the ceiling");
        hi *= 2;
    }
    std::uint64_t lo = 3;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (product_tail_bound(mid) <= delta)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double singular_l_product(std::uint64_t k, std::uint64_t P) {
    require_positive(k, "singular_l_product: k");
    if (P < 3)
        throw std::invalid_argument("singular_l_product: P must be at least 3");
    const auto table = sieve::shared_primes(P);
    CompensatedSum log_sum;
    for_each_symbol(k, odd_primes_up_to(*table, P), [&](std::uint64_t p, int chi) {
        if (chi == 0)
            return;
        const double pd = static_cast<double>(p);
        // factor - 1 = -chi / (p^2 - p - (p-1) chi)
        log_sum += std::log1p(-chi / (pd * pd - pd - (pd - 1.0) * chi));
    });
    return std::exp(log_sum.value());
}

double singular_series_lmethod(std::uint64_t k, double tol) {
    require_positive(k, "singular_series_lmethod: k");
    require_tolerance(tol, "singular_series_lmethod");

    // A coarse L(k) gives a safe lower bound for the error budget.
    double coarse_tol = 1e-3;
    LValueEstimate coarse = l_value_estimate(k, coarse_tol);
    while (coarse.value - coarse_tol < 0.05 && coarse_tol > 1e-7) {
        coarse_tol *= 1e-2;
        coarse = l_value_estimate(k, coarse_tol);
    }
    const double l_floor = coarse.value - coarse_tol;
    if (!(l_floor > 0.0))
        throw ConvergenceError("singular_series_lmethod: cannot bound L(k) away from zero");

    // |P_N/L_hat - P/L| <= ceil*(e^delta - 1)/l_floor + ceil*eps_L/l_floor^2, each <= tol/2.
    const double eps_l = 0.9 * tol * l_floor * l_floor / (2.0 * kProductCeiling);
    const double delta = std::log1p(0.9 * tol * l_floor / (2.0 * kProductCeiling));
    const double L = l_value(k, eps_l);
    const double product = singular_l_product(k, product_cutoff_for(delta));
    return product / L;
}

double singular_series(std::uint64_t k, const SingularCfg& cfg) {
    cfg.validate();
    return cfg.method == Method::euler ? singular_series_euler(k, cfg.euler_cutoff)
                                       : singular_series_lmethod(k, cfg.tol);
}

double dirichlet_partial(std::uint64_t k, std::uint64_t Q, const sieve::MobiusPhiTables& tables) {
    require_positive(k, "dirichlet_partial: k");
    require_positive(Q, "dirichlet_partial: Q");
    if (tables.limit() < Q)
        throw CoverageError("dirichlet_partial: Mobius/phi tables end before Q");
    const auto minus_k = -static_cast<std::int64_t>(k);
    CompensatedSum sum;
    for (std::uint64_t q = 1; q <= Q; q += 2) {
        const int mu = tables.mu[q];
        if (mu == 0)
            continue;
        const int chi = arith::jacobi(minus_k, static_cast<std::int64_t>(q));
        if (chi != 0)
            sum += static_cast<double>(mu * chi) / static_cast<double>(tables.phi[q]);
    }
    return sum.value();
}

double dirichlet_partial(std::uint64_t k, std::uint64_t Q) {
    require_positive(Q, "dirichlet_partial: Q");
    return dirichlet_partial(k, Q, sieve::build_mobius_phi_tables(Q));
}

double tail_phi(std::uint64_t k, std::uint64_t Q1, double tol, const sieve::MobiusPhiTables& tables) {
    return singular_series_lmethod(k, tol) - dirichlet_partial(k, Q1, tables);
}

double tail_phi(std::uint64_t k, std::uint64_t Q1, double tol) {
    require_positive(Q1, "tail_phi: Q1");
    return tail_phi(k, Q1, tol, sieve::build_mobius_phi_tables(Q1));
}

SandwichBounds compute_sandwich_bounds(std::uint64_t cutoff) {
    if (cutoff < 3)
        throw std::invalid_argument("compute_sandwich_bounds: cutoff must be at least 3");
    CompensatedSum log_lower, log_upper;
    sieve::for_each_prime_segment(3, cutoff, [&](std::span<const std::uint64_t> primes) {
        for (const std::uint64_t p : primes) {
            const double pd = static_cast<double>(p);
            log_lower += std::log1p(-1.0 / ((pd - 1.0) * (pd - 1.0)));
            log_upper += -std::log1p(-1.0 / (pd * pd));
        }
    });
    return {std::exp(log_lower.value()), std::exp(log_upper.value()), product_tail_bound(cutoff), cutoff};
}

const SandwichBounds& sandwich_bounds() {
    static const SandwichBounds bounds = compute_sandwich_bounds(200'000'000);
    return bounds;
}

SandwichReport sandwich_check(std::uint64_t k, double tol) {
    require_positive(k, "sandwich_check: k");
    require_tolerance(tol, "sandwich_check");
    const auto& b = sandwich_bounds();
    const double product = singular_l_product(k, product_cutoff_for(std::log1p(0.1 * tol)));
    const double lower = b.lower;
    const double upper = b.upper;
    const bool pass = product >= lower * std::exp(-b.tail_bound) - tol && product <= upper * std::exp(b.tail_bound) + tol;
    return {product, lower, upper, pass};
}

}  // namespace quadprime::singular
