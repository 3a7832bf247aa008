#include "quadprime/sieve.hpp"

#include "parallel.hpp"
#include "quadprime/arith.hpp"
#include "quadprime/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace quadprime::sieve {

namespace {

// Plain byte sieve, used for base primes up to sqrt of a range end.
std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2)
        return out;
    std::vector<std::uint8_t> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i)
            composite[j] = 1;
    }
    return out;
}

std::size_t segment_length(const SieveConfig& cfg) {
    if (cfg.segment_size == 0)
        throw std::invalid_argument("sieve: segment size must be positive");
    return cfg.segment_size;
}

void build_lambda_segment(std::uint64_t seg_lo, std::uint64_t seg_hi, std::span<const std::uint64_t> base,
                          std::span<double> out, std::vector<std::uint8_t>& composite) {
    const std::size_t len = seg_hi - seg_lo + 1;
    composite.assign(len, 0);
    for (const std::uint64_t p : base) {
        if (p * p > seg_hi)
            break;
        std::uint64_t start = std::max(p * p, (seg_lo + p - 1) / p * p);
        for (std::uint64_t j = start; j <= seg_hi; j += p)
            composite[j - seg_lo] = 1;
    }
    for (std::size_t i = 0; i < len; ++i) {
        const std::uint64_t m = seg_lo + i;
        out[i] = (m >= 2 && !composite[i]) ? std::log(static_cast<double>(m)) : 0.0;
    }
    for (const std::uint64_t p : base) {
        if (p * p > seg_hi)
            break;
        const double log_p = std::log(static_cast<double>(p));
        for (std::uint64_t pw = p * p;; pw *= p) {
            if (pw >= seg_lo)
                out[pw - seg_lo] = log_p;
            if (pw > seg_hi / p)
                break;
        }
    }
}

}  // namespace

void require_budget(std::uint64_t bytes, const SieveConfig& cfg, const char* what) {
    if (bytes > cfg.memory_budget)
        throw BudgetError(std::string(what) + ": needs " + std::to_string(bytes) + " bytes, budget is " +
                          std::to_string(cfg.memory_budget));
}

std::span<const std::uint64_t> PrimeTable::up_to(std::uint64_t bound) const noexcept {
    const auto it = std::upper_bound(primes_.begin(), primes_.end(), bound);
    return {primes_.data(), static_cast<std::size_t>(it - primes_.begin())};
}

void for_each_prime_segment(std::uint64_t lo, std::uint64_t hi,
                            const std::function<void(std::span<const std::uint64_t>)>& visit,
                            const SieveConfig& cfg) {
    if (lo > hi)
        throw std::invalid_argument("for_each_prime_segment: inverted range");
    const std::size_t seg = segment_length(cfg);
    const auto base = small_primes(arith::integer_root(hi, 2));
    std::vector<std::uint64_t> found;
    if (lo <= 2 && hi >= 2) {
        found.push_back(2);
        visit(found);
    }
    std::uint64_t start = std::max<std::uint64_t>(3, lo | 1);
    std::vector<std::uint8_t> composite;
    // Each segment holds `seg` consecutive odd numbers start, start+2, ...
    while (start <= hi) {
        const std::uint64_t last = std::min(hi, start + 2 * (seg - 1));
        const std::size_t len = (last - start) / 2 + 1;
        composite.assign(len, 0);
        for (std::size_t b = 1; b < base.size(); ++b) {
            const std::uint64_t p = base[b];
            if (p * p > last)
                break;
            std::uint64_t m = std::max(p * p, (start + p - 1) / p * p);
            if (m % 2 == 0)
                m += p;
            for (std::uint64_t j = (m - start) / 2; j < len; j += p)
                composite[j] = 1;
        }
        found.clear();
        for (std::size_t i = 0; i < len; ++i) {
            if (!composite[i])
                found.push_back(start + 2 * i);
        }
        if (!found.empty())
            visit(found);
        if (last >= hi)
            break;
        start = last + 2;
    }
}

PrimeTable build_prime_table(std::uint64_t limit, const SieveConfig& cfg) {
    if (limit < 2)
        throw std::invalid_argument("build_prime_table: limit must be at least 2");
    const double estimate = 1.26 * static_cast<double>(limit) / std::log(static_cast<double>(limit)) + 16.0;
    require_budget(static_cast<std::uint64_t>(estimate * sizeof(std::uint64_t)) + segment_length(cfg), cfg,
                   "build_prime_table");
    std::vector<std::uint64_t> primes;
    primes.reserve(static_cast<std::size_t>(estimate));
    for_each_prime_segment(
        2, limit, [&](std::span<const std::uint64_t> seg) { primes.insert(primes.end(), seg.begin(), seg.end()); },
        cfg);
    return PrimeTable(limit, std::move(primes));
}

std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t limit) {
    static std::mutex mutex;
    static std::shared_ptr<const PrimeTable> table;
    std::lock_guard lock(mutex);
    if (!table || table->limit() < limit) {
        const std::uint64_t current = table ? table->limit() : 0;
        const std::uint64_t target = std::max({limit, 2 * current, std::uint64_t{1} << 16});
        table = std::make_shared<const PrimeTable>(build_prime_table(target));
    }
    return table;
}

void LambdaTable::require_coverage(std::uint64_t from, std::uint64_t to) const {
    if (!covers(from, to))
        throw CoverageError("Lambda table [" + std::to_string(lo_) + ", " + std::to_string(hi()) +
                            "] does not cover [" + std::to_string(from) + ", " + std::to_string(to) + "]");
}

LambdaTable build_lambda_table(std::uint64_t lo, std::uint64_t hi, const SieveConfig& cfg) {
    if (lo == 0 || lo > hi)
        throw std::invalid_argument("build_lambda_table: need 1 <= lo <= hi");
    const std::uint64_t count = hi - lo + 1;
    const std::size_t seg = segment_length(cfg);
    if (count > cfg.memory_budget / sizeof(double))
        throw BudgetError("build_lambda_table: " + std::to_string(count) + " entries exceed the memory budget of " +
                          std::to_string(cfg.memory_budget) + " bytes");
    require_budget(count * sizeof(double) + std::uint64_t{cfg.workers} * std::min<std::uint64_t>(seg, count), cfg,
                   "build_lambda_table");

    const auto base = small_primes(arith::integer_root(hi, 2));
    std::vector<double> values(count);
    const std::size_t segments = (count + seg - 1) / seg;
    detail::parallel_for(segments, cfg.workers, [&](std::size_t s) {
        thread_local std::vector<std::uint8_t> composite;
        const std::uint64_t seg_lo = lo + s * seg;
        const std::uint64_t seg_hi = std::min(hi, seg_lo + seg - 1);
        build_lambda_segment(seg_lo, seg_hi, base, std::span<double>(values).subspan(s * seg, seg_hi - seg_lo + 1),
                             composite);
    });
    return LambdaTable(lo, std::move(values));
}

std::uint64_t SquarefreeTable::count() const noexcept {
    return static_cast<std::uint64_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

SquarefreeTable build_squarefree_table(std::uint64_t limit, const SieveConfig& cfg) {
    if (limit == 0)
        throw std::invalid_argument("build_squarefree_table: limit must be positive");
    require_budget(limit + 1, cfg, "build_squarefree_table");
    std::vector<std::uint8_t> flags(limit + 1, 1);
    flags[0] = 0;
    for (const std::uint64_t p : small_primes(arith::integer_root(limit, 2))) {
        const std::uint64_t sq = p * p;
        for (std::uint64_t j = sq; j <= limit; j += sq)
            flags[j] = 0;
    }
    return SquarefreeTable(limit, std::move(flags));
}

MobiusPhiTables build_mobius_phi_tables(std::uint64_t limit, const SieveConfig& cfg) {
    if (limit == 0)
        throw std::invalid_argument("build_mobius_phi_tables: limit must be positive");
    require_budget((limit + 1) * (sizeof(std::int8_t) + sizeof(std::uint64_t)) + limit / 2, cfg,
                   "build_mobius_phi_tables");
    MobiusPhiTables t;
    t.mu.assign(limit + 1, 0);
    t.phi.assign(limit + 1, 0);
    t.mu[1] = 1;
    t.phi[1] = 1;
    std::vector<std::uint64_t> primes;
    // Linear sieve: each composite is reached once, through its least prime.
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.phi[i] == 0) {
            primes.push_back(i);
            t.mu[i] = -1;
            t.phi[i] = i - 1;
        }
        for (const std::uint64_t p : primes) {
            const std::uint64_t ip = i * p;
            if (ip > limit)
                break;
            if (i % p == 0) {
                t.mu[ip] = 0;
                t.phi[ip] = t.phi[i] * p;
                break;
            }
            t.mu[ip] = static_cast<std::int8_t>(-t.mu[i]);
            t.phi[ip] = t.phi[i] * (p - 1);
        }
    }
    return t;
}

}  // namespace quadprime::sieve
