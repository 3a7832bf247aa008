#pragma once

// Bulk tables over integer ranges: primes, von Mangoldt values, squarefree
// flags and Mobius/Euler-phi arrays.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace quadprime::sieve {

inline constexpr std::size_t kDefaultSegmentSize = std::size_t{1} << 20;
inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{2} << 30;

struct SieveConfig {
    std::size_t segment_size = kDefaultSegmentSize;
    std::uint64_t memory_budget = kDefaultMemoryBudget;  // bytes
    unsigned workers = 1;
};

/// Throws BudgetError when `bytes` exceeds cfg.memory_budget.
void require_budget(std::uint64_t bytes, const SieveConfig& cfg, const char* what);

class PrimeTable {
public:
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
        : limit_(limit), primes_(std::move(primes)) {}

    std::uint64_t limit() const noexcept { return limit_; }
    std::span<const std::uint64_t> primes() const noexcept { return primes_; }
    std::size_t size() const noexcept { return primes_.size(); }
    std::uint64_t operator[](std::size_t i) const noexcept { return primes_[i]; }

    auto begin() const noexcept { return primes_.begin(); }
    auto end() const noexcept { return primes_.end(); }

    /// Primes <= bound, as a prefix view.
    std::span<const std::uint64_t> up_to(std::uint64_t bound) const noexcept;

private:
    std::uint64_t limit_;
    std::vector<std::uint64_t> primes_;
};

PrimeTable build_prime_table(std::uint64_t limit, const SieveConfig& cfg = {});

/// A process-wide prime table covering at least `limit`. Grows on demand;
/// returned tables are immutable and safe to share between threads.
std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t limit);

/// Streams the primes of [lo, hi] in ascending order, one segment per call.
void for_each_prime_segment(std::uint64_t lo, std::uint64_t hi,
                            const std::function<void(std::span<const std::uint64_t>)>& visit,
                            const SieveConfig& cfg = {});

/// values[i] = Lambda(lo + i) for lo <= lo + i <= hi.
class LambdaTable {
public:
    LambdaTable(std::uint64_t lo, std::vector<double> values) : lo_(lo), values_(std::move(values)) {}

    std::uint64_t lo() const noexcept { return lo_; }
    std::uint64_t hi() const noexcept { return lo_ + values_.size() - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    bool covers(std::uint64_t from, std::uint64_t to) const noexcept {
        return !values_.empty() && from >= lo_ && to <= hi() && from <= to;
    }

    /// Lambda(m); m must lie in [lo, hi].
    double operator()(std::uint64_t m) const noexcept { return values_[m - lo_]; }

    /// Throws CoverageError unless [from, to] lies inside the table.
    void require_coverage(std::uint64_t from, std::uint64_t to) const;

    friend bool operator==(const LambdaTable&, const LambdaTable&) = default;

private:
    std::uint64_t lo_;
    std::vector<double> values_;
};

/// Segmented build; output is byte-identical for any worker count or
/// segment size.
LambdaTable build_lambda_table(std::uint64_t lo, std::uint64_t hi, const SieveConfig& cfg = {});

class SquarefreeTable {
public:
    SquarefreeTable(std::uint64_t limit, std::vector<std::uint8_t> flags)
        : limit_(limit), flags_(std::move(flags)) {}

    std::uint64_t limit() const noexcept { return limit_; }
    bool operator[](std::uint64_t k) const noexcept { return flags_[k] != 0; }
    std::uint64_t count() const noexcept;

private:
    std::uint64_t limit_;
    std::vector<std::uint8_t> flags_;  // index 0 unused (false)
};

SquarefreeTable build_squarefree_table(std::uint64_t limit, const SieveConfig& cfg = {});

struct MobiusPhiTables {
    std::vector<std::int8_t> mu;    // mu[0] unused
    std::vector<std::uint64_t> phi; // phi[0] unused
    std::uint64_t limit() const noexcept { return mu.empty() ? 0 : mu.size() - 1; }
};

MobiusPhiTables build_mobius_phi_tables(std::uint64_t limit, const SieveConfig& cfg = {});

// Binary table cache. Layout, all little-endian:
//   offset 0   char[4]  magic "QPTB"
//   offset 4   u32      version (currently 1)
//   offset 8   u64      lo
//   offset 16  u64      hi
//   offset 24  f64[hi - lo + 1]  Lambda(lo), ..., Lambda(hi) as IEEE-754 binary64
inline constexpr std::uint32_t kCacheVersion = 1;

void save_lambda_table(const std::filesystem::path& path, const LambdaTable& table);
LambdaTable load_lambda_table(const std::filesystem::path& path, const SieveConfig& cfg = {});

}  // namespace quadprime::sieve
