#pragma once

// Per-k error terms psi(x; k) - S(k) x, their second moment over squarefree
// k <= y, exceptional-set counts, and the second moment of the tail Phi(k).

#include "quadprime/sieve.hpp"
#include "quadprime/singular.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace quadprime::moments {

struct ErrorRecord {
    std::uint64_t k = 0;
    bool squarefree = false;
    double psi = 0.0;       // sum_{n<=x} Lambda(n^2 + k)
    double singular = 0.0;  // S(k)
    double error = 0.0;     // psi - singular * x

    friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

/// Threshold exponents B of the exceptional-set report: |E(k)| > x/(log x)^B.
inline constexpr std::array<double, 4> kThresholdExponents = {0.5, 1.0, 1.5, 2.0};

struct ExceptionalCount {
    double exponent;
    std::uint64_t count;
    friend bool operator==(const ExceptionalCount&, const ExceptionalCount&) = default;
};

struct MomentSummary {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::uint64_t count_squarefree = 0;
    double second_moment = 0.0;  // sum over squarefree k <= y of error^2
    double normalized = 0.0;     // second_moment / (y x^2)
    std::vector<ExceptionalCount> exceptional;

    friend bool operator==(const MomentSummary&, const MomentSummary&) = default;
};

struct SweepOptions {
    unsigned workers = 1;
    sieve::SieveConfig sieve;   // segment size and memory budget; workers taken from above
    double range_exponent = 2.0;  // A in x^2 / (log x)^A <= y <= x^2; only warns
};

struct SweepResult {
    MomentSummary summary;
    std::vector<ErrorRecord> records;   // every k in [1, y], squarefree or not
    std::vector<std::string> warnings;
};

/// One record, psi by direct lookup. `lambda` must cover [1, x^2 + k].
ErrorRecord error_record(std::uint64_t k, std::uint64_t x, const sieve::LambdaTable& lambda,
                         const singular::SingularCfg& cfg, const sieve::SquarefreeTable& sf);

/// psi(x; k) for every k in [1, y], from one Lambda table over [1, x^2 + y].
/// Result is independent of the worker count.
std::vector<double> psi_range(std::uint64_t x, std::uint64_t y, const sieve::LambdaTable& lambda,
                              unsigned workers = 1);

/// The full sweep: Lambda table once, psi and S(k) for every k <= y, moments
/// over the squarefree k accumulated in ascending k with compensated sums.
SweepResult moment_sweep(std::uint64_t x, std::uint64_t y, const singular::SingularCfg& cfg,
                         const SweepOptions& options = {});

/// Same, reusing a prebuilt table (which must cover [1, x^2 + y]).
SweepResult moment_sweep(std::uint64_t x, std::uint64_t y, const singular::SingularCfg& cfg,
                         const SweepOptions& options, const sieve::LambdaTable& lambda);

/// Squarefree records with |error| > x / (log x)^B.
std::uint64_t exceptional_count(const std::vector<ErrorRecord>& records, std::uint64_t x, double B);

/// sum over squarefree k <= y of tail_phi(k, Q1, tol)^2.
double phi_moment(std::uint64_t y, std::uint64_t Q1, double tol, unsigned workers = 1);

/// errors.csv: k,squarefree,psi,singular,error
void write_errors_csv(std::ostream& out, const std::vector<ErrorRecord>& records);

/// moments.csv: x,y,count_squarefree,second_moment,normalized,exc_B0.5,exc_B1,exc_B1.5,exc_B2
void write_moments_csv(std::ostream& out, const MomentSummary& summary);

/// Floating-point formatting used in every output file: 12 significant digits.
std::string format_real(double value);

}  // namespace quadprime::moments
