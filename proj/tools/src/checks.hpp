#pragma once

// Invariant suites runnable on their own from the command line.

#include <cstdint>
#include <string>

namespace quadprime::cli {

struct CheckReport {
    bool pass = true;
    std::uint64_t cases = 0;
    double worst = 0.0;   // largest observed violation measure, suite specific
    std::string detail;   // first failing case, if any
};

/// Max Weyl ratio over the seeded grid against 1.05 times the recorded constant.
CheckReport check_weyl(std::uint64_t seed);

/// Polya-Vinogradov window bound for every 2 <= q <= qmax.
CheckReport check_pv(std::uint64_t qmax);

/// S1 and S2 major-arc decompositions over q <= qmax, three a per q,
/// beta in {0, +-1e-4}, x in {10, 100}, z in {10, 100, 1000}.
CheckReport check_decompose(std::uint64_t qmax);

/// |tau(chi)| = sqrt(q) for primitive chi mod q <= qmax, and the real-character
/// quadratic-sum identity for odd squarefree q <= qmax.
CheckReport check_gauss(std::uint64_t qmax);

/// S(k) L(k) inside the sandwich bounds for squarefree k <= kmax.
CheckReport check_sandwich(std::uint64_t kmax, double tol);

}  // namespace quadprime::cli
