#include "checks.hpp"

#include "quadprime/arith.hpp"
#include "quadprime/characters.hpp"
#include "quadprime/expsum.hpp"
#include "quadprime/sieve.hpp"
#include "quadprime/singular.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace quadprime::cli {

namespace {

void record(CheckReport& report, bool ok, double measure, const std::string& what) {
    ++report.cases;
    report.worst = std::max(report.worst, measure);
    if (!ok && report.pass) {
        report.pass = false;
        report.detail = what;
    }
}

// First, middle and last unit mod q.
std::vector<std::uint64_t> sample_units(std::uint64_t q) {
    std::vector<std::uint64_t> units;
    for (std::uint64_t a = 0; a < q; ++a) {
        if (arith::gcd(a, q) == 1)
            units.push_back(a);
    }
    std::vector<std::uint64_t> out{units.front(), units[units.size() / 2], units.back()};
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

CheckReport check_weyl(std::uint64_t seed) {
    CheckReport report;
    const double limit = 1.05 * expsum::kWeylCalibrationConstant;
    const double value = expsum::weyl_grid_max(seed);
    record(report, value <= limit, value, fmt::format("grid max {} exceeds {}", value, limit));
    report.cases = 150;
    return report;
}

CheckReport check_pv(std::uint64_t qmax) {
    if (qmax < 2)
        throw std::invalid_argument("check pv: qmax must be at least 2");
    CheckReport report;
    for (std::uint64_t q = 2; q <= qmax; ++q) {
        const auto r = expsum::pv_check(q, std::max(qmax, characters::kDefaultModulusCeiling));
        record(report, r.pass, r.max_sum / r.bound,
               fmt::format("q = {}: max window sum {} > {}", q, r.max_sum, r.bound));
    }
    return report;
}

CheckReport check_decompose(std::uint64_t qmax) {
    if (qmax == 0)
        throw std::invalid_argument("check decompose: qmax must be positive");
    CheckReport report;
    constexpr std::uint64_t xs[] = {10, 100};
    constexpr std::uint64_t zs[] = {10, 100, 1000};
    constexpr double betas[] = {0.0, 1e-4, -1e-4};
    const auto lambda = sieve::build_lambda_table(1, 1000);
    for (std::uint64_t q = 1; q <= qmax; ++q) {
        for (const std::uint64_t a : sample_units(q)) {
            for (const double beta : betas) {
                const auto arc = expsum::ArcPoint::make(a, q, beta);
                for (const std::uint64_t x : xs) {
                    const auto d = expsum::decompose_s2(arc, x, std::max(qmax, characters::kDefaultModulusCeiling));
                    const double err = std::abs(d.t2 + d.e2 - expsum::s2(arc, x));
                    const double tol = 1e-8 * static_cast<double>(x);
                    record(report, err <= tol, err / tol,
                           fmt::format("S2 a/q = {}/{}, beta = {}, x = {}: error {}", a, q, beta, x, err));
                }
                for (const std::uint64_t z : zs) {
                    const auto d = expsum::decompose_s1(arc, z, lambda, std::max(qmax, characters::kDefaultModulusCeiling));
                    const double err = std::abs(d.t1 + d.e1 + d.r - expsum::s1(arc, z, lambda));
                    const double tol = 1e-8 * static_cast<double>(z);
                    record(report, err <= tol, err / tol,
                           fmt::format("S1 a/q = {}/{}, beta = {}, z = {}: error {}", a, q, beta, z, err));
                    const double lz = std::log(static_cast<double>(z));
                    const double rbound = lz * lz + 1.0;
                    record(report, std::abs(d.r) <= rbound, std::abs(d.r) / rbound,
                           fmt::format("R a/q = {}/{}, beta = {}, z = {}: |R| = {} > {}", a, q, beta, z,
                                       std::abs(d.r), rbound));
                }
            }
        }
    }
    return report;
}

CheckReport check_gauss(std::uint64_t qmax) {
    if (qmax == 0)
        throw std::invalid_argument("check gauss: qmax must be positive");
    CheckReport report;
    for (std::uint64_t q = 1; q <= qmax; ++q) {
        const auto table = characters::build_character_table(q, std::max(qmax, characters::kDefaultModulusCeiling));
        const double root = std::sqrt(static_cast<double>(q));
        for (const auto& chi : table) {
            if (!chi.is_primitive())
                continue;
            const double err = std::abs(std::abs(characters::gauss_sum(chi)) - root);
            record(report, err <= 1e-9, err / 1e-9, fmt::format("|tau(chi)| mod {}: error {}", q, err));
        }
        if (q % 2 == 0 || !arith::is_squarefree(q))
            continue;
        for (std::uint64_t a = 1; a <= q; ++a) {
            if (arith::gcd(a, q) != 1)
                continue;
            characters::Complex sum{0.0, 0.0};
            for (const auto& chi : table) {
                if (chi.is_real())
                    sum += characters::gauss_sum_conj(chi) * chi(-static_cast<std::int64_t>(a));
            }
            const double err = std::abs(sum - expsum::g_quadratic(static_cast<std::int64_t>(a), q));
            record(report, err <= 1e-9, err / 1e-9,
                   fmt::format("quadratic sum a = {}, q = {}: error {}", a, q, err));
        }
    }
    return report;
}

CheckReport check_sandwich(std::uint64_t kmax, double tol) {
    if (kmax == 0 || !(tol > 0.0))
        throw std::invalid_argument("check sandwich: kmax and tol must be positive");
    CheckReport report;
    const auto sf = sieve::build_squarefree_table(kmax);
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        if (!sf[k])
            continue;
        const auto r = singular::sandwich_check(k, tol);
        const double excess = std::max(r.lower - r.product, r.product - r.upper);
        record(report, r.pass, std::max(0.0, excess),
               fmt::format("k = {}: product {} outside [{}, {}]", k, r.product, r.lower, r.upper));
    }
    return report;
}

}  // namespace quadprime::cli
