#include "quadprime/moments.hpp"

#include "parallel.hpp"
#include "quadprime/errors.hpp"
#include "quadprime/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace quadprime::moments {

namespace {

constexpr std::size_t kBlock = std::size_t{1} << 14;

void require_sweep_args(std::uint64_t x, std::uint64_t y) {
    if (x < 2)
        throw std::invalid_argument("moment_sweep: x must be at least 2");
    if (y == 0)
        throw std::invalid_argument("moment_sweep: y must be positive");
    if (x > (std::uint64_t{1} << 31))
        throw std::invalid_argument("moment_sweep: x too large");
}

std::vector<double> singular_values(std::uint64_t y, const singular::SingularCfg& cfg, unsigned workers) {
    if (cfg.method == singular::Method::euler)
        return singular::singular_series_euler_range(1, y, cfg.euler_cutoff, workers);
    std::vector<double> out(y);
    detail::parallel_for(y, workers, [&](std::size_t i) { out[i] = singular::singular_series_lmethod(i + 1, cfg.tol); });
    return out;
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

ErrorRecord error_record(std::uint64_t k, std::uint64_t x, const sieve::LambdaTable& lambda,
                         const singular::SingularCfg& cfg, const sieve::SquarefreeTable& sf) {
    if (k == 0 || x == 0)
        throw std::invalid_argument("error_record: k and x must be positive");
    if (k > sf.limit())
        throw CoverageError("error_record: squarefree table ends before k");
    lambda.require_coverage(1, x * x + k);
    double psi = 0.0;
    for (std::uint64_t n = 1; n <= x; ++n)
        psi += lambda(n * n + k);
    const double s = singular::singular_series(k, cfg);
    return {k, sf[k], psi, s, psi - s * static_cast<double>(x)};
}

std::vector<double> psi_range(std::uint64_t x, std::uint64_t y, const sieve::LambdaTable& lambda, unsigned workers) {
    if (x == 0 || y == 0)
        throw std::invalid_argument("psi_range: x and y must be positive");
    lambda.require_coverage(1, x * x + y);
    std::vector<double> psi(y, 0.0);
    const double* values = lambda.values().data();
    const std::uint64_t lo = lambda.lo();
    const std::size_t blocks = (y + kBlock - 1) / kBlock;
    // n outer, k inner: contiguous reads of Lambda(n^2 + k); each psi[k] still
    // receives its terms in ascending n.
    detail::parallel_for(blocks, workers, [&](std::size_t b) {
        const std::uint64_t first = 1 + b * kBlock;
        const std::uint64_t len = std::min<std::uint64_t>(kBlock, y - first + 1);
        double* out = psi.data() + (first - 1);
        for (std::uint64_t n = 1; n <= x; ++n) {
            const double* row = values + (n * n + first - lo);
            for (std::uint64_t j = 0; j < len; ++j)
                out[j] += row[j];
        }
    });
    return psi;
}

SweepResult moment_sweep(std::uint64_t x, std::uint64_t y, const singular::SingularCfg& cfg,
                         const SweepOptions& options) {
    require_sweep_args(x, y);
    cfg.validate();
    sieve::SieveConfig sc = options.sieve;
    sc.workers = options.workers;
    const std::uint64_t z = x * x + y;
    sieve::require_budget(z * sizeof(double) + y * (sizeof(ErrorRecord) + 2 * sizeof(double)), sc, "moment_sweep");
    return moment_sweep(x, y, cfg, options, sieve::build_lambda_table(1, z, sc));
}

SweepResult moment_sweep(std::uint64_t x, std::uint64_t y, const singular::SingularCfg& cfg,
                         const SweepOptions& options, const sieve::LambdaTable& lambda) {
    require_sweep_args(x, y);
    cfg.validate();
    sieve::SieveConfig sc = options.sieve;
    sc.workers = options.workers;
    sieve::require_budget(y * (sizeof(ErrorRecord) + 2 * sizeof(double)), sc, "moment_sweep");

    SweepResult result;
    const double xd = static_cast<double>(x);
    const double log_x = std::log(xd);
    if (y > x * x)
        result.warnings.push_back("y = " + std::to_string(y) + " exceeds x^2 = " + std::to_string(x * x));
    else if (static_cast<double>(y) < xd * xd / std::pow(log_x, options.range_exponent))
        result.warnings.push_back("y = " + std::to_string(y) + " is below x^2/(log x)^A with A = " +
                                  format_real(options.range_exponent));

    const auto psi = psi_range(x, y, lambda, options.workers);
    const auto singular = singular_values(y, cfg, options.workers);
    const auto sf = sieve::build_squarefree_table(y, sc);

    result.records.resize(y);
    CompensatedSum moment;
    std::uint64_t squarefree = 0;
    for (std::uint64_t k = 1; k <= y; ++k) {
        ErrorRecord& r = result.records[k - 1];
        r = {k, sf[k], psi[k - 1], singular[k - 1], psi[k - 1] - singular[k - 1] * xd};
        if (r.squarefree) {
            ++squarefree;
            moment += r.error * r.error;
        }
    }

    MomentSummary& s = result.summary;
    s.x = x;
    s.y = y;
    s.count_squarefree = squarefree;
    s.second_moment = moment.value();
    s.normalized = s.second_moment / (static_cast<double>(y) * xd * xd);
    for (const double B : kThresholdExponents)
        s.exceptional.push_back({B, exceptional_count(result.records, x, B)});
    return result;
}

std::uint64_t exceptional_count(const std::vector<ErrorRecord>& records, std::uint64_t x, double B) {
    if (x < 2)
        throw std::invalid_argument("exceptional_count: x must be at least 2");
    const double threshold = static_cast<double>(x) / std::pow(std::log(static_cast<double>(x)), B);
    std::uint64_t count = 0;
    for (const auto& r : records) {
        if (r.squarefree && std::fabs(r.error) > threshold)
            ++count;
    }
    return count;
}

double phi_moment(std::uint64_t y, std::uint64_t Q1, double tol, unsigned workers) {
    if (y == 0 || Q1 == 0)
        throw std::invalid_argument("phi_moment: y and Q1 must be positive");
    const auto tables = sieve::build_mobius_phi_tables(Q1);
    const auto sf = sieve::build_squarefree_table(y);
    std::vector<double> tail(y, 0.0);
    detail::parallel_for(y, workers, [&](std::size_t i) {
        const std::uint64_t k = i + 1;
        if (sf[k])
            tail[i] = singular::tail_phi(k, Q1, tol, tables);
    });
    CompensatedSum sum;
    for (std::uint64_t k = 1; k <= y; ++k) {
        if (sf[k])
            sum += tail[k - 1] * tail[k - 1];
    }
    return sum.value();
}

void write_errors_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
    out << "k,squarefree,psi,singular,error\n";
    for (const auto& r : records)
        out << r.k << ',' << (r.squarefree ? 1 : 0) << ',' << format_real(r.psi) << ',' << format_real(r.singular)
            << ',' << format_real(r.error) << '\n';
}

void write_moments_csv(std::ostream& out, const MomentSummary& s) {
    out << "x,y,count_squarefree,second_moment,normalized";
    for (const auto& e : s.exceptional)
        out << ",exc_B" << format_real(e.exponent);
    out << '\n';
    out << s.x << ',' << s.y << ',' << s.count_squarefree << ',' << format_real(s.second_moment) << ','
        << format_real(s.normalized);
    for (const auto& e : s.exceptional)
        out << ',' << e.count;
    out << '\n';
}

}  // namespace quadprime::moments
