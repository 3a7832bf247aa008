#include "cli.hpp"

#include "checks.hpp"

#include "quadprime/errors.hpp"
#include "quadprime/expsum.hpp"
#include "quadprime/moments.hpp"
#include "quadprime/sieve.hpp"
#include "quadprime/singular.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#ifndef QUADPRIME_VERSION
#define QUADPRIME_VERSION "0.0.0"
#endif

namespace quadprime::cli {

namespace {

// psi cross-checks against the circle integral only up to this x.
constexpr std::uint64_t kCircleCheckLimit = 50;
constexpr double kCircleTolerance = 1e-6;

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    RunConfig cfg;
    std::uint64_t k = 1;
    std::uint64_t q = 1;
    std::uint64_t limit = 2;
    std::string method = "euler";
    std::optional<std::uint64_t> P;
    std::optional<double> tol;
    std::optional<std::uint64_t> budget;
    std::string format = "csv";
    std::string cache;
    std::string suite;
    std::uint64_t seed = 0;
    bool calibrate = false;
    bool timing = false;
    std::uint64_t qmax = 0;
    std::uint64_t kmax = 10'000;
};

std::uint64_t budget_from_env() {
    const char* raw = std::getenv("QUADPRIME_BUDGET_BYTES");
    if (raw == nullptr || *raw == '\0')
        return sieve::kDefaultMemoryBudget;
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
        value = std::stoull(raw, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != std::string(raw).size() || value == 0)
        throw std::invalid_argument(std::string("QUADPRIME_BUDGET_BYTES is not a positive integer: ") + raw);
    return value;
}

sieve::SieveConfig sieve_config(const RunConfig& cfg) {
    sieve::SieveConfig sc;
    sc.segment_size = cfg.segment_size;
    sc.memory_budget = cfg.memory_budget;
    sc.workers = cfg.worker_count;
    return sc;
}

void add_resource_flags(CLI::App* sub, Options& o) {
    sub->add_option("--workers", o.cfg.worker_count, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--segment-size", o.cfg.segment_size, "Sieve segment length")->check(CLI::PositiveNumber);
    sub->add_option("--budget", o.budget, "Memory budget in bytes (default: QUADPRIME_BUDGET_BYTES or 2 GiB)")
        ->check(CLI::PositiveNumber);
}

singular::Method parse_method(const std::string& name) {
    return name == "lmethod" ? singular::Method::lmethod : singular::Method::euler;
}

// ---------------------------------------------------------------------------

int cmd_psi(const Options& o, std::ostream& out) {
    const std::uint64_t x = o.cfg.x;
    const std::uint64_t k = o.k;
    const auto lambda = sieve::build_lambda_table(1, x * x + k, sieve_config(o.cfg));
    double psi = 0.0;
    for (std::uint64_t n = 1; n <= x; ++n)
        psi += lambda(n * n + k);
    out << moments::format_real(psi) << '\n';
    if (x <= kCircleCheckLimit) {
        const double circle = expsum::circle_psi_oracle(x, k, k, lambda);
        const double diff = std::fabs(circle - psi);
        if (!(diff <= kCircleTolerance))
            throw VerificationFailure(fmt::format("circle integral gives {}, direct sum {}", circle, psi));
        out << "circle check: ok (difference " << moments::format_real(diff) << ")\n";
    }
    return kExitOk;
}

int cmd_singular(const Options& o, std::ostream& out) {
    singular::SingularCfg scfg;
    scfg.method = parse_method(o.method);
    if (o.P)
        scfg.euler_cutoff = *o.P;
    if (o.tol)
        scfg.tol = *o.tol;
    if (scfg.method == singular::Method::euler && o.tol)
        throw std::invalid_argument("--tol applies to --method lmethod only");
    if (scfg.method == singular::Method::lmethod && o.P)
        throw std::invalid_argument("--p applies to --method euler only");
    out << moments::format_real(singular::singular_series(o.k, scfg)) << '\n';
    return kExitOk;
}

int cmd_sigma(const Options& o, std::ostream& out) {
    out << singular::sigma_q(o.q, o.k) << '\n';
    return kExitOk;
}

sieve::LambdaTable sweep_table(const Options& o, std::uint64_t z, std::ostream& err) {
    const auto sc = sieve_config(o.cfg);
    if (!o.cache.empty() && std::filesystem::exists(o.cache)) {
        auto table = sieve::load_lambda_table(o.cache, sc);
        if (table.covers(1, z))
            return table;
        err << "cache " << o.cache << " covers [" << table.lo() << ", " << table.hi() << "], rebuilding to " << z
            << '\n';
    }
    auto table = sieve::build_lambda_table(1, z, sc);
    if (!o.cache.empty())
        sieve::save_lambda_table(o.cache, table);
    return table;
}

nlohmann::ordered_json real(double v) { return std::stod(moments::format_real(v)); }

void write_sweep_json(std::ostream& file, const moments::SweepResult& r, const Options& o,
                      std::optional<double> seconds) {
    nlohmann::ordered_json doc;
    doc["meta"]["version"] = QUADPRIME_VERSION;
    doc["meta"]["workers"] = o.cfg.worker_count;
    if (seconds)
        doc["meta"]["wall_time_s"] = real(*seconds);
    auto& errors = doc["errors"] = nlohmann::ordered_json::array();
    for (const auto& e : r.records)
        errors.push_back({{"k", e.k},
                          {"squarefree", e.squarefree ? 1 : 0},
                          {"psi", real(e.psi)},
                          {"singular", real(e.singular)},
                          {"error", real(e.error)}});
    const auto& s = r.summary;
    auto& m = doc["moments"];
    m["x"] = s.x;
    m["y"] = s.y;
    m["count_squarefree"] = s.count_squarefree;
    m["second_moment"] = real(s.second_moment);
    m["normalized"] = real(s.normalized);
    for (const auto& e : s.exceptional)
        m["exc_B" + moments::format_real(e.exponent)] = e.count;
    file << doc.dump(2) << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    return file;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const RunConfig& c = o.cfg;
    singular::SingularCfg scfg;
    scfg.method = parse_method(o.method);
    scfg.euler_cutoff = o.P ? *o.P : std::max<std::uint64_t>(10'000, c.x);
    scfg.tol = c.tol;
    scfg.validate();

    moments::SweepOptions options;
    options.workers = c.worker_count;
    options.sieve = sieve_config(c);
    const auto table = sweep_table(o, c.x * c.x + c.y, err);
    const auto result = moments::moment_sweep(c.x, c.y, scfg, options, table);
    for (const auto& w : result.warnings)
        err << "warning: " << w << '\n';

    std::filesystem::create_directories(c.output_dir);
    if (c.format == Format::csv) {
        auto errors = open_output(c.output_dir / "errors.csv");
        moments::write_errors_csv(errors, result.records);
        auto summary = open_output(c.output_dir / "moments.csv");
        moments::write_moments_csv(summary, result.summary);
        out << (c.output_dir / "errors.csv").string() << '\n' << (c.output_dir / "moments.csv").string() << '\n';
    } else {
        std::optional<double> seconds;
        if (o.timing)
            seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto file = open_output(c.output_dir / "sweep.json");
        write_sweep_json(file, result, o, seconds);
        out << (c.output_dir / "sweep.json").string() << '\n';
    }
    return kExitOk;
}

int cmd_phi_moment(const Options& o, std::ostream& out) {
    out << moments::format_real(moments::phi_moment(o.cfg.y, o.cfg.Q1, o.cfg.tol, o.cfg.worker_count)) << '\n';
    return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
    if (o.suite == "weyl" && o.calibrate) {
        out << fmt::format("{:.17g}", expsum::weyl_grid_max(o.seed)) << '\n';
        return kExitOk;
    }
    CheckReport report;
    if (o.suite == "weyl")
        report = check_weyl(o.seed);
    else if (o.suite == "pv")
        report = check_pv(o.qmax ? o.qmax : 500);
    else if (o.suite == "decompose")
        report = check_decompose(o.qmax ? o.qmax : 60);
    else if (o.suite == "gauss")
        report = check_gauss(o.qmax ? o.qmax : 50);
    else
        report = check_sandwich(o.kmax, o.tol.value_or(1e-4));
    out << fmt::format("{}: {} ({} cases, worst {})\n", o.suite, report.pass ? "PASS" : "FAIL", report.cases,
                       moments::format_real(report.worst));
    if (!report.pass)
        throw VerificationFailure(report.detail);
    return kExitOk;
}

int cmd_tables(const Options& o, std::ostream& out) {
    const auto table = sieve::build_lambda_table(1, o.limit, sieve_config(o.cfg));
    std::uint64_t prime_powers = 0;
    for (const double v : table.values())
        prime_powers += v > 0.0 ? 1 : 0;
    out << "lambda table [1, " << o.limit << "]: " << prime_powers << " prime powers\n";
    if (!o.cache.empty()) {
        sieve::save_lambda_table(o.cache, table);
        out << "saved " << o.cache << '\n';
    }
    return kExitOk;
}

}  // namespace

void RunConfig::validate() const {
    if (x == 0 || y == 0 || P == 0 || Q1 == 0 || segment_size == 0 || memory_budget == 0 || worker_count == 0)
        throw std::invalid_argument("numeric parameters must be positive");
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw std::invalid_argument("tol must be positive");
    if (output_dir.empty())
        throw std::invalid_argument("output directory must not be empty");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    o.cfg.x = 1;
    o.cfg.y = 1;
    o.cfg.Q1 = 1;
    o.cfg.segment_size = sieve::kDefaultSegmentSize;

    CLI::App app{"Primes in quadratic progressions: psi(x; k), singular series, moments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QUADPRIME_VERSION);

    auto* psi = app.add_subcommand("psi", "psi(x; k) = sum_{n<=x} Lambda(n^2 + k), circle-checked for x <= 50");
    psi->add_option("--x", o.cfg.x, "Upper limit of n")->required()->check(CLI::PositiveNumber);
    psi->add_option("--k", o.k, "Shift k")->required()->check(CLI::PositiveNumber);
    add_resource_flags(psi, o);

    auto* sing = app.add_subcommand("singular", "Singular series S(k)");
    sing->add_option("--k", o.k, "Shift k")->required()->check(CLI::PositiveNumber);
    sing->add_option("--method", o.method, "euler (truncated product) or lmethod (L-accelerated)")
        ->check(CLI::IsMember({"euler", "lmethod"}));
    auto* p_opt = sing->add_option("--p", o.P, "Euler product cutoff P (default 10000)")->check(CLI::Range(3ULL, ~0ULL));
    auto* tol_opt = sing->add_option("--tol", o.tol, "Absolute accuracy for lmethod (default 1e-6)")
                        ->check(CLI::PositiveNumber);
    p_opt->excludes(tol_opt);

    auto* sigma = app.add_subcommand("sigma", "Complete quadratic sum Sigma(q)");
    sigma->add_option("--q", o.q, "Modulus q")->required()->check(CLI::PositiveNumber);
    sigma->add_option("--k", o.k, "Shift k")->required()->check(CLI::PositiveNumber);

    std::string out_dir = ".";
    auto* sweep = app.add_subcommand("sweep", "Error terms and moments for every k <= y");
    sweep->add_option("--x", o.cfg.x, "Upper limit of n (at least 2)")->required()->check(CLI::Range(2ULL, ~0ULL));
    sweep->add_option("--y", o.cfg.y, "Upper limit of k")->required()->check(CLI::PositiveNumber);
    sweep->add_option("--p", o.P, "Euler product cutoff P (default max(10000, x))")->check(CLI::Range(3ULL, ~0ULL));
    sweep->add_option("--method", o.method, "Singular series method: euler or lmethod")
        ->check(CLI::IsMember({"euler", "lmethod"}));
    sweep->add_option("--tol", o.cfg.tol, "Absolute accuracy for lmethod")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--format", o.format, "csv (errors.csv, moments.csv) or json (sweep.json)")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--cache", o.cache, "Lambda table cache file, read if present and written otherwise");
    sweep->add_flag("--timing", o.timing, "Record wall time in the JSON meta block");
    add_resource_flags(sweep, o);

    auto* phi = app.add_subcommand("phi-moment", "Sum over squarefree k <= y of Phi(k)^2");
    phi->add_option("--y", o.cfg.y, "Upper limit of k")->required()->check(CLI::PositiveNumber);
    phi->add_option("--q1", o.cfg.Q1, "Truncation point Q1 of the Dirichlet series")->required()
        ->check(CLI::PositiveNumber);
    phi->add_option("--tol", o.cfg.tol, "Absolute accuracy of each S(k)")->check(CLI::PositiveNumber);
    add_resource_flags(phi, o);

    auto* check = app.add_subcommand("check", "Run one invariant suite; exit 2 on failure");
    check->add_option("suite", o.suite, "weyl, pv, decompose, gauss or sandwich")->required()
        ->check(CLI::IsMember({"weyl", "pv", "decompose", "gauss", "sandwich"}));
    check->add_option("--seed", o.seed, "Seed of the Weyl grid");
    check->add_flag("--calibrate", o.calibrate, "weyl: print the grid maximum instead of checking it");
    check->add_option("--qmax", o.qmax, "Largest modulus (pv 500, decompose 60, gauss 50)")
        ->check(CLI::PositiveNumber);
    check->add_option("--kmax", o.kmax, "sandwich: largest k")->check(CLI::PositiveNumber);
    check->add_option("--tol", o.tol, "sandwich: tolerance on the bounds (default 1e-4)")
        ->check(CLI::PositiveNumber);

    auto* tables = app.add_subcommand("tables", "Build the Lambda table over [1, limit]");
    tables->add_option("--limit", o.limit, "Upper end of the table")->required()->check(CLI::Range(2ULL, ~0ULL));
    tables->add_option("--cache", o.cache, "Write the table to this file");
    add_resource_flags(tables, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        o.cfg.memory_budget = o.budget ? *o.budget : budget_from_env();
        o.cfg.output_dir = out_dir;
        o.cfg.format = o.format == "json" ? Format::json : Format::csv;
        if (o.P)
            o.cfg.P = *o.P;
        o.cfg.validate();

        if (psi->parsed())
            return cmd_psi(o, out);
        if (sing->parsed())
            return cmd_singular(o, out);
        if (sigma->parsed())
            return cmd_sigma(o, out);
        if (sweep->parsed())
            return cmd_sweep(o, out, err);
        if (phi->parsed())
            return cmd_phi_moment(o, out);
        if (check->parsed())
            return cmd_check(o, out);
        return cmd_tables(o, out);
    } catch (const VerificationFailure& e) {
        err << "verification failed: " << e.what() << '\n';
        return kExitVerification;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace quadprime::cli
