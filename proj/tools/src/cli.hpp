#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace quadprime::cli {

enum class Format { csv, json };

struct RunConfig {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::uint64_t P = 10'000;
    std::uint64_t Q1 = 0;
    double tol = 1e-6;
    std::uint64_t segment_size = 0;
    std::uint64_t memory_budget = 0;
    unsigned worker_count = 1;
    std::filesystem::path output_dir = ".";
    Format format = Format::csv;

    /// Throws std::invalid_argument when a numeric field is not positive.
    void validate() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 usage or argument error, 2 failed verification.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace quadprime::cli
