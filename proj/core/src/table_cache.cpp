#include "quadprime/errors.hpp"
#include "quadprime/sieve.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <string>

namespace quadprime::sieve {

namespace {

constexpr std::array<char, 4> kMagic = {'Q', 'P', 'T', 'B'};
constexpr std::size_t kHeaderBytes = 24;

template <class U>
void put_le(std::vector<char>& out, U value) {
    for (std::size_t i = 0; i < sizeof(U); ++i)
        out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <class U>
U get_le(const char* in) {
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        value |= static_cast<U>(static_cast<unsigned char>(in[i])) << (8 * i);
    return value;
}

}  // namespace

void save_lambda_table(const std::filesystem::path& path, const LambdaTable& table) {
    std::vector<char> bytes;
    bytes.reserve(kHeaderBytes + table.size() * sizeof(double));
    bytes.insert(bytes.end(), kMagic.begin(), kMagic.end());
    put_le<std::uint32_t>(bytes, kCacheVersion);
    put_le<std::uint64_t>(bytes, table.lo());
    put_le<std::uint64_t>(bytes, table.hi());
    for (const double v : table.values())
        put_le<std::uint64_t>(bytes, std::bit_cast<std::uint64_t>(v));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open cache file for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("failed writing cache file: " + path.string());
}

LambdaTable load_lambda_table(const std::filesystem::path& path, const SieveConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open cache file: " + path.string());
    std::array<char, kHeaderBytes> header{};
    if (!in.read(header.data(), header.size()))
        throw CacheFormatError("truncated cache header: " + path.string());
    if (!std::equal(kMagic.begin(), kMagic.end(), header.begin()))
        throw CacheFormatError("bad cache magic: " + path.string());
    const auto version = get_le<std::uint32_t>(header.data() + 4);
    if (version != kCacheVersion)
        throw CacheFormatError("unsupported cache version " + std::to_string(version));
    const auto lo = get_le<std::uint64_t>(header.data() + 8);
    const auto hi = get_le<std::uint64_t>(header.data() + 16);
    if (lo == 0 || lo > hi)
        throw CacheFormatError("invalid cache range");
    const std::uint64_t count = hi - lo + 1;
    if (count > cfg.memory_budget / sizeof(double))
        throw BudgetError("cached table exceeds the memory budget");

    const auto file_size = std::filesystem::file_size(path);
    if (file_size != kHeaderBytes + count * sizeof(double))
        throw CacheFormatError("cache payload size does not match its header");

    std::vector<char> payload(count * sizeof(double));
    if (!in.read(payload.data(), static_cast<std::streamsize>(payload.size())))
        throw CacheFormatError("truncated cache payload");
    std::vector<double> values(count);
    for (std::uint64_t i = 0; i < count; ++i)
        values[i] = std::bit_cast<double>(get_le<std::uint64_t>(payload.data() + i * sizeof(double)));
    return LambdaTable(lo, std::move(values));
}

}  // namespace quadprime::sieve
